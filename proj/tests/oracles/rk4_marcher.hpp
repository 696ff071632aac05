// Classical RK4 time marcher for the MHD system in advective form.
// Test-only cross-check for the Picard iteration: it shares only the grid and
// the FFT with the library, and does its own projection and dealiasing.
#pragma once

#include <cmath>
#include <vector>

#include "mhdlab/fft.hpp"
#include "mhdlab/field.hpp"

namespace oracle {

using mhdlab::cplx;
using mhdlab::Grid;
using Modes = std::vector<std::vector<cplx>>; // [component][flat mode]

struct MhdState {
    Modes u;
    Modes b;
};

class Rk4Marcher {
public:
    Rk4Marcher(const Grid& g, double nu, double mu) : g_(g), nu_(nu), mu_(mu) {
        const int n = g.n();
        for (std::size_t f = 0; f < g.size(); ++f) {
            const auto idx = g.unflat(f);
            std::array<double, 3> k{0.0, 0.0, 0.0};
            bool keep = true;
            for (int a = 0; a < g.dim(); ++a) {
                const int s = idx[a] <= n / 2 ? idx[a] : idx[a] - n;
                keep = keep && 3 * std::abs(s) < n;
                k[a] = (2 * idx[a] == n ? 0.0 : s) * 2.0 * M_PI / g.length();
            }
            k_.push_back(k);
            keep_.push_back(keep ? 1.0 : 0.0);
            double k2 = 0.0;
            for (int a = 0; a < g.dim(); ++a) {
                const int s = idx[a] <= n / 2 ? idx[a] : idx[a] - n;
                const double kk = s * 2.0 * M_PI / g.length();
                k2 += kk * kk;
            }
            k2_.push_back(k2);
        }
    }

    MhdState state_of(const mhdlab::VectorField& u, const mhdlab::VectorField& b) const {
        MhdState s;
        for (int c = 0; c < g_.dim(); ++c) {
            s.u.emplace_back(u[c].modes().begin(), u[c].modes().end());
            s.b.emplace_back(b[c].modes().begin(), b[c].modes().end());
        }
        return s;
    }

    MhdState advance(MhdState s, double t_end, int steps) const {
        const double dt = t_end / steps;
        for (int i = 0; i < steps; ++i) {
            const auto k1 = rhs(s);
            const auto k2 = rhs(axpy(s, k1, 0.5 * dt));
            const auto k3 = rhs(axpy(s, k2, 0.5 * dt));
            const auto k4 = rhs(axpy(s, k3, dt));
            for (int c = 0; c < g_.dim(); ++c)
                for (std::size_t f = 0; f < g_.size(); ++f) {
                    s.u[c][f] += dt / 6.0 * (k1.u[c][f] + 2.0 * k2.u[c][f] + 2.0 * k3.u[c][f] + k4.u[c][f]);
                    s.b[c][f] += dt / 6.0 * (k1.b[c][f] + 2.0 * k2.b[c][f] + 2.0 * k3.b[c][f] + k4.b[c][f]);
                }
        }
        return s;
    }

    std::vector<std::vector<double>> samples(const Modes& m) const {
        std::vector<std::vector<double>> out;
        for (const auto& c : m) out.push_back(mhdlab::inverse_transform_real(g_, c));
        return out;
    }

private:
    MhdState axpy(const MhdState& s, const MhdState& d, double h) const {
        MhdState o = s;
        for (int c = 0; c < g_.dim(); ++c)
            for (std::size_t f = 0; f < g_.size(); ++f) {
                o.u[c][f] += h * d.u[c][f];
                o.b[c][f] += h * d.b[c][f];
            }
        return o;
    }

    std::vector<double> physical(const std::vector<cplx>& m, int deriv_axis) const {
        std::vector<cplx> t(m.size());
        for (std::size_t f = 0; f < m.size(); ++f) {
            t[f] = keep_[f] * m[f];
            if (deriv_axis >= 0) t[f] *= cplx(0.0, k_[f][deriv_axis]);
        }
        return mhdlab::inverse_transform_real(g_, t);
    }

    MhdState rhs(const MhdState& s) const {
        const int d = g_.dim();
        const std::size_t n = g_.size();
        std::vector<std::vector<double>> u(d), b(d);
        std::vector<std::vector<std::vector<double>>> du(d), db(d); // [comp][axis]
        for (int c = 0; c < d; ++c) {
            u[c] = physical(s.u[c], -1);
            b[c] = physical(s.b[c], -1);
            for (int a = 0; a < d; ++a) {
                du[c].push_back(physical(s.u[c], a));
                db[c].push_back(physical(s.b[c], a));
            }
        }
        MhdState out;
        std::vector<double> nu_phys(n), nb_phys(n);
        for (int c = 0; c < d; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                double au = 0.0, ab = 0.0;
                for (int a = 0; a < d; ++a) {
                    au += u[a][i] * du[c][a][i] - b[a][i] * db[c][a][i];
                    ab += u[a][i] * db[c][a][i] - b[a][i] * du[c][a][i];
                }
                nu_phys[i] = au;
                nb_phys[i] = ab;
            }
            out.u.push_back(mhdlab::forward_transform(g_, std::span<const double>(nu_phys)));
            out.b.push_back(mhdlab::forward_transform(g_, std::span<const double>(nb_phys)));
        }
        for (std::size_t f = 0; f < n; ++f) {
            const auto& k = k_[f];
            double kk = 0.0;
            for (int a = 0; a < d; ++a) kk += k[a] * k[a];
            cplx kdotn = 0.0;
            for (int a = 0; a < d; ++a) kdotn += k[a] * out.u[a][f];
            for (int c = 0; c < d; ++c) {
                cplx pn = out.u[c][f];
                if (kk > 0.0) pn -= k[c] * kdotn / kk;
                out.u[c][f] = -nu_ * k2_[f] * s.u[c][f] - keep_[f] * pn;
                out.b[c][f] = -mu_ * k2_[f] * s.b[c][f] - keep_[f] * out.b[c][f];
            }
        }
        return out;
    }

    Grid g_;
    double nu_;
    double mu_;
    std::vector<std::array<double, 3>> k_;
    std::vector<double> k2_;
    std::vector<double> keep_;
};

} // namespace oracle
