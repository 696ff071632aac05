// analyticity.hpp: complex-strip evaluation of band-limited fields and the
// empirical analyticity radius.
//
// A field sampled on the grid is a trigonometric polynomial, hence entire; its
// extension to x + iy is sum_k F(k) e^{ik.x} e^{-k.y}.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "mhdlab/constants.hpp"
#include "mhdlab/mild_solver.hpp"

namespace mhdlab {

class ComplexShiftField {
public:
    ComplexShiftField(const Grid& g, Point shift, std::vector<std::vector<cplx>> samples)
        : grid_(g), shift_(shift), samples_(std::move(samples)) {}

    const Grid& grid() const noexcept { return grid_; }
    const Point& shift() const noexcept { return shift_; }
    std::span<const cplx> component(int a) const noexcept { return samples_[a]; }

    /// sqrt(sum_j |F_j(x + iy)|^2) at grid point i.
    double modulus(std::size_t i) const noexcept {
        double s = 0.0;
        for (const auto& c : samples_) s += std::norm(c[i]);
        return std::sqrt(s);
    }

    double max_modulus() const noexcept {
        double m = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) m = std::max(m, modulus(i));
        return m;
    }

private:
    Grid grid_;
    Point shift_;
    std::vector<std::vector<cplx>> samples_;
};

/// Samples of F(x + iy) on the grid.
inline ComplexShiftField complex_shift_evaluate(const VectorField& f, const Point& y) {
    const Grid& g = f.grid();
    for (int a = 0; a < g.dim(); ++a)
        if (!std::isfinite(y[a])) throw ParameterError("complex_shift_evaluate: shift must be finite");
    std::vector<double> factor(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Multi idx = g.unflat(i);
        double ky = 0.0;
        for (int a = 0; a < g.dim(); ++a) ky += g.derivative_wavenumber(idx[a]) * y[a];
        factor[i] = std::exp(-ky);
    }
    std::vector<std::vector<cplx>> out;
    for (int a = 0; a < g.dim(); ++a) {
        std::vector<cplx> m(f[a].modes().begin(), f[a].modes().end());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] *= factor[i];
        out.push_back(inverse_transform(g, m));
    }
    return ComplexShiftField(g, y, std::move(out));
}

/// sqrt(t) / (2 C4).
inline double rho_lower_bound(double t, double c4) {
    if (!(t >= 0.0)) throw ParameterError("rho_lower_bound: time must be nonnegative");
    if (!(c4 > 0.0)) throw ParameterError("rho_lower_bound: C4 must be positive");
    return std::sqrt(t) / (2.0 * c4);
}

/// Unit directions for shift and segment searches. In 2D, `count` equispaced
/// angles in [0, pi). In 3D, the three axes followed by a Fibonacci lattice on
/// the upper hemisphere, so antipodal duplicates never occur.
inline std::vector<Point> search_directions(int dim, int count) {
    if (count < 1) throw ParameterError("direction count must be positive");
    std::vector<Point> out;
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            const double th = std::numbers::pi * i / count;
            out.push_back({std::cos(th), std::sin(th), 0.0});
        }
        return out;
    }
    const Point axes[3] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    for (int i = 0; i < std::min(count, 3); ++i) out.push_back(axes[i]);
    const int rest = count - static_cast<int>(out.size());
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < rest; ++i) {
        const double z = (i + 0.5) / rest;
        const double r = std::sqrt(1.0 - z * z);
        const double phi = golden * i;
        out.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return out;
}

struct StripTimeSample {
    double t = 0.0;
    double rho = 0.0;
    double u_max = 0.0; ///< max over sampled shifts and x of |u + iv|
    double b_max = 0.0; ///< max over sampled shifts and x of |b + ic|
    bool pass = true;   ///< u_max + b_max <= bound
};

struct StripBoundReport {
    double beta = 1.0;
    double c4 = 1.0;
    double bound = 0.0;    ///< 2 beta C4 (||U0|| + ||B0||)
    double measured = 0.0; ///< sup_t u_max + sup_t b_max
    std::vector<StripTimeSample> samples;
    bool pass = true;
};

/// Evaluates ||u+iv|| + ||b+ic|| over shifts |y| = rho(t) at every stored time
/// and compares with 2 beta C4 (||U0|| + ||B0||).
inline StripBoundReport strip_bound_check(const MildSolution& sol, double beta, const ConstantsLedger& ledger,
                                          int shift_samples = 16) {
    if (!(beta > 0.5 && beta <= 1.0)) throw ParameterError("strip_bound_check: beta must lie in (1/2, 1]");
    if (sol.times.empty()) throw PreconditionError("strip_bound_check: empty solution");
    const auto times = existence_times(sol.u0_norm, sol.b0_norm, ledger);
    const double t_beta = times.t_beta(beta);
    if (sol.horizon() > t_beta * (1.0 + 1e-12))
        throw HorizonError("strip_bound_check: stored time " + std::to_string(sol.horizon()) +
                           " exceeds T_beta = " + std::to_string(t_beta));
    StripBoundReport r;
    r.beta = beta;
    r.c4 = ledger.c4();
    r.bound = 2.0 * beta * ledger.c4() * (sol.u0_norm + sol.b0_norm);
    const auto dirs = search_directions(sol.u.front().dim(), shift_samples);
    double sup_u = 0.0, sup_b = 0.0;
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        StripTimeSample s;
        s.t = sol.times[i];
        s.rho = rho_lower_bound(s.t, ledger.c4());
        for (const auto& d : dirs) {
            const Point y{s.rho * d[0], s.rho * d[1], s.rho * d[2]};
            s.u_max = std::max(s.u_max, complex_shift_evaluate(sol.u[i], y).max_modulus());
            s.b_max = std::max(s.b_max, complex_shift_evaluate(sol.b[i], y).max_modulus());
        }
        s.pass = s.u_max + s.b_max <= r.bound;
        sup_u = std::max(sup_u, s.u_max);
        sup_b = std::max(sup_b, s.b_max);
        r.samples.push_back(s);
    }
    r.measured = sup_u + sup_b;
    r.pass = r.measured <= r.bound;
    return r;
}

struct RadiusEstimate {
    /// Fewer than three shells above threshold: the field is treated as
    /// band-limited and `rho` is meaningless.
    bool band_limited_cap = false;
    double rho = 0.0;
    int shells_used = 0;
};

/// Least-squares fit of log(shell-maximum amplitude) against |k|; the radius
/// is minus the slope. Shells below 1e-13 of the peak amplitude are ignored.
inline RadiusEstimate analyticity_radius_estimate(const VectorField& f) {
    const Grid& g = f.grid();
    struct Shell {
        double amp = -1.0;
        double k = 0.0;
    };
    std::map<int, Shell> shells;
    double peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Multi m = g.signed_mode(i);
        double n2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) n2 += static_cast<double>(m[a]) * m[a];
        if (n2 == 0.0) continue;
        double amp2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) amp2 += std::norm(f[a].mode(i));
        const double amp = std::sqrt(amp2);
        const double nk = std::sqrt(n2);
        const int s = static_cast<int>(std::lround(nk));
        Shell& sh = shells[s];
        if (amp > sh.amp || (amp == sh.amp && nk * g.k0() < sh.k)) {
            sh.amp = amp;
            sh.k = nk * g.k0();
        }
        peak = std::max(peak, amp);
    }
    if (peak == 0.0) throw PreconditionError("analyticity_radius_estimate: zero field");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (const auto& [s, sh] : shells) {
        if (sh.amp <= 1e-13 * peak) continue;
        const double y = std::log(sh.amp);
        sx += sh.k;
        sy += y;
        sxx += sh.k * sh.k;
        sxy += sh.k * y;
        ++count;
    }
    RadiusEstimate r;
    r.shells_used = count;
    if (count < 3) {
        r.band_limited_cap = true;
        return r;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    r.rho = std::max(0.0, -slope);
    return r;
}

} // namespace mhdlab
