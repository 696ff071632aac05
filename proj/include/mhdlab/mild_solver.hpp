// mild_solver.hpp: Duhamel-form Picard iteration for incompressible MHD.
//
// Level n of the scheme is obtained from level n-1 over the whole interval:
//
//   U^n(t) = e^{nu t Lap} U0 + int_0^t e^{nu (t-s) Lap} P[-d_j(U_j U - B_j B)](s) ds
//   B^n(t) = e^{mu t Lap} B0 + int_0^t e^{mu (t-s) Lap} [-d_j(U_j B - B_j U)](s) ds
//
// with the level n-1 fields inside the integrals and U^0 = B^0 = Pi^0 = 0. The
// Leray projector P is realised through the total pressure Pi. Time integrals
// are composite trapezoid sums on a uniform grid of output times.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mhdlab/constants.hpp"
#include "mhdlab/spectral.hpp"

namespace mhdlab {

struct SolverParams {
    Grid grid;
    double nu = 1.0;
    double mu = 1.0;
    int substeps = 16; ///< trapezoid intervals over [0, T]; output times are the nodes
    bool dealias = true;

    void validate() const {
        if (!(nu > 0.0)) throw ParameterError("viscosity nu must be positive");
        if (!(mu > 0.0)) throw ParameterError("magnetic diffusivity mu must be positive");
        if (substeps < 4) throw ParameterError("substeps must be >= 4");
    }
};

enum class PicardStatus { Converged, Diverged };

struct LevelRecord {
    int level = 0;
    double sup_sum = 0.0;   ///< max_t ||U^n|| + max_t ||B^n||
    double increment = 0.0; ///< max_t ||U^n - U^{n-1}|| + max_t ||B^n - B^{n-1}||
    bool lemma4_ok = true;
};

struct MildSolution {
    std::vector<double> times;
    std::vector<VectorField> u;
    std::vector<VectorField> b;
    std::vector<ScalarField> pi;
    std::vector<LevelRecord> history;
    PicardStatus status = PicardStatus::Converged;
    std::string diagnostic;
    double u0_norm = 0.0;
    double b0_norm = 0.0;

    bool converged() const noexcept { return status == PicardStatus::Converged; }
    double horizon() const noexcept { return times.empty() ? 0.0 : times.back(); }

    double max_u_norm() const {
        double m = 0.0;
        for (const auto& f : u) m = std::max(m, sup_norm(f));
        return m;
    }
    double max_b_norm() const {
        double m = 0.0;
        for (const auto& f : b) m = std::max(m, sup_norm(f));
        return m;
    }
};

struct ContractionReport {
    std::vector<double> increments;
    /// Largest ratio increment(n+1)/increment(n) over levels above round-off.
    double alpha_hat = 0.0;
    /// T >= T2 for the ledger used; non-convergence is expected there.
    bool beyond_t2 = false;
};

struct PicardResult {
    MildSolution solution;
    ContractionReport contraction;
};

namespace detail {

struct Products {
    std::vector<std::vector<std::vector<cplx>>> stress;    // G_jk = U_j U_k - B_j B_k
    std::vector<std::vector<std::vector<cplx>>> induction; // H_jk = U_j B_k - B_j U_k
};

inline std::vector<double> maybe_dealiased(const ScalarField& f, bool dealias) {
    if (!dealias) return std::vector<double>(f.values().begin(), f.values().end());
    return inverse_transform_real(f.grid(), truncate_modes(f.grid(), f.modes()));
}

inline std::vector<cplx> product_transform(const Grid& g, std::span<const double> p, bool dealias) {
    return dealias ? truncated_transform(g, p) : forward_transform(g, p);
}

inline Products quadratic_products(const VectorField& u, const VectorField& b, bool dealias) {
    const Grid& g = u.grid();
    const int d = g.dim();
    std::vector<std::vector<double>> us, bs;
    for (int a = 0; a < d; ++a) {
        us.push_back(maybe_dealiased(u[a], dealias));
        bs.push_back(maybe_dealiased(b[a], dealias));
    }
    Products out;
    out.stress.assign(d, std::vector<std::vector<cplx>>(d));
    out.induction.assign(d, std::vector<std::vector<cplx>>(d));
    std::vector<double> p(g.size());
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = us[j][i] * us[k][i] - bs[j][i] * bs[k][i];
            out.stress[j][k] = product_transform(g, p, dealias);
            if (k != j) out.stress[k][j] = out.stress[j][k];
        }
    for (int j = 0; j < d; ++j) {
        out.induction[j][j].assign(g.size(), cplx(0.0));
        for (int k = j + 1; k < d; ++k) {
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = us[j][i] * bs[k][i] - bs[j][i] * us[k][i];
            out.induction[j][k] = product_transform(g, p, dealias);
            out.induction[k][j] = out.induction[j][k];
            for (auto& c : out.induction[k][j]) c = -c;
        }
    }
    return out;
}

struct Sources {
    std::vector<std::vector<cplx>> u; // -i k_j G_jc - i k_c Pi
    std::vector<std::vector<cplx>> b; // -i k_j H_jc
};

inline Sources sources_from(const Grid& g, const Products& pr, std::span<const cplx> pi) {
    const int d = g.dim();
    Sources s;
    s.u.assign(d, std::vector<cplx>(g.size()));
    s.b.assign(d, std::vector<cplx>(g.size()));
    const cplx mi(0.0, -1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Multi idx = g.unflat(i);
        double k[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < d; ++a) k[a] = g.derivative_wavenumber(idx[a]);
        for (int c = 0; c < d; ++c) {
            cplx su = k[c] * pi[i];
            cplx sb = 0.0;
            for (int j = 0; j < d; ++j) {
                su += k[j] * pr.stress[j][c][i];
                sb += k[j] * pr.induction[j][c][i];
            }
            s.u[c][i] = mi * su;
            s.b[c][i] = mi * sb;
        }
    }
    return s;
}

inline double sup_difference(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    const std::size_t n = a.grid().size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int c = 0; c < a.dim(); ++c) {
            const double d = a[c].value(i) - b[c].value(i);
            s += d * d;
        }
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

inline void require_divergence_free(const VectorField& f, const char* name) {
    if (relative_divergence(f) > 1e-8)
        throw PreconditionError(std::string(name) + " is not divergence-free");
}

} // namespace detail

struct SchemeStepResult {
    VectorField u;
    VectorField b;
    ScalarField pi;
};

/// One level of the scheme evaluated at a single time t. The previous level is
/// given on an s-grid spanning [0, t]; its nodes need not be uniform.
inline SchemeStepResult scheme_step(const std::vector<VectorField>& u_prev, const std::vector<VectorField>& b_prev,
                                    const std::vector<ScalarField>& pi_prev, const std::vector<double>& s_grid,
                                    const VectorField& u0, const VectorField& b0, const SolverParams& params,
                                    double t) {
    params.validate();
    const Grid& g = u0.grid();
    require_same_grid(g, b0.grid(), "scheme_step");
    if (s_grid.empty()) throw PreconditionError("scheme_step: empty s-grid");
    if (u_prev.size() != s_grid.size() || b_prev.size() != s_grid.size() || pi_prev.size() != s_grid.size())
        throw PreconditionError("scheme_step: previous level must be sampled on every s-grid node");
    if (s_grid.front() != 0.0 || std::abs(s_grid.back() - t) > 1e-14 * std::max(1.0, t))
        throw PreconditionError("scheme_step: s-grid must span [0, t]");
    for (std::size_t l = 0; l < s_grid.size(); ++l) {
        require_same_grid(g, u_prev[l].grid(), "scheme_step");
        require_same_grid(g, b_prev[l].grid(), "scheme_step");
        require_same_grid(g, pi_prev[l].grid(), "scheme_step");
    }
    const int d = g.dim();
    std::vector<std::vector<cplx>> uh(d), bh(d);
    for (int c = 0; c < d; ++c) {
        uh[c].resize(g.size());
        bh[c].resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double k2 = g.k_squared(i);
            uh[c][i] = std::exp(-params.nu * k2 * t) * u0[c].mode(i);
            bh[c][i] = std::exp(-params.mu * k2 * t) * b0[c].mode(i);
        }
    }
    const std::size_t nodes = s_grid.size();
    for (std::size_t l = 0; l < nodes; ++l) {
        double w = 0.0;
        if (l > 0) w += 0.5 * (s_grid[l] - s_grid[l - 1]);
        if (l + 1 < nodes) w += 0.5 * (s_grid[l + 1] - s_grid[l]);
        if (w == 0.0) continue;
        const auto pr = detail::quadratic_products(u_prev[l], b_prev[l], params.dealias);
        const auto src = detail::sources_from(g, pr, pi_prev[l].modes());
        const double lag = t - s_grid[l];
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double k2 = g.k_squared(i);
            const double eu = w * std::exp(-params.nu * k2 * lag);
            const double eb = w * std::exp(-params.mu * k2 * lag);
            for (int c = 0; c < d; ++c) {
                uh[c][i] += eu * src.u[c][i];
                bh[c][i] += eb * src.b[c][i];
            }
        }
    }
    const bool solenoidal = u0.divergence_free() && b0.divergence_free();
    VectorField u = VectorField::from_modes(g, std::move(uh), solenoidal);
    VectorField b = VectorField::from_modes(g, std::move(bh), solenoidal);
    ScalarField pi = solve_total_pressure(u, b);
    return {std::move(u), std::move(b), std::move(pi)};
}

/// True iff every level satisfies max_t||U^n|| + max_t||B^n|| <= 2 C1 (||U0|| + ||B0||).
inline bool lemma4_bound_check(const std::vector<LevelRecord>& history, double u0_norm, double b0_norm,
                               double c1) {
    if (history.empty()) throw PreconditionError("lemma4_bound_check: empty history");
    const double bound = 2.0 * c1 * (u0_norm + b0_norm);
    return std::all_of(history.begin(), history.end(),
                       [bound](const LevelRecord& r) { return r.sup_sum <= bound; });
}

inline bool lemma4_bound_check(const std::vector<LevelRecord>& history, double u0_norm, double b0_norm,
                               const ConstantsLedger& ledger) {
    return lemma4_bound_check(history, u0_norm, b0_norm, ledger.c1());
}

/// Largest consecutive ratio among increments above `floor`.
inline double fit_contraction_factor(const std::vector<double>& increments, double floor) {
    double alpha = 0.0;
    for (std::size_t n = 1; n + 1 < increments.size(); ++n) {
        // increments[0] is ||U^1|| + ||B^1||, the heat flow itself; ratios start after it.
        if (increments[n] > floor && increments[n + 1] > floor)
            alpha = std::max(alpha, increments[n + 1] / increments[n]);
    }
    return alpha;
}

/// Iterates the scheme on [0, horizon] until the sup-norm increment drops
/// below `tol` or `n_max` levels have been computed.
inline PicardResult picard_solve(const VectorField& u0, const VectorField& b0, const SolverParams& params,
                                 double horizon, int n_max = 60, double tol = 1e-10,
                                 const ConstantsLedger& ledger = {}) {
    params.validate();
    const Grid& g = u0.grid();
    require_same_grid(g, b0.grid(), "picard_solve");
    require_same_grid(g, params.grid, "picard_solve");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ParameterError("picard_solve: horizon must be positive");
    if (n_max < 1) throw ParameterError("picard_solve: n_max must be >= 1");
    detail::require_divergence_free(u0, "U0");
    detail::require_divergence_free(b0, "B0");

    const int d = g.dim();
    const int m = params.substeps;
    const double h = horizon / m;
    const bool solenoidal = true;

    PicardResult result;
    MildSolution& sol = result.solution;
    sol.u0_norm = sup_norm(u0);
    sol.b0_norm = sup_norm(b0);
    const double amplitude = sol.u0_norm + sol.b0_norm;
    const auto times_info = existence_times(sol.u0_norm, sol.b0_norm, ledger);
    result.contraction.beyond_t2 = !times_info.unbounded && horizon >= times_info.t2;
    for (int i = 0; i <= m; ++i) sol.times.push_back(i == m ? horizon : i * h);

    std::vector<double> eu_step(g.size()), eb_step(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        eu_step[i] = std::exp(-params.nu * g.k_squared(i) * h);
        eb_step[i] = std::exp(-params.mu * g.k_squared(i) * h);
    }

    std::vector<VectorField> prev_u(m + 1, VectorField::zero(g));
    std::vector<VectorField> prev_b(m + 1, VectorField::zero(g));
    bool have_prev_sources = false; // level 0 has vanishing sources

    for (int level = 1; level <= n_max; ++level) {
        std::vector<VectorField> next_u, next_b;
        next_u.reserve(m + 1);
        next_b.reserve(m + 1);
        std::vector<std::vector<cplx>> ru(d, std::vector<cplx>(g.size())), rb = ru;
        std::vector<std::vector<cplx>> first_u, first_b;
        for (int node = 0; node <= m; ++node) {
            const double t = sol.times[node];
            detail::Sources src;
            if (have_prev_sources) {
                const auto pr = detail::quadratic_products(prev_u[node], prev_b[node], params.dealias);
                const auto pi = pressure_from_stress(g, pr.stress);
                src = detail::sources_from(g, pr, pi);
            } else {
                src.u.assign(d, std::vector<cplx>(g.size()));
                src.b = src.u;
            }
            if (node == 0) {
                first_u = src.u;
                first_b = src.b;
            }
            std::vector<std::vector<cplx>> uh(d, std::vector<cplx>(g.size())), bh = uh;
            for (int c = 0; c < d; ++c)
                for (std::size_t i = 0; i < g.size(); ++i) {
                    const double k2 = g.k_squared(i);
                    if (node > 0) {
                        ru[c][i] = eu_step[i] * ru[c][i] + src.u[c][i];
                        rb[c][i] = eb_step[i] * rb[c][i] + src.b[c][i];
                    } else {
                        ru[c][i] = src.u[c][i];
                        rb[c][i] = src.b[c][i];
                    }
                    const double ehu = std::exp(-params.nu * k2 * t);
                    const double ehb = std::exp(-params.mu * k2 * t);
                    uh[c][i] = ehu * u0[c].mode(i);
                    bh[c][i] = ehb * b0[c].mode(i);
                    if (node > 0) {
                        uh[c][i] += h * (ru[c][i] - 0.5 * ehu * first_u[c][i] - 0.5 * src.u[c][i]);
                        bh[c][i] += h * (rb[c][i] - 0.5 * ehb * first_b[c][i] - 0.5 * src.b[c][i]);
                    }
                }
            next_u.push_back(VectorField::from_modes(g, std::move(uh), solenoidal));
            next_b.push_back(VectorField::from_modes(g, std::move(bh), solenoidal));
        }

        LevelRecord rec;
        rec.level = level;
        double max_u = 0.0, max_b = 0.0, inc_u = 0.0, inc_b = 0.0;
        for (int node = 0; node <= m; ++node) {
            max_u = std::max(max_u, sup_norm(next_u[node]));
            max_b = std::max(max_b, sup_norm(next_b[node]));
            inc_u = std::max(inc_u, detail::sup_difference(next_u[node], prev_u[node]));
            inc_b = std::max(inc_b, detail::sup_difference(next_b[node], prev_b[node]));
        }
        rec.sup_sum = max_u + max_b;
        rec.increment = inc_u + inc_b;
        rec.lemma4_ok = rec.sup_sum <= 2.0 * ledger.c1() * amplitude;
        sol.history.push_back(rec);
        result.contraction.increments.push_back(rec.increment);
        prev_u = std::move(next_u);
        prev_b = std::move(next_b);
        have_prev_sources = true;

        if (!std::isfinite(rec.increment)) {
            sol.status = PicardStatus::Diverged;
            sol.diagnostic = "non-finite increment at level " + std::to_string(level);
            break;
        }
        if (rec.increment < tol) {
            sol.status = PicardStatus::Converged;
            break;
        }
        if (level == n_max) {
            sol.status = PicardStatus::Diverged;
            sol.diagnostic = "increment " + std::to_string(rec.increment) + " above tolerance after " +
                             std::to_string(n_max) + " levels" +
                             (result.contraction.beyond_t2 ? " (horizon beyond T2)" : "");
        }
    }

    result.contraction.alpha_hat =
        fit_contraction_factor(result.contraction.increments, 1e-12 * std::max(amplitude, 1e-300));
    sol.u = std::move(prev_u);
    sol.b = std::move(prev_b);
    for (int node = 0; node <= m; ++node) sol.pi.push_back(solve_total_pressure(sol.u[node], sol.b[node]));
    // The first node is the data itself.
    sol.u[0] = u0.with_divergence_free(true);
    sol.b[0] = b0.with_divergence_free(true);
    return result;
}

struct Corollary6Report {
    bool pass = true;
    double t3 = 0.0;
    double measured = 0.0; ///< max over stored t <= T3 of ||B(t)||
    double bound = 0.0;    ///< 2 C3 ||B0||
};

/// max_{t <= T3} ||B(t)|| <= 2 C3 ||B0|| with T3 = min(T, 1/(16 C_mu^2 ||U||^2)).
inline Corollary6Report corollary6_check(const MildSolution& sol, double b0_norm, double c3) {
    Corollary6Report r;
    const double u_sup = sol.max_u_norm();
    r.t3 = u_sup == 0.0 ? sol.horizon() : std::min(sol.horizon(), 1.0 / (16.0 * c3 * c3 * u_sup * u_sup));
    r.bound = 2.0 * c3 * b0_norm;
    for (std::size_t i = 0; i < sol.times.size(); ++i)
        if (sol.times[i] <= r.t3) r.measured = std::max(r.measured, sup_norm(sol.b[i]));
    r.pass = r.measured <= r.bound;
    return r;
}

inline Corollary6Report corollary6_check(const MildSolution& sol, double b0_norm, const ConstantsLedger& ledger) {
    return corollary6_check(sol, b0_norm, ledger.c3());
}

} // namespace mhdlab
