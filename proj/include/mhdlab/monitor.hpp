// monitor.hpp: stepwise regularity certification near a horizon T.
//
// A chain starts at t0 = T - eps. Each step either finds t0 + tau > T (done)
// or searches candidate times in [t0 + tau/4, t0 + tau] for one where the
// criterion's sparseness hypothesis holds at every scanned point, then checks
// the measured norms against the budget A = ||U(t0)|| + ||B(t0)|| and moves t0
// to the certified time. tau is T4(t0), or T_beta(t0) for thm13.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mhdlab/analyticity.hpp"
#include "mhdlab/harmonic_measure.hpp"
#include "mhdlab/mild_solver.hpp"
#include "mhdlab/sparseness.hpp"

namespace mhdlab {

enum class Criterion { Thm11, Thm12, Thm13 };

inline std::string to_string(Criterion c) {
    switch (c) {
    case Criterion::Thm11: return "thm11";
    case Criterion::Thm12: return "thm12";
    case Criterion::Thm13: return "thm13";
    }
    return "?";
}

inline Criterion parse_criterion(const std::string& s) {
    if (s == "thm11") return Criterion::Thm11;
    if (s == "thm12") return Criterion::Thm12;
    if (s == "thm13") return Criterion::Thm13;
    throw ParameterError("unknown criterion '" + s + "' (expected thm11, thm12 or thm13)");
}

struct CriterionParams {
    Criterion criterion = Criterion::Thm11;
    double delta = 0.5;
    std::optional<double> alpha; ///< unset selects the smallest admissible (1 - h)/h
    double gamma = 0.5;          ///< thm12
    double beta = 0.75;          ///< thm13
    ConstantsLedger ledger;

    double h() const { return solynin_h(delta); }
    double alpha_value() const { return alpha ? *alpha : (1.0 - h()) / h(); }

    /// Throws ParameterError naming the first violated admissibility condition.
    void validate() const {
        if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
        const double hh = h();
        const double a = alpha_value();
        const double amin = (1.0 - hh) / hh;
        if (!(a >= amin * (1.0 - 1e-12)))
            throw ParameterError("inadmissible alpha " + std::to_string(a) + ": need alpha >= (1-h)/h = " +
                                 std::to_string(amin));
        const double scale = std::pow(2.0 * ledger.c4(), a);
        switch (criterion) {
        case Criterion::Thm11:
            if (!(0.5 >= 1.0 / (std::pow(2.0, 1.0 / hh) * scale)))
                throw ParameterError("inadmissible parameters: 1/2 < 1/(2^{1/h} (2 C4)^alpha)");
            break;
        case Criterion::Thm12:
            if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0, 1)");
            break;
        case Criterion::Thm13:
            if (!(beta > 0.5 && beta < 1.0)) throw ParameterError("beta must lie in (1/2, 1)");
            if (!(std::pow(beta, 1.0 - hh) >= 1.0 / scale))
                throw ParameterError("inadmissible parameters: beta^{1-h} < 1/(2 C4)^alpha");
            break;
        }
    }
};

inline double threshold_thm11(double a, const CriterionParams& p) {
    p.validate();
    return a / (std::pow(2.0, 1.0 / p.h()) * std::pow(2.0 * p.ledger.c4(), p.alpha_value()));
}

struct Thm12Thresholds {
    double m_u = 0.0;
    double m_b = 0.0;
    double share_u = 0.0; ///< gamma^h
    double share_b = 0.0; ///< 1 - gamma^h
};

inline Thm12Thresholds thresholds_thm12(double a, const CriterionParams& p) {
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw ParameterError("gamma must lie in (0, 1)");
    p.validate();
    const double hh = p.h();
    const double scale = std::pow(2.0 * p.ledger.c4(), p.alpha_value());
    Thm12Thresholds t;
    t.share_u = std::pow(p.gamma, hh);
    t.share_b = 1.0 - t.share_u;
    t.m_u = p.gamma * a / scale;
    t.m_b = std::pow(t.share_b, 1.0 / hh) * a / scale;
    return t;
}

inline double threshold_thm13(double a, const CriterionParams& p) {
    p.validate();
    return a / std::pow(2.0 * p.ledger.c4(), p.alpha_value());
}

/// 2 C3 ||B(t0)|| <= (1 - beta^{1-h}) (||U(t0)|| + ||B(t0)||).
inline bool condition_thm13(double u_norm, double b_norm, const CriterionParams& p) {
    const double rhs = (1.0 - std::pow(p.beta, 1.0 - p.h())) * (u_norm + b_norm);
    return 2.0 * p.ledger.c3() * b_norm <= rhs;
}

enum class StepCase { HorizonReached, SparseCertified, Failed };

inline std::string to_string(StepCase c) {
    switch (c) {
    case StepCase::HorizonReached: return "horizon-reached";
    case StepCase::SparseCertified: return "sparse-certified";
    case StepCase::Failed: return "failed";
    }
    return "?";
}

struct MonitorOptions {
    SolverParams solver;
    int n_max = 60;
    double tol = 1e-10;
    int candidates = 8;
    int stride = 1;
    ScanResolution scan;
    int mc_points = 4;          ///< witness points re-verified by walk-on-spheres per certified step
    std::uint64_t walks = 100000;
    double mc_step = 0.0;
    std::uint64_t seed = 1;
    int max_steps = 10000;
    int shift_samples = 16;
};

/// One walk-on-spheres check of the interpolation step at a witness point.
struct HarmonicWitness {
    std::string set;     ///< "S", "U" or "B"
    Point x0{0.0, 0.0, 0.0};
    Point direction{0.0, 0.0, 0.0};
    double scale = 0.0;
    double k_measure = 0.0; ///< |K| / (2r)
    double omega_hat = 0.0;
    double standard_error = 0.0;
    std::uint64_t seed = 0;
    bool pass = false; ///< omega_hat >= h - 3 SE
};

struct StepVerdict {
    int index = 0;
    double t0 = 0.0;
    double tau = 0.0;      ///< T4(t0), or T_beta(t0) for thm13
    double t = 0.0;        ///< chosen check time; t0 when no field work was needed
    StepCase result = StepCase::Failed;
    double a = 0.0;        ///< ||U(t0)|| + ||B(t0)||
    double u_norm_t0 = 0.0;
    double b_norm_t0 = 0.0;
    double u_norm = 0.0;   ///< at t
    double b_norm = 0.0;
    double measured = 0.0; ///< u_norm + b_norm
    std::vector<double> thresholds;
    double r_cap = 0.0;
    double worst_ratio = 0.0;
    std::size_t scanned_points = 0;
    int candidates_tried = 0;
    double interpolation_bound = 0.0; ///< max_principle_bound(M, big, h)
    double strip_measured = 0.0;      ///< sup |u+iv| + sup |b+ic| over shifts rho(t)
    double strip_bound = 0.0;         ///< 2 beta C4 A
    bool corollary6_ok = true;
    bool magnetic_condition = true; ///< thm13 condition evaluated at this t0
    std::vector<HarmonicWitness> witnesses;
    std::string diagnostic;
};

enum class MonitorStatus { CertifiedNonsingular, Inconclusive };

inline std::string to_string(MonitorStatus s) {
    return s == MonitorStatus::CertifiedNonsingular ? "certified-nonsingular" : "inconclusive";
}

struct MonitorVerdict {
    std::vector<StepVerdict> steps;
    MonitorStatus status = MonitorStatus::Inconclusive;
    double horizon = 0.0;
    double epsilon = 0.0;
    std::string diagnostic;
    /// Flags the thm13 budget exponent: beta^{1-h} is used, although an
    /// earlier bound in the derivation carries beta^h.
    std::string note;
};

/// Fields at a single time, advanced by restarted Picard solves.
struct SolutionSource {
    double t = 0.0;
    VectorField u;
    VectorField b;
};

/// Advances `src` to time `target` with Picard restarts on segments of at most
/// T2(t)/2. Throws PreconditionError when a segment fails to converge.
inline SolutionSource advance_to(SolutionSource src, double target, const MonitorOptions& opt,
                                 const ConstantsLedger& ledger) {
    if (target < src.t) throw ParameterError("advance_to: target precedes the current time");
    for (int seg = 0; src.t < target; ++seg) {
        if (seg > 100000) throw PreconditionError("advance_to: too many restart segments");
        const auto times = existence_times(sup_norm(src.u), sup_norm(src.b), ledger);
        double len = target - src.t;
        if (!times.unbounded) len = std::min(len, 0.5 * times.t2);
        if (!(len > 0.0)) break;
        const auto r = picard_solve(src.u, src.b, opt.solver, len, opt.n_max, opt.tol, ledger);
        if (!r.solution.converged())
            throw PreconditionError("advance_to: Picard diverged at t = " + std::to_string(src.t) + ": " +
                                    r.solution.diagnostic);
        src.u = r.solution.u.back();
        src.b = r.solution.b.back();
        src.t = len == target - src.t ? target : src.t + len;
    }
    return src;
}

namespace detail {

/// Unoccupied cells of a witness segment as closed intervals of [-r, r].
inline SlitSet complement_slits(const std::vector<char>& cells, double r) {
    const int n = static_cast<int>(cells.size());
    const double w = 2.0 * r / n;
    std::vector<Interval> out;
    for (int i = 0; i < n;) {
        if (cells[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && !cells[j]) ++j;
        out.push_back({-r + i * w, j == n ? r : -r + j * w});
        i = j;
    }
    return SlitSet(r, std::move(out));
}

template <SampledSet S>
void verify_witnesses(const S& set, const ScanSummary& scan, const std::string& label, double h,
                      const MonitorOptions& opt, std::uint64_t seed_base, std::vector<HarmonicWitness>& out) {
    int done = 0;
    for (const auto& rep : scan.reports) {
        if (done >= opt.mc_points) break;
        if (!rep.sparse) continue;
        if (!set.contains(rep.x0)) continue; // |F(x0)| <= M already
        const auto cells = segment_cells(set, rep.x0, rep.direction, rep.scale, rep.samples);
        const SlitSet k = complement_slits(cells, rep.scale);
        if (k.empty() || k.contains(0.0)) continue;
        HarmonicWitness w;
        w.set = label;
        w.x0 = rep.x0;
        w.direction = rep.direction;
        w.scale = rep.scale;
        w.k_measure = k.measure() / (2.0 * rep.scale);
        w.seed = splitmix64(seed_base + static_cast<std::uint64_t>(out.size()));
        const auto est = mc_harmonic_measure(k, {.walks = opt.walks, .step = opt.mc_step, .seed = w.seed});
        w.omega_hat = est.mean;
        w.standard_error = est.standard_error;
        w.pass = est.mean >= h - 3.0 * est.standard_error;
        out.push_back(w);
        ++done;
    }
}

} // namespace detail

/// One link of the chain starting from data `src` at time src.t.
/// On a sparse-certified result, `next` receives the fields at the chosen time.
inline StepVerdict monitor_step(const SolutionSource& src, double horizon, const CriterionParams& cp,
                                const MonitorOptions& opt, SolutionSource* next = nullptr, int index = 0) {
    cp.validate();
    StepVerdict v;
    v.index = index;
    v.t0 = src.t;
    v.t = src.t;
    v.u_norm_t0 = sup_norm(src.u);
    v.b_norm_t0 = sup_norm(src.b);
    v.a = v.u_norm_t0 + v.b_norm_t0;
    const auto& ledger = cp.ledger;
    const auto times = existence_times(v.u_norm_t0, v.b_norm_t0, ledger);
    const bool thm13 = cp.criterion == Criterion::Thm13;
    v.tau = thm13 ? times.t_beta(cp.beta) : times.t4;
    if (thm13) v.magnetic_condition = condition_thm13(v.u_norm_t0, v.b_norm_t0, cp);
    if (times.unbounded || v.t0 + v.tau > horizon) {
        v.result = StepCase::HorizonReached;
        return v;
    }

    const double h = cp.h();
    const double big = 2.0 * (thm13 ? cp.beta : 1.0) * ledger.c4() * v.a;
    v.r_cap = rho_lower_bound(v.tau / 4.0, ledger.c4());
    if (v.r_cap > 0.5 * opt.solver.grid.length()) {
        v.result = StepCase::Failed;
        v.diagnostic = "scale cap " + std::to_string(v.r_cap) + " exceeds half the box period";
        return v;
    }

    // Nodes at tau/4 + j (3 tau / 4) / (candidates - 1) are part of the output grid.
    const int c = std::max(2, opt.candidates);
    const int seg = 4 * (c - 1);
    SolverParams sp = opt.solver;
    sp.substeps = std::max(sp.substeps / seg, 1) * seg;
    const int unit = sp.substeps / seg;
    const auto r = picard_solve(src.u, src.b, sp, v.tau, opt.n_max, opt.tol, ledger);
    if (!r.solution.converged()) {
        v.result = StepCase::Failed;
        v.diagnostic = "Picard diverged on [t0, t0 + tau]: " + r.solution.diagnostic;
        return v;
    }
    const auto& sol = r.solution;
    // Every later bound leans on the analytic extension estimate; check it on
    // this step's solution rather than trusting the ledger.
    const auto strip = strip_bound_check(sol, thm13 ? cp.beta : 1.0, ledger, opt.shift_samples);
    v.strip_measured = strip.measured;
    v.strip_bound = strip.bound;
    if (!strip.pass) {
        v.result = StepCase::Failed;
        v.diagnostic = "complex strip bound violated (measured " + std::to_string(strip.measured) + " > " +
                       std::to_string(strip.bound) + "); C4 does not hold for this data";
        return v;
    }
    if (thm13) {
        v.corollary6_ok = corollary6_check(sol, v.b_norm_t0, ledger).pass;
        if (!v.corollary6_ok) {
            v.result = StepCase::Failed;
            v.diagnostic = "magnetic bound 2 C3 ||B(t0)|| violated on the step";
            return v;
        }
    }

    std::vector<double> thresholds;
    if (cp.criterion == Criterion::Thm11) thresholds = {threshold_thm11(v.a, cp)};
    else if (cp.criterion == Criterion::Thm12) {
        const auto t12 = thresholds_thm12(v.a, cp);
        thresholds = {t12.m_u, t12.m_b};
    } else thresholds = {threshold_thm13(v.a, cp)};
    v.thresholds = thresholds;
    const double m_max = *std::max_element(thresholds.begin(), thresholds.end());
    if (m_max > big) {
        v.result = StepCase::Failed;
        v.diagnostic = "threshold exceeds the analytic bound 2 C4 A";
        return v;
    }
    v.interpolation_bound = m_max > 0.0 ? max_principle_bound(m_max, big, h) : 0.0;

    double best_worst = INFINITY;
    for (int j = 0; j < c; ++j) {
        const int node = unit * (c - 1) + unit * 3 * j;
        const double t = sol.times[node];
        ++v.candidates_tried;
        const auto& u = sol.u[node];
        const auto& b = sol.b[node];
        std::vector<HarmonicWitness> wit;
        bool all = true;
        double worst = 0.0;
        std::size_t points = 0;
        const std::uint64_t seed_base = opt.seed ^ (static_cast<std::uint64_t>(index) << 32) ^
                                        static_cast<std::uint64_t>(j) << 20;
        const auto scan_one = [&](const auto& set, double m, const std::string& label) {
            const auto s = global_sparseness_scan(set, cp.delta, v.r_cap, opt.stride, opt.scan);
            points += s.points;
            worst = std::max(worst, s.worst_ratio);
            if (!s.all_sparse()) {
                all = false;
                return;
            }
            if (m > 0.0) detail::verify_witnesses(set, s, label, h, opt, seed_base, wit);
        };
        if (cp.criterion == Criterion::Thm11) {
            const LevelSetIntersection s({super_level_set(u, thresholds[0], t), super_level_set(b, thresholds[0], t)});
            scan_one(s, thresholds[0], "S");
        } else if (cp.criterion == Criterion::Thm12) {
            scan_one(super_level_set(u, thresholds[0], t), thresholds[0], "U");
            if (all) scan_one(super_level_set(b, thresholds[1], t), thresholds[1], "B");
        } else {
            scan_one(super_level_set(u, thresholds[0], t), thresholds[0], "U");
        }
        best_worst = std::min(best_worst, worst);
        v.scanned_points = points;
        if (!all) continue;

        v.t = src.t + t;
        v.worst_ratio = worst;
        v.witnesses = std::move(wit);
        v.u_norm = sup_norm(u);
        v.b_norm = sup_norm(b);
        v.measured = v.u_norm + v.b_norm;
        // Contraction of the budget, checked on measured norms.
        bool budget = v.measured <= v.a;
        if (cp.criterion == Criterion::Thm12) {
            const auto t12 = thresholds_thm12(v.a, cp);
            budget = budget && v.u_norm <= t12.share_u * v.a && v.b_norm <= t12.share_b * v.a;
        } else if (thm13) {
            budget = budget && v.u_norm <= std::pow(cp.beta, 1.0 - h) * v.a;
        }
        if (!budget) {
            v.result = StepCase::Failed;
            v.diagnostic = "budget violated at a sparse time: measured " + std::to_string(v.measured) +
                           " against A = " + std::to_string(v.a);
            return v;
        }
        if (cp.criterion == Criterion::Thm11 && v.interpolation_bound > 0.5 * v.a * (1.0 + 1e-12)) {
            v.result = StepCase::Failed;
            v.diagnostic = "interpolation bound exceeds A/2";
            return v;
        }
        for (const auto& w : v.witnesses)
            if (!w.pass) {
                v.result = StepCase::Failed;
                v.diagnostic = "walk-on-spheres estimate below h - 3 SE at a witness";
                return v;
            }
        v.result = StepCase::SparseCertified;
        if (next) *next = SolutionSource{v.t, u, b};
        return v;
    }
    v.result = StepCase::Failed;
    v.worst_ratio = best_worst;
    v.diagnostic = "no candidate time is globally sparse (best worst-point ratio " + std::to_string(best_worst) + ")";
    return v;
}

/// Runs the chain from t0 = T - eps, with the data at t0 obtained by
/// advancing (U0, B0) from time 0.
inline MonitorVerdict certify_interval(const VectorField& u0, const VectorField& b0, double horizon, double eps,
                                       const CriterionParams& cp, const MonitorOptions& opt) {
    cp.validate();
    if (!(horizon > 0.0)) throw ParameterError("certify_interval: horizon must be positive");
    if (!(eps > 0.0 && eps < horizon)) throw ParameterError("certify_interval: eps must lie in (0, T)");
    MonitorVerdict out;
    out.horizon = horizon;
    out.epsilon = eps;
    if (cp.criterion == Criterion::Thm13)
        out.note = "thm13 budget uses beta^(1-h); an earlier bound in the derivation states beta^h";

    SolutionSource src{0.0, u0, b0};
    try {
        src = advance_to(src, horizon - eps, opt, cp.ledger);
    } catch (const PreconditionError& e) {
        out.diagnostic = e.what();
        return out;
    }
    if (cp.criterion == Criterion::Thm13 && !condition_thm13(sup_norm(src.u), sup_norm(src.b), cp)) {
        out.diagnostic = "magnetic precondition 2 C3 ||B(t0)|| <= (1 - beta^(1-h)) A fails at the chain start";
        return out;
    }
    for (int i = 0; i < opt.max_steps; ++i) {
        SolutionSource next = src;
        auto v = monitor_step(src, horizon, cp, opt, &next, i);
        const auto kind = v.result;
        out.steps.push_back(std::move(v));
        if (kind == StepCase::HorizonReached) {
            out.status = MonitorStatus::CertifiedNonsingular;
            return out;
        }
        if (kind == StepCase::Failed) {
            out.diagnostic = "step " + std::to_string(i) + " failed: " + out.steps.back().diagnostic;
            return out;
        }
        src = std::move(next);
    }
    out.diagnostic = "step budget of " + std::to_string(opt.max_steps) + " exhausted";
    return out;
}

} // namespace mhdlab
