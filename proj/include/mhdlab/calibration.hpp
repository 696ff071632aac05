// calibration.hpp: empirical values for the bound constants C1..C4.
//
// Each constant is the smallest value >= 1 on a 0.1 grid for which its bound
// check passes on every sample pair.
#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "mhdlab/analyticity.hpp"
#include "mhdlab/mild_solver.hpp"

namespace mhdlab {

struct CalibrationOptions {
    double cap = 50.0; ///< largest constant tried before giving up
    int n_max = 40;
    double tol = 1e-10;
    int shift_samples = 16;
};

namespace detail {

inline double round_up_tenth(double x) { return std::max(1.0, std::ceil(x * 10.0 - 1e-9) / 10.0); }

/// Smallest c on the 0.1 grid in [1, cap] with passes(c), assuming the
/// predicate is monotone in c. Returns a negative value when even `cap` fails.
inline double smallest_passing(const std::function<bool(double)>& passes, double cap) {
    if (passes(1.0)) return 1.0;
    int lo = 10; // tenths known to fail
    int hi = 20;
    while (!passes(hi / 10.0)) {
        lo = hi;
        if (hi >= static_cast<int>(std::lround(cap * 10))) return -1.0;
        hi = std::min(2 * hi, static_cast<int>(std::lround(cap * 10)));
    }
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (passes(mid / 10.0))
            hi = mid;
        else
            lo = mid;
    }
    return hi / 10.0;
}

} // namespace detail

/// Contraction check used by calibration: converged, and the measured factor
/// does not exceed T/T2.
inline bool contraction_check(const PicardResult& r, double horizon, double t2) {
    return r.solution.converged() && r.contraction.alpha_hat <= horizon / t2;
}

inline ConstantsLedger calibrate_constants(const std::vector<std::pair<VectorField, VectorField>>& sample,
                                           const SolverParams& params, const CalibrationOptions& opt = {}) {
    if (sample.empty()) throw PreconditionError("calibrate_constants: empty sample");
    params.validate();
    ConstantsLedger ledger(1.0, 1.0, 1.0, 1.0, Provenance::Calibrated);

    struct Norms {
        double u, b;
    };
    std::vector<Norms> norms;
    for (const auto& [u0, b0] : sample) norms.push_back({sup_norm(u0), sup_norm(b0)});

    // C1: uniform bound of every Picard level on [0, T1].
    double c1 = 1.0;
    for (std::size_t s = 0; s < sample.size(); ++s) {
        const double a = norms[s].u + norms[s].b;
        if (a == 0.0) continue;
        const auto t = existence_times(norms[s].u, norms[s].b, ledger);
        const auto r = picard_solve(sample[s].first, sample[s].second, params, t.t1, opt.n_max, opt.tol, ledger);
        double worst = 0.0;
        for (const auto& rec : r.solution.history) worst = std::max(worst, rec.sup_sum);
        if (!std::isfinite(worst) || worst / (2.0 * a) > opt.cap)
            throw CalibrationError("C1: Picard levels unbounded on [0, T1]", s);
        c1 = std::max(c1, detail::round_up_tenth(worst / (2.0 * a)));
    }
    ledger = ledger.with(1, c1, Provenance::Calibrated);

    // C2: contraction at T = T2/2.
    double c2 = 1.0;
    for (std::size_t s = 0; s < sample.size(); ++s) {
        if (norms[s].u + norms[s].b == 0.0) continue;
        const auto passes = [&](double c) {
            const auto l = ledger.with(2, c, Provenance::Calibrated);
            const auto t = existence_times(norms[s].u, norms[s].b, l);
            const double horizon = 0.5 * t.t2;
            auto r = picard_solve(sample[s].first, sample[s].second, params, horizon, opt.n_max, opt.tol, l);
            return contraction_check(r, horizon, t.t2);
        };
        const double c = detail::smallest_passing(passes, opt.cap);
        if (c < 0.0) throw CalibrationError("C2: no contraction at T2/2 below the cap", s);
        c2 = std::max(c2, c);
    }
    ledger = ledger.with(2, c2, Provenance::Calibrated);

    // C3: magnetic bound on [0, T3] of the solution at T2/2.
    double c3 = 1.0;
    for (std::size_t s = 0; s < sample.size(); ++s) {
        if (norms[s].u + norms[s].b == 0.0) continue;
        const auto t = existence_times(norms[s].u, norms[s].b, ledger);
        const auto r = picard_solve(sample[s].first, sample[s].second, params, 0.5 * t.t2, opt.n_max, opt.tol, ledger);
        const auto passes = [&](double c) { return corollary6_check(r.solution, norms[s].b, c).pass; };
        const double c = detail::smallest_passing(passes, opt.cap);
        if (c < 0.0) throw CalibrationError("C3: magnetic bound violated below the cap", s);
        c3 = std::max(c3, c);
    }
    ledger = ledger.with(3, c3, Provenance::Calibrated);

    // C4: complex strip bound at beta = 1 on (0, T4].
    double c4 = 1.0;
    for (std::size_t s = 0; s < sample.size(); ++s) {
        if (norms[s].u + norms[s].b == 0.0) continue;
        const auto passes = [&](double c) {
            const auto l = ledger.with(4, c, Provenance::Calibrated);
            const auto t = existence_times(norms[s].u, norms[s].b, l);
            const auto r = picard_solve(sample[s].first, sample[s].second, params, t.t4, opt.n_max, opt.tol, l);
            if (!r.solution.converged()) return false;
            return strip_bound_check(r.solution, 1.0, l, opt.shift_samples).pass;
        };
        const double c = detail::smallest_passing(passes, opt.cap);
        if (c < 0.0) throw CalibrationError("C4: strip bound violated below the cap", s);
        c4 = std::max(c4, c);
    }
    ledger = ledger.with(4, c4, Provenance::Calibrated);
    return ledger;
}

} // namespace mhdlab
