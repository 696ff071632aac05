// harmonic_measure.hpp: harmonic measure of slits on a diameter of a disk.
//
// Closed forms for the symmetric edge configuration and a walk-on-spheres
// estimator for arbitrary closed subsets of [-r, r].
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <utility>
#include <vector>

#include "mhdlab/error.hpp"
#include "mhdlab/rng.hpp"

namespace mhdlab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const noexcept { return hi - lo; }
};

/// Disjoint closed subintervals of [-r, r], sorted.
class SlitSet {
public:
    SlitSet(double radius, std::vector<Interval> intervals) : radius_(radius), intervals_(std::move(intervals)) {
        if (!(radius > 0.0)) throw ParameterError("SlitSet: radius must be positive");
        const double slack = 1e-12 * radius;
        for (std::size_t i = 0; i < intervals_.size(); ++i) {
            const auto& iv = intervals_[i];
            if (!(iv.lo <= iv.hi)) throw ParameterError("SlitSet: interval with lo > hi");
            if (iv.lo < -radius - slack || iv.hi > radius + slack)
                throw ParameterError("SlitSet: interval outside [-r, r]");
            if (i > 0 && !(intervals_[i - 1].hi < iv.lo))
                throw ParameterError("SlitSet: intervals must be sorted and disjoint");
        }
    }

    double radius() const noexcept { return radius_; }
    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    bool empty() const noexcept { return intervals_.empty(); }

    double measure() const noexcept {
        double m = 0.0;
        for (const auto& iv : intervals_) m += iv.length();
        return m;
    }

    bool contains(double x) const noexcept {
        return std::any_of(intervals_.begin(), intervals_.end(),
                           [x](const Interval& iv) { return iv.lo <= x && x <= iv.hi; });
    }

    /// Euclidean distance from (x, y) to the union of the slits.
    double distance(double x, double y) const noexcept {
        double best = INFINITY;
        for (const auto& iv : intervals_) {
            const double dx = x < iv.lo ? iv.lo - x : (x > iv.hi ? x - iv.hi : 0.0);
            best = std::min(best, std::hypot(dx, y));
        }
        return best;
    }

    SlitSet scaled(double factor) const {
        std::vector<Interval> out;
        for (const auto& iv : intervals_) out.push_back({iv.lo * factor, iv.hi * factor});
        return SlitSet(radius_ * factor, std::move(out));
    }

private:
    double radius_;
    std::vector<Interval> intervals_;
};

/// (2/pi) arcsin((1 - d^2) / (1 + d^2)) for d in (0, 1).
inline double solynin_h(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("solynin_h: delta must lie in (0, 1)");
    const double d2 = delta * delta;
    return 2.0 / std::numbers::pi * std::asin((1.0 - d2) / (1.0 + d2));
}

/// Harmonic measure at 0 of K_gamma = [-1, -1+g] u [1-g, 1] in the unit disk,
/// the minimum over closed K in [-1, 1] with |K| = 2g.
inline double solynin_lower_bound(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("solynin_lower_bound: gamma must lie in (0, 1)");
    const double q = (1.0 - gamma) * (1.0 - gamma);
    return 2.0 / std::numbers::pi * std::asin((1.0 - q) / (1.0 + q));
}

inline SlitSet extremal_slits(double gamma, double r) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("extremal_slits: gamma must lie in (0, 1)");
    return SlitSet(r, {{-r, (-1.0 + gamma) * r}, {(1.0 - gamma) * r, r}});
}

struct HarmonicMeasureEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t walks = 0;
    std::uint64_t hits_slits = 0;
    std::uint64_t hits_circle = 0;
    double step = 0.0;
    std::uint64_t seed = 0;

    double circle_fraction() const noexcept {
        return walks == 0 ? 0.0 : static_cast<double>(hits_circle) / static_cast<double>(walks);
    }
};

struct WalkOptions {
    std::uint64_t walks = 100000;
    double step = 0.0; ///< absorption tolerance; 0 selects r * 1e-4
    std::uint64_t seed = 1;
    unsigned workers = 0; ///< 0 selects hardware concurrency
};

namespace detail {

/// One walk-on-spheres path from the origin. True when it is absorbed on K.
inline bool walk_hits_slits(const SlitSet& k, double step, CounterRng& rng) {
    const double r = k.radius();
    const double tie = 1e-12 * r;
    double x = 0.0, y = 0.0;
    for (int iter = 0; iter < 1000000; ++iter) {
        const double d_circle = r - std::hypot(x, y);
        const double d_slits = k.distance(x, y);
        const double rad = std::min(d_circle, d_slits);
        if (rad < step) return d_slits <= d_circle + tie;
        const double th = 2.0 * std::numbers::pi * rng.uniform();
        x += rad * std::cos(th);
        y += rad * std::sin(th);
    }
    return false;
}

} // namespace detail

/// Fraction of planar Brownian paths from 0 that reach K before the circle
/// |z| = r, by walk-on-spheres. Walk i draws from stream i of `seed`.
inline HarmonicMeasureEstimate mc_harmonic_measure(const SlitSet& k, const WalkOptions& opt = {}) {
    HarmonicMeasureEstimate est;
    est.seed = opt.seed;
    est.step = opt.step > 0.0 ? opt.step : k.radius() * 1e-4;
    if (k.empty()) {
        est.walks = opt.walks;
        est.hits_circle = opt.walks;
        return est;
    }
    if (k.contains(0.0)) throw PreconditionError("mc_harmonic_measure: the origin lies in K");
    if (opt.walks < 10000) throw PreconditionError("mc_harmonic_measure: at least 1e4 walks required");

    unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, opt.walks));
    std::vector<std::uint64_t> hits(workers, 0);
    const auto run = [&](unsigned w) {
        const std::uint64_t begin = opt.walks * w / workers;
        const std::uint64_t end = opt.walks * (w + 1) / workers;
        std::uint64_t h = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            CounterRng rng(opt.seed, i);
            if (detail::walk_hits_slits(k, est.step, rng)) ++h;
        }
        hits[w] = h;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    est.walks = opt.walks;
    for (auto h : hits) est.hits_slits += h;
    est.hits_circle = est.walks - est.hits_slits;
    est.mean = static_cast<double>(est.hits_slits) / static_cast<double>(est.walks);
    est.standard_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(est.walks));
    return est;
}

/// Two-constant bound M^w * big^(1-w) from the harmonic-measure maximum principle.
inline double max_principle_bound(double m, double big, double omega) {
    if (!(m > 0.0) || !(big > 0.0)) throw ParameterError("max_principle_bound: bounds must be positive");
    if (m > big) throw ParameterError("max_principle_bound: M exceeds the outer bound (interpolation direction violated)");
    if (!(omega >= 0.0 && omega <= 1.0)) throw ParameterError("max_principle_bound: omega must lie in [0, 1]");
    return std::pow(m, omega) * std::pow(big, 1.0 - omega);
}

} // namespace mhdlab
