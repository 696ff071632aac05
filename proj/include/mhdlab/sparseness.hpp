// sparseness.hpp: super-level sets and linear delta-sparseness scans.
//
// Membership along a segment is decided on the multilinearly interpolated
// field magnitude, so the occupancy ratio approximates the 1D Lebesgue measure
// of the set on the segment rather than a voxel count.
#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <vector>

#include "mhdlab/analyticity.hpp"
#include "mhdlab/field.hpp"

namespace mhdlab {

/// Periodic multilinear interpolation of grid samples.
inline double interpolate(const Grid& g, std::span<const double> v, const Point& p) {
    const int d = g.dim();
    const int n = g.n();
    int base[3] = {0, 0, 0};
    double frac[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) {
        const double s = p[a] / g.spacing();
        const double fl = std::floor(s);
        frac[a] = s - fl;
        long long i = static_cast<long long>(fl) % n;
        if (i < 0) i += n;
        base[a] = static_cast<int>(i);
    }
    double out = 0.0;
    const int corners = 1 << d;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        Multi idx{0, 0, 0};
        for (int a = 0; a < d; ++a) {
            const int bit = (c >> a) & 1;
            w *= bit ? frac[a] : 1.0 - frac[a];
            idx[a] = (base[a] + bit) % n;
        }
        if (w != 0.0) out += w * v[g.flat(idx)];
    }
    return out;
}

/// {x : |F(x, t)| > M}, sampled on the grid.
class SuperLevelSet {
public:
    SuperLevelSet(const Grid& g, std::vector<double> magnitude, double threshold, double time)
        : grid_(g), magnitude_(std::move(magnitude)), threshold_(threshold), time_(time) {
        if (!(threshold >= 0.0)) throw ParameterError("super_level_set: threshold must be nonnegative");
        if (magnitude_.size() != g.size()) throw GridMismatchError("super_level_set: sample count mismatch");
        indicator_.resize(magnitude_.size());
        for (std::size_t i = 0; i < magnitude_.size(); ++i) indicator_[i] = magnitude_[i] > threshold_;
    }

    const Grid& grid() const noexcept { return grid_; }
    double threshold() const noexcept { return threshold_; }
    double time() const noexcept { return time_; }
    std::span<const double> magnitude() const noexcept { return magnitude_; }

    bool contains_node(std::size_t i) const noexcept { return indicator_[i] != 0; }
    bool contains(const Point& p) const noexcept { return interpolate(grid_, magnitude_, p) > threshold_; }

    double occupied_fraction() const noexcept {
        std::size_t c = 0;
        for (auto b : indicator_) c += b;
        return static_cast<double>(c) / static_cast<double>(indicator_.size());
    }

private:
    Grid grid_;
    std::vector<double> magnitude_;
    double threshold_;
    double time_;
    std::vector<char> indicator_;
};

inline SuperLevelSet super_level_set(const VectorField& f, double threshold, double time) {
    return SuperLevelSet(f.grid(), f.magnitude(), threshold, time);
}

/// Pointwise intersection of super-level sets sharing a grid.
class LevelSetIntersection {
public:
    explicit LevelSetIntersection(std::vector<SuperLevelSet> sets) : sets_(std::move(sets)) {
        if (sets_.empty()) throw ParameterError("LevelSetIntersection: no sets");
        for (const auto& s : sets_) require_same_grid(sets_.front().grid(), s.grid(), "LevelSetIntersection");
    }

    const Grid& grid() const noexcept { return sets_.front().grid(); }
    bool contains_node(std::size_t i) const noexcept {
        return std::all_of(sets_.begin(), sets_.end(), [i](const auto& s) { return s.contains_node(i); });
    }
    bool contains(const Point& p) const noexcept {
        return std::all_of(sets_.begin(), sets_.end(), [&p](const auto& s) { return s.contains(p); });
    }

private:
    std::vector<SuperLevelSet> sets_;
};

template <class S>
concept SampledSet = requires(const S& s, const Point& p, std::size_t i) {
    { s.grid() } -> std::convertible_to<const Grid&>;
    { s.contains(p) } -> std::convertible_to<bool>;
    { s.contains_node(i) } -> std::convertible_to<bool>;
};

/// Midpoint sample positions x0 + s d, s in (-r, r), on `samples` equal cells.
inline Point segment_point(const Point& x0, const Point& d, double r, int samples, int i) {
    const double s = -r + (i + 0.5) * (2.0 * r / samples);
    return {x0[0] + s * d[0], x0[1] + s * d[1], x0[2] + s * d[2]};
}

inline void check_segment(const Grid& g, const Point& d, double r, int samples) {
    if (!(r > 0.0)) throw ParameterError("segment scale must be positive");
    if (r > 0.5 * g.length())
        throw ScaleError("segment half-length " + std::to_string(r) + " exceeds half the box period");
    double n2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) n2 += d[a] * d[a];
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw ParameterError("segment direction must be a unit vector");
    if (samples < 64) throw ParameterError("segment occupancy needs at least 64 samples");
}

/// Fraction of segment cells whose midpoint lies in S.
template <SampledSet S>
double segment_occupancy(const S& set, const Point& x0, const Point& d, double r, int samples) {
    check_segment(set.grid(), d, r, samples);
    int hits = 0;
    for (int i = 0; i < samples; ++i)
        if (set.contains(segment_point(x0, d, r, samples, i))) ++hits;
    return static_cast<double>(hits) / samples;
}

/// Per-cell occupancy along a segment, for reconstructing the slit geometry.
template <SampledSet S>
std::vector<char> segment_cells(const S& set, const Point& x0, const Point& d, double r, int samples) {
    check_segment(set.grid(), d, r, samples);
    std::vector<char> out(samples);
    for (int i = 0; i < samples; ++i) out[i] = set.contains(segment_point(x0, d, r, samples, i)) ? 1 : 0;
    return out;
}

struct ScanResolution {
    int dir_count = 0;   ///< 0 selects 32 in 2D, 64 in 3D
    int scale_count = 8;
    int samples = 128;
};

struct SparsenessReport {
    Multi node{0, 0, 0};
    Point x0{0.0, 0.0, 0.0};
    double delta = 0.0;
    bool sparse = false;
    Point direction{0.0, 0.0, 0.0}; ///< witness when sparse, else best found
    double scale = 0.0;
    double ratio = 1.0;
    int dir_count = 0;
    int scale_count = 0;
    int samples = 0;
};

/// The scales searched below r_cap: r_cap (1 - 1e-12) 2^-j, strictly inside the cap.
inline std::vector<double> search_scales(double r_cap, int count) {
    std::vector<double> out;
    for (int j = 0; j < count; ++j) out.push_back(r_cap * (1.0 - 1e-12) * std::ldexp(1.0, -j));
    return out;
}

inline int default_dir_count(int dim) { return dim == 2 ? 32 : 64; }

/// Searches directions x geometric scales for a segment through x0 whose
/// occupancy is at most delta; reports the first hit or the smallest ratio.
template <SampledSet S>
SparsenessReport is_sparse_at(const S& set, const Point& x0, double delta, double r_cap,
                              const ScanResolution& res = {}) {
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("is_sparse_at: delta must lie in (0, 1)");
    if (!(r_cap > 0.0)) throw ParameterError("is_sparse_at: scale cap must be positive");
    const int dim = set.grid().dim();
    const int dirs_n = res.dir_count > 0 ? res.dir_count : default_dir_count(dim);
    SparsenessReport rep;
    rep.x0 = x0;
    rep.delta = delta;
    rep.dir_count = dirs_n;
    rep.scale_count = res.scale_count;
    rep.samples = res.samples;
    rep.ratio = std::numeric_limits<double>::infinity();
    const auto dirs = search_directions(dim, dirs_n);
    for (double r : search_scales(r_cap, res.scale_count)) {
        for (const auto& d : dirs) {
            const double q = segment_occupancy(set, x0, d, r, res.samples);
            if (q < rep.ratio) {
                rep.ratio = q;
                rep.direction = d;
                rep.scale = r;
            }
            if (q <= delta) {
                rep.sparse = true;
                return rep;
            }
        }
    }
    return rep;
}

struct ScanSummary {
    std::vector<SparsenessReport> reports;
    std::size_t points = 0;
    std::size_t failures = 0;
    double worst_ratio = 0.0; ///< max over points of the best ratio found
    bool all_sparse() const noexcept { return failures == 0; }
};

/// is_sparse_at on every stride-th grid point along each axis.
template <SampledSet S>
ScanSummary global_sparseness_scan(const S& set, double delta, double r_cap, int stride,
                                   const ScanResolution& res = {}) {
    const Grid& g = set.grid();
    if (stride < 1 || g.n() % stride != 0) throw ParameterError("scan stride must divide N");
    ScanSummary sum;
    for (std::size_t f = 0; f < g.size(); ++f) {
        const Multi idx = g.unflat(f);
        bool on = true;
        for (int a = 0; a < g.dim(); ++a) on = on && idx[a] % stride == 0;
        if (!on) continue;
        auto rep = is_sparse_at(set, g.coordinate(f), delta, r_cap, res);
        rep.node = idx;
        ++sum.points;
        if (!rep.sparse) ++sum.failures;
        sum.worst_ratio = std::max(sum.worst_ratio, rep.ratio);
        sum.reports.push_back(rep);
    }
    return sum;
}

} // namespace mhdlab
