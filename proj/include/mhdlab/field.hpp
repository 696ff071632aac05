// field.hpp: immutable scalar and vector fields on a periodic grid.
//
// Both representations (physical samples and Fourier coefficients) are kept
// current at all times; every constructor computes the missing one. Fields are
// never mutated after construction, so sharing them across threads is safe.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mhdlab/fft.hpp"
#include "mhdlab/grid.hpp"

namespace mhdlab {

class ScalarField {
public:
    static ScalarField from_values(const Grid& g, std::vector<double> values) {
        if (values.size() != g.size()) throw GridMismatchError("sample count does not match grid");
        auto modes = forward_transform(g, std::span<const double>(values));
        return ScalarField(g, std::move(values), std::move(modes));
    }

    /// Coefficients are stored verbatim; the physical samples are the real part
    /// of the inverse transform.
    static ScalarField from_modes(const Grid& g, std::vector<cplx> modes) {
        if (modes.size() != g.size()) throw GridMismatchError("mode count does not match grid");
        auto values = inverse_transform_real(g, modes);
        return ScalarField(g, std::move(values), std::move(modes));
    }

    static ScalarField zero(const Grid& g) {
        return ScalarField(g, std::vector<double>(g.size(), 0.0), std::vector<cplx>(g.size()));
    }

    static ScalarField sample(const Grid& g, const std::function<double(const Point&)>& f) {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.coordinate(i));
        return from_values(g, std::move(v));
    }

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const cplx> modes() const noexcept { return modes_; }
    double value(std::size_t i) const noexcept { return values_[i]; }
    cplx mode(std::size_t i) const noexcept { return modes_[i]; }

private:
    ScalarField(const Grid& g, std::vector<double> values, std::vector<cplx> modes)
        : grid_(g), values_(std::move(values)), modes_(std::move(modes)) {}

    Grid grid_;
    std::vector<double> values_;
    std::vector<cplx> modes_;
};

/// D-component field. `divergence_free()` records that the field was produced
/// by an operation guaranteeing a solenoidal result.
class VectorField {
public:
    VectorField(std::vector<ScalarField> components, bool divergence_free = false)
        : components_(std::move(components)), divergence_free_(divergence_free) {
        if (components_.empty()) throw ParameterError("vector field needs components");
        const Grid& g = components_.front().grid();
        if (static_cast<int>(components_.size()) != g.dim())
            throw ParameterError("vector field component count must equal grid dimension");
        for (const auto& c : components_) require_same_grid(g, c.grid(), "VectorField");
    }

    static VectorField zero(const Grid& g) {
        return VectorField(std::vector<ScalarField>(g.dim(), ScalarField::zero(g)), true);
    }

    static VectorField constant(const Grid& g, const Point& c) {
        std::vector<ScalarField> comps;
        for (int a = 0; a < g.dim(); ++a)
            comps.push_back(ScalarField::from_values(g, std::vector<double>(g.size(), c[a])));
        return VectorField(std::move(comps), true);
    }

    static VectorField sample(const Grid& g, const std::function<Point(const Point&)>& f,
                              bool divergence_free = false) {
        std::vector<std::vector<double>> v(g.dim(), std::vector<double>(g.size()));
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Point p = f(g.coordinate(i));
            for (int a = 0; a < g.dim(); ++a) v[a][i] = p[a];
        }
        std::vector<ScalarField> comps;
        for (auto& c : v) comps.push_back(ScalarField::from_values(g, std::move(c)));
        return VectorField(std::move(comps), divergence_free);
    }

    static VectorField from_modes(const Grid& g, std::vector<std::vector<cplx>> modes,
                                  bool divergence_free = false) {
        std::vector<ScalarField> comps;
        for (auto& m : modes) comps.push_back(ScalarField::from_modes(g, std::move(m)));
        return VectorField(std::move(comps), divergence_free);
    }

    const Grid& grid() const noexcept { return components_.front().grid(); }
    int dim() const noexcept { return grid().dim(); }
    const ScalarField& operator[](int a) const noexcept { return components_[a]; }
    const std::vector<ScalarField>& components() const noexcept { return components_; }
    bool divergence_free() const noexcept { return divergence_free_; }

    /// Euclidean magnitude at every grid point.
    std::vector<double> magnitude() const {
        std::vector<double> m(grid().size(), 0.0);
        for (const auto& c : components_)
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += c.value(i) * c.value(i);
        for (auto& x : m) x = std::sqrt(x);
        return m;
    }

    VectorField with_divergence_free(bool flag) const { return VectorField(components_, flag); }

private:
    std::vector<ScalarField> components_;
    bool divergence_free_;
};

} // namespace mhdlab
