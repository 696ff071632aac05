// spectral.hpp: Fourier-multiplier operators on periodic fields.
//
// Heat flow, differentiation, divergence, Leray projection, the total-pressure
// Poisson solve, and the sup / dyadic-BMO norms used by the bound checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mhdlab/field.hpp"

namespace mhdlab {

// ---------------------------------------------------------------------------
// Elementwise helpers
// ---------------------------------------------------------------------------

inline ScalarField scale(const ScalarField& f, double a) {
    std::vector<cplx> m(f.modes().begin(), f.modes().end());
    for (auto& c : m) c *= a;
    return ScalarField::from_modes(f.grid(), std::move(m));
}

inline VectorField scale(const VectorField& f, double a) {
    std::vector<ScalarField> comps;
    for (const auto& c : f.components()) comps.push_back(scale(c, a));
    return VectorField(std::move(comps), f.divergence_free());
}

inline ScalarField add(const ScalarField& a, const ScalarField& b, double wb = 1.0) {
    require_same_grid(a.grid(), b.grid(), "add");
    std::vector<cplx> m(a.modes().begin(), a.modes().end());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += wb * b.mode(i);
    return ScalarField::from_modes(a.grid(), std::move(m));
}

/// a + wb * b, componentwise.
inline VectorField add(const VectorField& a, const VectorField& b, double wb = 1.0) {
    require_same_grid(a.grid(), b.grid(), "add");
    std::vector<ScalarField> comps;
    for (int c = 0; c < a.dim(); ++c) comps.push_back(add(a[c], b[c], wb));
    return VectorField(std::move(comps), a.divergence_free() && b.divergence_free());
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

inline double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

/// Grid maximum of the Euclidean magnitude.
inline double sup_norm(const VectorField& f) {
    const auto mag = f.magnitude();
    return mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
}

/// Supremum over axis-aligned dyadic cubes of side L/2, L/4, ..., L/N of the
/// mean oscillation (1/|Q|) sum_Q |f - f_Q|. A lower bound on the BMO norm.
inline double bmo_norm_estimate(const ScalarField& f) {
    const Grid& g = f.grid();
    const int n = g.n();
    const int d = g.dim();
    double best = 0.0;
    std::vector<double> cube;
    for (int side = n / 2; side >= 1; side /= 2) {
        const int per_axis = n / side;
        const int cubes = d == 2 ? per_axis * per_axis : per_axis * per_axis * per_axis;
        for (int q = 0; q < cubes; ++q) {
            Multi origin{0, 0, 0};
            int rem = q;
            for (int a = d - 1; a >= 0; --a) {
                origin[a] = (rem % per_axis) * side;
                rem /= per_axis;
            }
            cube.clear();
            const int inner = side;
            const int count = d == 2 ? inner * inner : inner * inner * inner;
            for (int p = 0; p < count; ++p) {
                Multi idx = origin;
                int r = p;
                for (int a = d - 1; a >= 0; --a) {
                    idx[a] += r % inner;
                    r /= inner;
                }
                cube.push_back(f.value(g.flat(idx)));
            }
            double mean = 0.0;
            for (double v : cube) mean += v;
            mean /= static_cast<double>(cube.size());
            double osc = 0.0;
            for (double v : cube) osc += std::abs(v - mean);
            best = std::max(best, osc / static_cast<double>(cube.size()));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Multipliers
// ---------------------------------------------------------------------------

inline void check_heat_args(double lambda, double t) {
    if (!(lambda > 0.0)) throw ParameterError("heat_propagate: diffusivity must be positive");
    if (!(t >= 0.0)) throw ParameterError("heat_propagate: time must be nonnegative");
}

/// Multiplies mode k by exp(-lambda |k|^2 t).
inline ScalarField heat_propagate(const ScalarField& f, double lambda, double t) {
    check_heat_args(lambda, t);
    if (t == 0.0) return f;
    const Grid& g = f.grid();
    std::vector<cplx> m(f.modes().begin(), f.modes().end());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] *= std::exp(-lambda * g.k_squared(i) * t);
    return ScalarField::from_modes(g, std::move(m));
}

inline VectorField heat_propagate(const VectorField& f, double lambda, double t) {
    check_heat_args(lambda, t);
    std::vector<ScalarField> comps;
    for (const auto& c : f.components()) comps.push_back(heat_propagate(c, lambda, t));
    return VectorField(std::move(comps), f.divergence_free());
}

inline ScalarField partial_derivative(const ScalarField& f, int axis) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dim())
        throw ParameterError("partial_derivative: axis " + std::to_string(axis) + " out of range");
    std::vector<cplx> m(f.modes().begin(), f.modes().end());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double k = g.derivative_wavenumber(g.unflat(i)[axis]);
        m[i] *= cplx(0.0, k);
    }
    return ScalarField::from_modes(g, std::move(m));
}

inline VectorField partial_derivative(const VectorField& f, int axis) {
    std::vector<ScalarField> comps;
    for (const auto& c : f.components()) comps.push_back(partial_derivative(c, axis));
    return VectorField(std::move(comps), f.divergence_free());
}

inline VectorField gradient(const ScalarField& f) {
    std::vector<ScalarField> comps;
    for (int a = 0; a < f.grid().dim(); ++a) comps.push_back(partial_derivative(f, a));
    return VectorField(std::move(comps), false);
}

inline ScalarField divergence(const VectorField& f) {
    const Grid& g = f.grid();
    std::vector<cplx> m(g.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Multi idx = g.unflat(i);
        cplx s = 0.0;
        for (int a = 0; a < g.dim(); ++a) s += cplx(0.0, g.derivative_wavenumber(idx[a])) * f[a].mode(i);
        m[i] = s;
    }
    return ScalarField::from_modes(g, std::move(m));
}

/// ||div F||_inf / ||F||_inf, or 0 for the zero field.
inline double relative_divergence(const VectorField& f) {
    const double s = sup_norm(f);
    return s == 0.0 ? 0.0 : sup_norm(divergence(f)) / s;
}

namespace detail {

/// Projects the coefficient vector `v` at flat index i onto the plane normal to k.
inline void project_mode(const Grid& g, std::size_t i, std::span<cplx> v) {
    const Multi idx = g.unflat(i);
    double k[3] = {0.0, 0.0, 0.0};
    double k2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        k[a] = g.derivative_wavenumber(idx[a]);
        k2 += k[a] * k[a];
    }
    if (k2 == 0.0) return;
    cplx kv = 0.0;
    for (int a = 0; a < g.dim(); ++a) kv += k[a] * v[a];
    for (int a = 0; a < g.dim(); ++a) v[a] -= k[a] * kv / k2;
}

} // namespace detail

/// Mode-wise (I - k k^T / |k|^2); the mean is preserved.
inline VectorField leray_project(const VectorField& f) {
    const Grid& g = f.grid();
    const int d = g.dim();
    std::vector<std::vector<cplx>> m(d, std::vector<cplx>(g.size()));
    cplx v[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (int a = 0; a < d; ++a) v[a] = f[a].mode(i);
        detail::project_mode(g, i, std::span<cplx>(v, d));
        for (int a = 0; a < d; ++a) m[a][i] = v[a];
    }
    return VectorField::from_modes(g, std::move(m), true);
}

// ---------------------------------------------------------------------------
// Dealiased products and the pressure solve
// ---------------------------------------------------------------------------

/// Zeroes every mode outside the 2/3-rule cube.
inline std::vector<cplx> truncate_modes(const Grid& g, std::span<const cplx> modes) {
    std::vector<cplx> m(modes.begin(), modes.end());
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!g.resolved(i)) m[i] = 0.0;
    return m;
}

inline ScalarField dealias(const ScalarField& f) {
    return ScalarField::from_modes(f.grid(), truncate_modes(f.grid(), f.modes()));
}

inline VectorField dealias(const VectorField& f) {
    std::vector<ScalarField> comps;
    for (const auto& c : f.components()) comps.push_back(dealias(c));
    return VectorField(std::move(comps), f.divergence_free());
}

/// Coefficients of a pointwise quantity assembled from dealiased samples,
/// truncated again after the forward transform.
inline std::vector<cplx> truncated_transform(const Grid& g, std::span<const double> samples) {
    auto m = forward_transform(g, samples);
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!g.resolved(i)) m[i] = 0.0;
    return m;
}

/// Dealiased physical samples of the components of a vector field.
inline std::vector<std::vector<double>> dealiased_samples(const VectorField& f) {
    std::vector<std::vector<double>> out;
    for (const auto& c : f.components())
        out.push_back(inverse_transform_real(f.grid(), truncate_modes(f.grid(), c.modes())));
    return out;
}

/// Symmetric stress G_jk = U_j U_k - B_j B_k, as Fourier coefficients indexed
/// [j][k] (both triangles filled).
inline std::vector<std::vector<std::vector<cplx>>> stress_modes(
    const Grid& g, const std::vector<std::vector<double>>& u, const std::vector<std::vector<double>>& b) {
    const int d = g.dim();
    std::vector<std::vector<std::vector<cplx>>> out(d, std::vector<std::vector<cplx>>(d));
    std::vector<double> p(g.size());
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = u[j][i] * u[k][i] - b[j][i] * b[k][i];
            out[j][k] = truncated_transform(g, p);
            if (k != j) out[k][j] = out[j][k];
        }
    return out;
}

/// Pi-hat(k) = -k_j k_m G-hat_jm(k) / |k|^2, mean zero.
inline std::vector<cplx> pressure_from_stress(const Grid& g,
                                              const std::vector<std::vector<std::vector<cplx>>>& stress) {
    const int d = g.dim();
    std::vector<cplx> pi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Multi idx = g.unflat(i);
        double k[3] = {0.0, 0.0, 0.0};
        double k2 = 0.0;
        for (int a = 0; a < d; ++a) {
            k[a] = g.derivative_wavenumber(idx[a]);
            k2 += k[a] * k[a];
        }
        if (k2 == 0.0) continue;
        cplx s = 0.0;
        for (int j = 0; j < d; ++j)
            for (int m = 0; m < d; ++m) s += k[j] * k[m] * stress[j][m][i];
        pi[i] = -s / k2;
    }
    return pi;
}

/// Solves Laplacian(Pi) = -d_j d_k (U_j U_k - B_j B_k) with zero mean.
inline ScalarField solve_total_pressure(const VectorField& u, const VectorField& b) {
    require_same_grid(u.grid(), b.grid(), "solve_total_pressure");
    const Grid& g = u.grid();
    const auto stress = stress_modes(g, dealiased_samples(u), dealiased_samples(b));
    return ScalarField::from_modes(g, pressure_from_stress(g, stress));
}

/// d_j d_k (U_j U_k - B_j B_k) built from the same dealiased products as the
/// pressure solve; used to check the Poisson residual.
inline ScalarField stress_double_divergence(const VectorField& u, const VectorField& b) {
    require_same_grid(u.grid(), b.grid(), "stress_double_divergence");
    const Grid& g = u.grid();
    const int d = g.dim();
    const auto stress = stress_modes(g, dealiased_samples(u), dealiased_samples(b));
    std::vector<cplx> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Multi idx = g.unflat(i);
        cplx s = 0.0;
        for (int j = 0; j < d; ++j)
            for (int m = 0; m < d; ++m)
                s -= g.derivative_wavenumber(idx[j]) * g.derivative_wavenumber(idx[m]) * stress[j][m][i];
        out[i] = s;
    }
    return ScalarField::from_modes(g, std::move(out));
}

inline ScalarField laplacian(const ScalarField& f) {
    const Grid& g = f.grid();
    std::vector<cplx> m(f.modes().begin(), f.modes().end());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Multi idx = g.unflat(i);
        double k2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double k = g.derivative_wavenumber(idx[a]);
            k2 += k * k;
        }
        m[i] *= -k2;
    }
    return ScalarField::from_modes(g, std::move(m));
}

} // namespace mhdlab
