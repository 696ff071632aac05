// initial_data.hpp: divergence-free initial data (U0, B0).
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mhdlab/rng.hpp"
#include "mhdlab/spectral.hpp"

namespace mhdlab {

enum class InitialKind { OrszagTang, RandomDivFree, Constant, SingleMode, Bump };

/// Parsed form of the `initial=` config value, e.g.
///   orszag-tang
///   random-divfree(seed=3, slope=2, amplitude=0.5)
///   constant(1, 0, 0)
///   single-mode(k=1:2, amplitude=0.5)
///   bump(amplitude=0.2, width=0.3, magnetic=0.5)
struct InitialSpec {
    InitialKind kind = InitialKind::Constant;
    std::uint64_t seed = 1;
    double slope = 2.0;
    double amplitude = 1.0;
    double width = 0.3;
    double magnetic = 1.0; ///< B0 amplitude relative to U0 (random-divfree, bump)
    Point constant{0.0, 0.0, 0.0};
    Multi mode{1, 0, 0};
    std::string text;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("initial data: cannot parse " + what + " '" + s + "'");
    }
}

} // namespace detail

inline InitialSpec parse_initial_spec(const std::string& raw) {
    InitialSpec spec;
    spec.text = detail::trim(raw);
    const auto open = spec.text.find('(');
    const std::string name = detail::trim(spec.text.substr(0, open));
    std::vector<std::string> args;
    if (open != std::string::npos) {
        const auto close = spec.text.rfind(')');
        if (close == std::string::npos || close < open) throw ParameterError("initial data: unbalanced parentheses");
        std::stringstream ss(spec.text.substr(open + 1, close - open - 1));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!detail::trim(item).empty()) args.push_back(detail::trim(item));
    }
    std::map<std::string, std::string> kv;
    std::vector<std::string> positional;
    for (const auto& a : args) {
        const auto eq = a.find('=');
        if (eq == std::string::npos)
            positional.push_back(a);
        else
            kv[detail::trim(a.substr(0, eq))] = detail::trim(a.substr(eq + 1));
    }
    const auto take = [&](const char* key, double& out) {
        if (auto it = kv.find(key); it != kv.end()) {
            out = detail::parse_number(it->second, key);
            kv.erase(it);
        }
    };
    if (name == "orszag-tang") {
        spec.kind = InitialKind::OrszagTang;
    } else if (name == "random-divfree") {
        spec.kind = InitialKind::RandomDivFree;
        double seed = 1.0;
        take("seed", seed);
        take("slope", spec.slope);
        take("amplitude", spec.amplitude);
        take("magnetic", spec.magnetic);
        spec.seed = static_cast<std::uint64_t>(seed);
    } else if (name == "constant") {
        spec.kind = InitialKind::Constant;
        if (positional.size() > 3) throw ParameterError("constant(...) takes at most 3 components");
        for (std::size_t i = 0; i < positional.size(); ++i)
            spec.constant[i] = detail::parse_number(positional[i], "constant component");
    } else if (name == "single-mode") {
        spec.kind = InitialKind::SingleMode;
        take("amplitude", spec.amplitude);
        if (auto it = kv.find("k"); it != kv.end()) {
            std::stringstream ss(it->second);
            std::string c;
            int i = 0;
            while (std::getline(ss, c, ':')) {
                if (i >= 3) throw ParameterError("single-mode: too many wavenumber components");
                spec.mode[i++] = static_cast<int>(detail::parse_number(c, "wavenumber"));
            }
            kv.erase(it);
        }
    } else if (name == "bump") {
        spec.kind = InitialKind::Bump;
        take("amplitude", spec.amplitude);
        take("width", spec.width);
        take("magnetic", spec.magnetic);
    } else {
        throw ParameterError("unknown initial data '" + name + "'");
    }
    if (!kv.empty()) throw ParameterError("initial data: unknown argument '" + kv.begin()->first + "'");
    if (!(spec.amplitude >= 0.0)) throw ParameterError("initial data: amplitude must be nonnegative");
    return spec;
}

/// Random solenoidal field with |F(k)| ~ |k|^-slope on the dealiased modes,
/// scaled to the requested grid sup-norm.
inline VectorField random_divergence_free(const Grid& g, std::uint64_t seed, double slope, double amplitude) {
    std::mt19937_64 gen(splitmix64(seed));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<ScalarField> comps;
    for (int a = 0; a < g.dim(); ++a) {
        std::vector<cplx> m(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Multi n = g.signed_mode(i);
            double n2 = 0.0;
            for (int c = 0; c < g.dim(); ++c) n2 += static_cast<double>(n[c]) * n[c];
            const double re = normal(gen);
            const double im = normal(gen);
            if (n2 == 0.0 || !g.resolved(i)) continue;
            m[i] = cplx(re, im) * std::pow(n2, -0.5 * slope);
        }
        // Real part of the synthesis keeps the spectrum Hermitian.
        comps.push_back(ScalarField::from_values(g, inverse_transform_real(g, m)));
    }
    VectorField f = leray_project(VectorField(std::move(comps)));
    const double s = sup_norm(f);
    return s == 0.0 ? f : scale(f, amplitude / s);
}

/// U = curl(psi e_z)-type field from a periodic Gaussian stream function
/// centred in the box, scaled to sup-norm `amplitude`.
inline VectorField gaussian_vortex(const Grid& g, double width, double amplitude) {
    const double l = g.length();
    const auto psi = ScalarField::sample(g, [&](const Point& x) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            double d = x[a] - 0.5 * l;
            d -= l * std::round(d / l);
            r2 += d * d;
        }
        return std::exp(-r2 / (2.0 * width * width));
    });
    std::vector<ScalarField> comps;
    comps.push_back(partial_derivative(psi, 1));
    comps.push_back(scale(partial_derivative(psi, 0), -1.0));
    if (g.dim() == 3) comps.push_back(ScalarField::zero(g));
    VectorField f = leray_project(dealias(VectorField(std::move(comps))));
    const double s = sup_norm(f);
    return s == 0.0 ? f : scale(f, amplitude / s);
}

inline std::pair<VectorField, VectorField> generate_initial(const InitialSpec& spec, const Grid& g) {
    const double tau = 2.0 * std::numbers::pi / g.length();
    switch (spec.kind) {
    case InitialKind::OrszagTang: {
        if (g.dim() != 2) throw ParameterError("orszag-tang initial data is two-dimensional");
        auto u = VectorField::sample(
            g, [tau](const Point& x) { return Point{-std::sin(tau * x[1]), std::sin(tau * x[0]), 0.0}; }, true);
        auto b = VectorField::sample(
            g, [tau](const Point& x) { return Point{-std::sin(tau * x[1]), std::sin(2.0 * tau * x[0]), 0.0}; },
            true);
        return {u, b};
    }
    case InitialKind::RandomDivFree:
        return {random_divergence_free(g, spec.seed, spec.slope, spec.amplitude),
                random_divergence_free(g, spec.seed + 0x9e3779b9ULL, spec.slope, spec.amplitude * spec.magnetic)};
    case InitialKind::Constant:
        if (g.dim() == 2 && spec.constant[2] != 0.0)
            throw ParameterError("constant initial data has a third component on a 2D grid");
        return {VectorField::constant(g, spec.constant), VectorField::zero(g)};
    case InitialKind::SingleMode: {
        Multi k = spec.mode;
        if (g.dim() == 2 && k[2] != 0) throw ParameterError("single-mode wavenumber has a third component on a 2D grid");
        double kn = 0.0;
        for (int a = 0; a < g.dim(); ++a) kn += static_cast<double>(k[a]) * k[a];
        if (kn == 0.0) throw ParameterError("single-mode wavenumber must be nonzero");
        // Unit polarisation orthogonal to k.
        Point e{0.0, 0.0, 0.0};
        if (g.dim() == 2) {
            e = {-static_cast<double>(k[1]), static_cast<double>(k[0]), 0.0};
        } else {
            const Point axis = std::abs(k[0]) <= std::abs(k[2]) ? Point{1.0, 0.0, 0.0} : Point{0.0, 0.0, 1.0};
            e = {axis[1] * k[2] - axis[2] * k[1], axis[2] * k[0] - axis[0] * k[2], axis[0] * k[1] - axis[1] * k[0]};
        }
        const double en = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
        for (auto& c : e) c /= en;
        const double amp = spec.amplitude;
        auto u = VectorField::sample(
            g,
            [&](const Point& x) {
                double ph = 0.0;
                for (int a = 0; a < g.dim(); ++a) ph += tau * k[a] * x[a];
                const double s = amp * std::sin(ph);
                return Point{s * e[0], s * e[1], s * e[2]};
            },
            true);
        return {u, VectorField::zero(g)};
    }
    case InitialKind::Bump: {
        auto u = gaussian_vortex(g, spec.width, spec.amplitude);
        return {u, scale(u, spec.magnetic)};
    }
    }
    throw ParameterError("unhandled initial data kind");
}

} // namespace mhdlab
