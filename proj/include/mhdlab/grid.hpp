// grid.hpp: the periodic box [0,L)^D and its wavenumber lattice.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "mhdlab/error.hpp"

namespace mhdlab {

using Point = std::array<double, 3>;
using Multi = std::array<int, 3>;

/// Uniform periodic grid with N points per axis on [0, L)^D, D in {2, 3}.
///
/// Samples are stored row-major with axis 0 slowest. Unused trailing axes of
/// `Point`/`Multi` are zero when D = 2.
class Grid {
public:
    Grid(int dim, int n, double length) : dim_(dim), n_(n), length_(length) {
        if (dim != 2 && dim != 3)
            throw ParameterError("grid dimension must be 2 or 3, got " + std::to_string(dim));
        if (n < 8 || (n & (n - 1)) != 0)
            throw ParameterError("points per axis must be a power of two >= 8, got " +
                                 std::to_string(n));
        if (!(length > 0.0) || !std::isfinite(length))
            throw ParameterError("box period must be positive");
        size_ = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
        if (dim == 3) size_ *= static_cast<std::size_t>(n);
    }

    int dim() const noexcept { return dim_; }
    int n() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    std::size_t size() const noexcept { return size_; }
    double spacing() const noexcept { return length_ / n_; }
    /// 2*pi/L, the lattice spacing in wavenumber space.
    double k0() const noexcept { return 2.0 * std::numbers::pi / length_; }

    std::size_t flat(const Multi& i) const noexcept {
        std::size_t f = 0;
        for (int a = 0; a < dim_; ++a) f = f * n_ + static_cast<std::size_t>(i[a]);
        return f;
    }

    Multi unflat(std::size_t f) const noexcept {
        Multi i{0, 0, 0};
        for (int a = dim_ - 1; a >= 0; --a) {
            i[a] = static_cast<int>(f % n_);
            f /= n_;
        }
        return i;
    }

    /// Signed lattice index of storage index i along one axis: 0..N/2, -N/2+1..-1.
    int signed_index(int i) const noexcept { return i <= n_ / 2 ? i : i - n_; }

    Multi signed_mode(std::size_t f) const noexcept {
        Multi m = unflat(f);
        for (int a = 0; a < dim_; ++a) m[a] = signed_index(m[a]);
        return m;
    }

    bool is_nyquist(int i) const noexcept { return i == n_ / 2; }

    /// Wavenumber used by even operators (heat flow): Nyquist kept at +N/2.
    double wavenumber(int i) const noexcept { return k0() * signed_index(i); }

    /// Wavenumber used by odd operators (derivatives, projections): Nyquist zeroed
    /// so that real fields stay real.
    double derivative_wavenumber(int i) const noexcept {
        return is_nyquist(i) ? 0.0 : wavenumber(i);
    }

    double k_squared(std::size_t f) const noexcept {
        const Multi i = unflat(f);
        double s = 0.0;
        for (int a = 0; a < dim_; ++a) {
            const double k = wavenumber(i[a]);
            s += k * k;
        }
        return s;
    }

    /// 2/3-rule mask: true when every |signed index| satisfies 3|n| < N.
    bool resolved(std::size_t f) const noexcept {
        const Multi i = unflat(f);
        for (int a = 0; a < dim_; ++a)
            if (3 * std::abs(signed_index(i[a])) >= n_) return false;
        return true;
    }

    Point coordinate(std::size_t f) const noexcept {
        const Multi i = unflat(f);
        Point x{0.0, 0.0, 0.0};
        for (int a = 0; a < dim_; ++a) x[a] = i[a] * spacing();
        return x;
    }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
    }

private:
    int dim_;
    int n_;
    double length_;
    std::size_t size_;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) throw GridMismatchError(std::string(where) + ": fields live on different grids");
}

} // namespace mhdlab
