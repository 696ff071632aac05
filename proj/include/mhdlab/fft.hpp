// fft.hpp: thin FFTW wrapper with a process-wide plan cache.
//
// Forward transforms carry the 1/N^D factor so that the coefficient of a
// constant field equals that constant.
#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "mhdlab/grid.hpp"

namespace mhdlab {

using cplx = std::complex<double>;

namespace detail {

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int dim, int n, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(dim, n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::size_t total = 1;
        int dims[3];
        for (int a = 0; a < dim; ++a) {
            dims[a] = n;
            total *= static_cast<std::size_t>(n);
        }
        // FFTW_ESTIMATE leaves the scratch arrays untouched; UNALIGNED lets the
        // plan run on any std::vector storage through fftw_execute_dft.
        std::vector<cplx> in(total), out(total);
        fftw_plan p = fftw_plan_dft(dim, dims, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void execute(const Grid& g, int sign, std::span<const cplx> in, std::span<cplx> out) {
    fftw_plan p = PlanCache::instance().get(g.dim(), g.n(), sign);
    // Out-of-place complex transforms preserve their input.
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

} // namespace detail

/// Physical samples -> Fourier coefficients (normalized by 1/N^D).
inline std::vector<cplx> forward_transform(const Grid& g, std::span<const cplx> samples) {
    std::vector<cplx> out(g.size());
    detail::execute(g, FFTW_FORWARD, samples, out);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& c : out) c *= scale;
    return out;
}

inline std::vector<cplx> forward_transform(const Grid& g, std::span<const double> samples) {
    std::vector<cplx> in(samples.begin(), samples.end());
    return forward_transform(g, std::span<const cplx>(in));
}

/// Fourier coefficients -> complex physical samples.
inline std::vector<cplx> inverse_transform(const Grid& g, std::span<const cplx> modes) {
    std::vector<cplx> out(g.size());
    detail::execute(g, FFTW_BACKWARD, modes, out);
    return out;
}

inline std::vector<double> inverse_transform_real(const Grid& g, std::span<const cplx> modes) {
    const auto z = inverse_transform(g, modes);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
    return out;
}

} // namespace mhdlab
