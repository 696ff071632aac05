// constants.hpp: the bound constants C1..C4 and the existence horizons they imply.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "mhdlab/error.hpp"

namespace mhdlab {

enum class Provenance { Default, Calibrated };

inline std::string_view to_string(Provenance p) {
    return p == Provenance::Default ? "default" : "calibrated";
}

/// C1 (uniform Picard bound), C2 (contraction), C3 (magnetic bound, also
/// used as C_mu), C4 (complex strip bound). All constants are >= 1.
class ConstantsLedger {
public:
    ConstantsLedger() = default;

    ConstantsLedger(double c1, double c2, double c3, double c4,
                    Provenance provenance = Provenance::Default)
        : values_{c1, c2, c3, c4}, provenance_{provenance, provenance, provenance, provenance} {
        for (int i = 0; i < 4; ++i) check(i, values_[i]);
    }

    double c1() const noexcept { return values_[0]; }
    double c2() const noexcept { return values_[1]; }
    double c3() const noexcept { return values_[2]; }
    double c4() const noexcept { return values_[3]; }
    /// Magnetic-diffusion constant of the B bound; identified with C3.
    double c_mu() const noexcept { return values_[2]; }

    /// i in 1..4.
    double get(int i) const { return values_.at(i - 1); }
    Provenance provenance(int i) const { return provenance_.at(i - 1); }

    ConstantsLedger with(int i, double value, Provenance p) const {
        check(i - 1, value);
        ConstantsLedger out = *this;
        out.values_.at(i - 1) = value;
        out.provenance_.at(i - 1) = p;
        return out;
    }

private:
    static void check(int idx, double v) {
        if (!(v >= 1.0) || !std::isfinite(v))
            throw ParameterError("constant C" + std::to_string(idx + 1) + " must be finite and >= 1, got " +
                                 std::to_string(v));
    }

    std::array<double, 4> values_{1.0, 1.0, 1.0, 1.0};
    std::array<Provenance, 4> provenance_{Provenance::Default, Provenance::Default, Provenance::Default,
                                          Provenance::Default};
};

/// Horizons computed from A = ||U0|| + ||B0||. A = 0 gives `unbounded` with
/// every horizon set to +infinity.
struct ExistenceTimes {
    double amplitude = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double t4 = 0.0;
    bool unbounded = false;
    ConstantsLedger ledger;

    /// ((2b-1)^2 / b^4) * T4 for b in (1/2, 1].
    double t_beta(double beta) const {
        if (!(beta > 0.5 && beta <= 1.0)) throw ParameterError("beta must lie in (1/2, 1]");
        if (unbounded) return std::numeric_limits<double>::infinity();
        const double f = (2.0 * beta - 1.0) * (2.0 * beta - 1.0) / (beta * beta * beta * beta);
        return f * t4;
    }

    /// min(horizon, 1/(16 C_mu^2 ||U||^2)) with ||U|| the realized velocity norm.
    double t3(double horizon, double velocity_sup) const {
        if (velocity_sup == 0.0) return horizon;
        const double c = ledger.c_mu();
        return std::min(horizon, 1.0 / (16.0 * c * c * velocity_sup * velocity_sup));
    }
};

inline ExistenceTimes existence_times(double u0_norm, double b0_norm, const ConstantsLedger& ledger) {
    if (!(u0_norm >= 0.0) || !(b0_norm >= 0.0))
        throw ParameterError("existence_times: norms must be nonnegative");
    ExistenceTimes out;
    out.ledger = ledger;
    const double a = u0_norm + b0_norm;
    out.amplitude = a;
    if (a == 0.0) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        out.t1 = out.t2 = out.t4 = inf;
        out.unbounded = true;
        return out;
    }
    const double c12 = 4.0 * ledger.c1() * ledger.c2() * a;
    const double c4 = ledger.c4();
    out.t1 = 1.0 / (4.0 * a * a);
    out.t2 = 1.0 / (c12 * c12);
    out.t4 = 1.0 / (16.0 * c4 * c4 * c4 * c4 * a * a);
    return out;
}

} // namespace mhdlab
