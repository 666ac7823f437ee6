#include "usc/analytic_dicke.hpp"

#include <cmath>
#include <string>

#include "usc/errors.hpp"

namespace usc::dicke {

namespace {

void require_normal_phase(const DickeParams& p) {
    check(p);
    const double r = p.coupling_ratio();
    if (r > 1.0 - kThresholdGuard) {
        throw BeyondThreshold("g/g_c = " + std::to_string(r) +
                              " is at or beyond the superradiant threshold");
    }
}

void require_resonance(const DickeParams& p) {
    if (!p.resonant()) {
        throw NotResonant("closed-form squeezing needs omega == Omega (got omega=" +
                          std::to_string(p.omega) + ", Omega=" + std::to_string(p.Omega) + ")");
    }
}

}  // namespace

double DickeParams::critical_coupling() const { return std::sqrt(omega * Omega); }

double DickeParams::coupling_ratio() const { return g / critical_coupling(); }

bool DickeParams::resonant() const {
    return std::fabs(omega - Omega) <= kResonanceTolerance * std::fmax(omega, Omega);
}

DickeParams DickeParams::resonant_at(double omega, double g) {
    return DickeParams{omega, omega, g, std::nullopt};
}

void check(const DickeParams& p) {
    if (!(p.omega > 0.0) || !(p.Omega > 0.0)) {
        throw InvalidParameter("frequencies must be strictly positive");
    }
    if (!(p.g >= 0.0)) throw InvalidParameter("coupling g must be >= 0");
    if (p.n_atoms && *p.n_atoms < 1) throw InvalidParameter("n_atoms must be positive");
}

SqueezingPair squeezing_parameters(const DickeParams& p) {
    require_normal_phase(p);
    require_resonance(p);
    const double r = p.coupling_ratio();
    return {0.25 * std::log1p(-r), 0.25 * std::log1p(r)};
}

NormalFrequencies normal_frequencies(const DickeParams& p) {
    require_normal_phase(p);
    const double w2 = p.omega * p.omega;
    const double W2 = p.Omega * p.Omega;
    const double root = std::sqrt((w2 - W2) * (w2 - W2) + 4.0 * p.g * p.g * p.omega * p.Omega);
    const double sum = w2 + W2;
    const double upper2 = 0.5 * (sum + root);
    // lower^2 from the determinant identity avoids cancellation in sum - root
    const double lower2 = p.omega * p.Omega * (p.omega * p.Omega - p.g * p.g) / upper2;
    return {std::sqrt(lower2), std::sqrt(upper2)};
}

double bare_mode_occupation(const SqueezingPair& sq) {
    const double sm = std::sinh(sq.xi_minus);
    const double sp = std::sinh(sq.xi_plus);
    return 0.5 * (sm * sm + sp * sp);
}

VirtualOccupation virtual_mode_occupation(const DickeParams& p) {
    const auto sq = squeezing_parameters(p);
    const double sm = std::sinh(sq.xi_minus);
    const double sp = std::sinh(sq.xi_plus);
    return {sm * sm, sp * sp};
}

double virtual_occupation_closed_form(double r) {
    if (!(r >= 0.0) || r > 1.0 - kThresholdGuard) {
        throw BeyondThreshold("coupling ratio outside [0, 1)");
    }
    const double s = std::sqrt(1.0 - r);
    const double num = 1.0 - s;
    return num * num / (4.0 * s);
}

double ground_state_qfi(const DickeParams& p, DerivativeConvention conv) {
    require_normal_phase(p);
    require_resonance(p);
    const double r = p.coupling_ratio();
    // d r / d omega: -g/omega^2 when Omega follows omega, -r/(2 omega) when it is fixed.
    const double dr = conv == DerivativeConvention::TrackedResonance
                          ? -p.g / (p.omega * p.omega)
                          : -r / (2.0 * p.omega);
    const double dxi_minus = 0.25 * (-dr) / (1.0 - r);
    const double dxi_plus = 0.25 * dr / (1.0 + r);
    return 2.0 * dxi_minus * dxi_minus + 2.0 * dxi_plus * dxi_plus;
}

double ground_state_qfi_near_critical(const DickeParams& p) {
    require_normal_phase(p);
    const double r = p.coupling_ratio();
    const double w4 = p.omega * p.omega * p.omega * p.omega;
    return p.g * p.g / (8.0 * w4 * (1.0 - r) * (1.0 - r));
}

double dfreq_lower(const DickeParams& p) {
    require_normal_phase(p);
    require_resonance(p);
    const double r = p.g / p.omega;
    return (2.0 - r) / (2.0 * std::sqrt(1.0 - r));
}

CoherentQfi coherent_qfi(const DickeParams& p, double alpha_mag, double t) {
    if (alpha_mag < 0.0 || t < 0.0) throw InvalidParameter("alpha and t must be >= 0");
    const double d = dfreq_lower(p);
    const auto sq = squeezing_parameters(p);
    const double r = p.coupling_ratio();
    const double resource = alpha_mag * alpha_mag * t * t;
    const double n_c = std::sinh(sq.xi_minus) * std::sinh(sq.xi_minus);
    return {4.0 * resource * d * d,
            resource / (1.0 - r),
            resource * std::exp(-4.0 * sq.xi_minus),
            16.0 * resource * n_c * n_c};
}

double real_squeezing_qfi(const DickeParams& p, double alpha_mag, double t) {
    const auto sq = squeezing_parameters(p);
    return 4.0 * t * t * alpha_mag * alpha_mag * std::exp(-2.0 * sq.xi_minus);
}

}  // namespace usc::dicke
