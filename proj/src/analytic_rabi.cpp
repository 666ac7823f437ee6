#include "usc/analytic_rabi.hpp"

#include <cmath>

#include "usc/errors.hpp"

namespace usc::rabi {

namespace {

double checked_ratio_sq(const RabiParams& p) {
    check(p);
    const double r = p.g / p.critical_coupling();
    if (r > 1.0 - kThresholdGuard) {
        throw BeyondThreshold("g/g_c = " + std::to_string(r) +
                              " is at or beyond the superradiant threshold");
    }
    return r * r;
}

void require_probe(double alpha_mag, double t) {
    if (!(alpha_mag >= 0.0) || !(t >= 0.0)) throw InvalidParameter("alpha and t must be >= 0");
}

// g^4 / (8 omega^2 g_c^4 (1 - x)^2). Shared by the static-extraction SNR and
// the ground-state QFI so both come from one expression tree.
double second_moment_information(const RabiParams& p, double x) {
    const double d = 1.0 - x;
    return x * x / (8.0 * p.omega * p.omega * d * d);
}

// |alpha|^2 (2 - x)^2 / (1 - x): 4 |alpha|^2 (d omega_eff / d omega)^2.
double normal_mode_coefficient(double alpha_mag, double x) {
    return alpha_mag * alpha_mag * (2.0 - x) * (2.0 - x) / (1.0 - x);
}

}  // namespace

double RabiParams::critical_coupling() const { return std::sqrt(omega * Omega); }

double RabiParams::coupling_ratio_sq() const { return g * g / (omega * Omega); }

bool RabiParams::dispersive() const { return Omega / omega >= kDispersiveRatio; }

RabiParams RabiParams::from_ratio(double omega, double g_over_gc, double Omega_over_omega) {
    RabiParams p{omega, omega * Omega_over_omega, 0.0};
    p.g = g_over_gc * p.critical_coupling();
    return p;
}

void check(const RabiParams& p) {
    if (!(p.omega > 0.0) || !(p.Omega > 0.0)) {
        throw InvalidParameter("frequencies must be strictly positive");
    }
    if (!(p.g >= 0.0)) throw InvalidParameter("coupling g must be >= 0");
}

const char* to_string(StrategyId id) {
    switch (id) {
        case StrategyId::ExtractStatic: return "extract_static";
        case StrategyId::ExtractEvolved: return "extract_evolved";
        case StrategyId::DisplacedExtract: return "displaced";
        case StrategyId::NormalMode: return "normal_mode";
        case StrategyId::Synergy: return "synergy";
    }
    return "unknown";
}

RabiEffective rabi_effective(const RabiParams& p) {
    const double x = checked_ratio_sq(p);
    RabiEffective e;
    e.xi = 0.25 * std::log1p(-x);
    const double s = std::sinh(e.xi);
    e.n_virtual = s * s;
    e.omega_eff = p.omega * std::sqrt(1.0 - x);
    e.n_virtual_asymptote = 0.25 / std::sqrt(1.0 - x);
    e.dispersive = p.dispersive();
    if (!e.dispersive) {
        e.warning = "Omega/omega = " + std::to_string(p.Omega / p.omega) +
                    " < 100: the effective squeezing model is only exact as Omega/omega -> inf";
    }
    return e;
}

StrategyResult strategy_extract_static(const RabiParams& p) {
    const double x = checked_ratio_sq(p);
    const double s = second_moment_information(p, x);
    return {StrategyId::ExtractStatic, [s](double) { return s; }, s, s, false};
}

double strategy_extract_evolved(const RabiParams& p, double t) {
    checked_ratio_sq(p);
    if (!(t >= 0.0)) throw InvalidParameter("t must be >= 0");
    const double w = p.omega;
    const double W = p.Omega;
    const double g2 = p.g * p.g;
    const double first = 4.0 * (g2 * t * std::sin(2.0 * w * t) - W) /
                         (g2 * std::cos(2.0 * w * t) - g2 + 2.0 * w * W);
    const double second = (g2 - 2.0 * w * W) / (g2 * w - w * w * W);
    const double sum = first + second;
    return sum * sum / 8.0;
}

StrategyResult strategy_displaced(const RabiParams& p, double alpha_mag, double t) {
    const double x = checked_ratio_sq(p);
    require_probe(alpha_mag, t);
    const double w = p.omega;
    const double a2 = alpha_mag * alpha_mag;
    const double root = std::sqrt(1.0 - x);
    auto snr = [=](double tau) {
        const double s = std::sin(w * tau);
        return 8.0 * a2 * tau * tau * root * s * s / (x * std::cos(2.0 * w * tau) - x + 2.0);
    };
    return {StrategyId::DisplacedExtract, snr, 4.0 * a2 / root, snr(t), true};
}

StrategyResult strategy_normal_mode(const RabiParams& p, double alpha_mag, double t) {
    const double x = checked_ratio_sq(p);
    require_probe(alpha_mag, t);
    const double coeff = normal_mode_coefficient(alpha_mag, x);
    const double w_eff = p.omega * std::sqrt(1.0 - x);
    auto snr = [=](double tau) {
        const double s = std::sin(w_eff * tau);
        return coeff * tau * tau * s * s;
    };
    return {StrategyId::NormalMode, snr, coeff, snr(t), true};
}

StrategyResult strategy_synergy(const RabiParams& p, double alpha_mag, double t, double xi_r) {
    const double x = checked_ratio_sq(p);
    require_probe(alpha_mag, t);
    if (xi_r > 0.0) throw InvalidParameter("xi_r must be <= 0 (noise-reducing)");
    const double xi = 0.25 * std::log1p(-x);
    const double coeff = alpha_mag * alpha_mag * std::exp(-4.0 * xi - 2.0 * xi_r);
    const double w_eff = p.omega * std::sqrt(1.0 - x);
    auto snr = [=](double tau) {
        const double s = std::sin(w_eff * tau);
        return coeff * tau * tau * s * s;
    };
    return {StrategyId::Synergy, snr, coeff, snr(t), true};
}

double rabi_ground_qfi(const RabiParams& p) {
    const double x = checked_ratio_sq(p);
    return second_moment_information(p, x);
}

double rabi_coherent_qfi(const RabiParams& p, double alpha_mag, double t) {
    const double x = checked_ratio_sq(p);
    require_probe(alpha_mag, t);
    return normal_mode_coefficient(alpha_mag, x) * t * t;
}

}  // namespace usc::rabi
