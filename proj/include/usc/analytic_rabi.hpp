// analytic_rabi.hpp: quantum Rabi model in the dispersive (Omega >> omega)
// limit: effective squeezing Hamiltonian, the measurement strategies and the
// homodyne-optimality identities.
//
// Sign convention: xi <= 0 and xi_r <= 0 are noise-reducing squeezing
// parameters (xi = 1/4 log(1 - g^2/g_c^2) < 0 in the normal phase).
// Every omega-derivative holds Omega and g fixed.

#pragma once

#include <functional>
#include <string>

namespace usc::rabi {

inline constexpr double kThresholdGuard = 1e-9;
inline constexpr double kDispersiveRatio = 100.0;

struct RabiParams {
    double omega{1.0};   // oscillator frequency
    double Omega{1e4};   // two-level splitting
    double g{0.0};       // coupling

    double critical_coupling() const;
    double coupling_ratio_sq() const;  // x = g^2 / g_c^2
    bool dispersive() const;           // Omega/omega >= 100

    static RabiParams from_ratio(double omega, double g_over_gc, double Omega_over_omega = 1e4);
};

void check(const RabiParams& p);

struct RabiEffective {
    double xi{0.0};
    double n_virtual{0.0};
    double omega_eff{0.0};
    double n_virtual_asymptote{0.0};  // 1/(4 sqrt(1-x)), the g -> g_c form
    bool dispersive{true};
    std::string warning;  // non-empty outside the dispersive regime
};

enum class StrategyId { ExtractStatic, ExtractEvolved, DisplacedExtract, NormalMode, Synergy };

const char* to_string(StrategyId id);

// SNR of one strategy. For time-quadratic strategies `envelope` is the
// coefficient of t^2 (sup over the sin^2 factor); for ExtractStatic it is the
// time-independent value itself.
struct StrategyResult {
    StrategyId id{StrategyId::ExtractStatic};
    std::function<double(double)> snr_of_t;
    double envelope{0.0};
    double value{0.0};  // snr_of_t at the requested time
    bool time_quadratic{false};

    double envelope_at(double t) const { return time_quadratic ? envelope * t * t : envelope; }
};

RabiEffective rabi_effective(const RabiParams& p);

StrategyResult strategy_extract_static(const RabiParams& p);
double strategy_extract_evolved(const RabiParams& p, double t);
StrategyResult strategy_displaced(const RabiParams& p, double alpha_mag, double t);
StrategyResult strategy_normal_mode(const RabiParams& p, double alpha_mag, double t);
StrategyResult strategy_synergy(const RabiParams& p, double alpha_mag, double t, double xi_r);

double rabi_ground_qfi(const RabiParams& p);
double rabi_coherent_qfi(const RabiParams& p, double alpha_mag, double t);

}  // namespace usc::rabi
