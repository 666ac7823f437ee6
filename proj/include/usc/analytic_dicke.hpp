// analytic_dicke.hpp: closed forms for the Dicke model in the normal phase.
//
// Units: hbar = 1; every frequency is in the same (arbitrary) unit as omega.
// All ground-state formulas need g below the critical coupling
// g_c = sqrt(omega * Omega); points with g/g_c > 1 - kThresholdGuard are
// rejected with BeyondThreshold.

#pragma once

#include <optional>

namespace usc::dicke {

inline constexpr double kThresholdGuard = 1e-9;
inline constexpr double kResonanceTolerance = 1e-12;

struct DickeParams {
    double omega{1.0};   // cavity frequency
    double Omega{1.0};   // atomic transition frequency
    double g{0.0};       // vacuum Rabi coupling
    std::optional<int> n_atoms;  // empty: thermodynamic limit

    double critical_coupling() const;
    double coupling_ratio() const;  // g / g_c
    bool resonant() const;

    static DickeParams resonant_at(double omega, double g);
};

// Throws InvalidParameter unless the frequencies are positive, g >= 0 and
// n_atoms (when given) is positive.
void check(const DickeParams& p);

// Squeezing of the hybridised modes c = (a-b)/sqrt2 and d = (a+b)/sqrt2.
struct SqueezingPair {
    double xi_minus{0.0};
    double xi_plus{0.0};
};

struct NormalFrequencies {
    double omega_minus{0.0};
    double omega_plus{0.0};
};

// How omega-derivatives treat the atomic frequency.
//   TrackedResonance: Omega follows omega (Omega == omega) before differentiating.
//   FixedPartner:     Omega is held constant; only g_c = sqrt(omega Omega) moves.
enum class DerivativeConvention { TrackedResonance, FixedPartner };

struct VirtualOccupation {
    double n_c{0.0};
    double n_d{0.0};
};

// Coherent-probe QFI of the lower polariton in its exact and near-threshold
// forms, reported side by side.
struct CoherentQfi {
    double exact{0.0};          // 4 t^2 |alpha|^2 (d omega_- / d omega)^2
    double near_critical{0.0};  // 4 t^2 |alpha|^2 / (4 (1 - g/g_c))
    double heisenberg{0.0};     // |alpha|^2 t^2 exp(-4 xi_-)
    double virtual_form{0.0};   // 16 t^2 |alpha|^2 n_c^2
};

SqueezingPair squeezing_parameters(const DickeParams& p);
NormalFrequencies normal_frequencies(const DickeParams& p);
double bare_mode_occupation(const SqueezingPair& sq);
VirtualOccupation virtual_mode_occupation(const DickeParams& p);

// (1 - sqrt(1-r))^2 / (4 sqrt(1-r)) with r = g/g_c; equals sinh^2(xi_-).
double virtual_occupation_closed_form(double coupling_ratio);

double ground_state_qfi(const DickeParams& p,
                        DerivativeConvention conv = DerivativeConvention::TrackedResonance);
// g^2 / (8 omega^4 (1 - g/g_c)^2): the xi_- term alone.
double ground_state_qfi_near_critical(const DickeParams& p);

// d omega_- / d omega with Omega tracked to omega.
double dfreq_lower(const DickeParams& p);

CoherentQfi coherent_qfi(const DickeParams& p, double alpha_mag, double t);
double real_squeezing_qfi(const DickeParams& p, double alpha_mag, double t);

}  // namespace usc::dicke
