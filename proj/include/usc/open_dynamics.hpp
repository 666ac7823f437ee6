// open_dynamics.hpp: the kappa-damped, coherently driven lower polariton.
//
// The drive is written in the frame of the pump, H = delta n + eta (e + e^dag),
// with delta = omega_p - omega_- and loss kappa on the polariton e. Signal-to-
// noise ratios use the resonant derivative d(omega_-)/d(omega) with g_c = omega.

#pragma once

#include <complex>

#include "usc/analytic_dicke.hpp"
#include "usc/gaussian.hpp"

namespace usc::open {

struct DriveParams {
    double kappa{1.0};   // loss rate
    double eta{1.0};     // pump strength
    double delta{0.0};   // pump - polariton detuning
    double t_meas{1.0};  // measurement duration
};

// Throws InvalidParameter unless kappa > 0, t_meas > 0, eta >= 0.
void check(const DriveParams& d);

struct SteadyResponse {
    double amp_intracavity{0.0};  // |alpha|
    double amp_output{0.0};       // sqrt(kappa) |alpha|
    double phase{0.0};            // atan2(kappa, 2 delta)
    double photon_flux{0.0};      // output photons per unit time
};

SteadyResponse steady_state_response(const DriveParams& d);

// Fixed point alpha_ss = -eta / (delta - i kappa/2).
std::complex<double> steady_amplitude(const DriveParams& d);

// Steady state from the linear drift equation and its Lyapunov equation.
gaussian::GaussianState lindblad_steady_state(const DriveParams& d);

// Independent check: null vector of the Fock-space Liouvillian with occupations
// up to `cutoff`, reduced to its first and second moments.
struct FockSteadyState {
    gaussian::GaussianState state;
    double purity{0.0};  // Tr rho^2
};
FockSteadyState lindblad_steady_state_fock(const DriveParams& d, int cutoff = 30);

// exp(2 xi_real) / (4 t).
double homodyne_variance(double t, double xi_real = 0.0);

double snr_amplitude(const dicke::DickeParams& p, const DriveParams& d);
// Leading behaviour as g -> omega: 64 kappa t delta^2 |alpha|^2 e^{-4 xi_-} / (4 delta^2 + kappa^2)^2.
double snr_amplitude_near_threshold(const dicke::DickeParams& p, const DriveParams& d);
double snr_phase(const dicke::DickeParams& p, const DriveParams& d);
// snr_amplitude + snr_phase written as one closed form.
double driven_qfi_total(const dicke::DickeParams& p, const DriveParams& d);

}  // namespace usc::open
