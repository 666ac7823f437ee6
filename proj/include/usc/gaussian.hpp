// gaussian.hpp: Gaussian phase-space states and symplectic maps.
//
// Quadrature convention: X = (a + a^dag)/2, P = (a - a^dag)/(2i), so the
// vacuum covariance is (1/4) * identity. Phase-space vectors are ordered
// (X_1, P_1, X_2, P_2, ...). Squeeze orientation: squeeze(xi) maps the vacuum
// to Var(X) = e^{-2 xi}/4, Var(P) = e^{2 xi}/4, so a negative xi broadens X.

#pragma once

#include <complex>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "usc/analytic_dicke.hpp"

namespace usc::gaussian {

inline constexpr double kVacuumVariance = 0.25;

// Block-diagonal symplectic form with [[0, 1], [-1, 0]] per mode.
Eigen::MatrixXd symplectic_form(int n_modes);

class GaussianState {
public:
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

    static GaussianState vacuum(int n_modes);

    int n_modes() const { return static_cast<int>(mean_.size() / 2); }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& covariance() const { return cov_; }

    // det(4 * covariance); 1 for a pure state.
    double purity_determinant() const;
    bool is_pure(double tol = 1e-10) const;
    // Smallest eigenvalue of cov + (i/4) J; >= 0 for a physical state.
    double uncertainty_margin() const;

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

// Affine symplectic map r -> S r + d.
class SymplecticOp {
public:
    SymplecticOp(Eigen::MatrixXd matrix, Eigen::VectorXd displacement);

    static SymplecticOp identity(int n_modes);
    static SymplecticOp squeeze(double xi, int n_modes = 1, int mode = 0);
    // Free evolution exp(-i sum_k theta_k n_k).
    static SymplecticOp rotation(std::span<const double> angles);
    static SymplecticOp displacement(std::complex<double> alpha, int n_modes = 1, int mode = 0);
    // (c, d) -> (a, b) with c = (a - b)/sqrt2, d = (a + b)/sqrt2, for modes (0, 1).
    static SymplecticOp hybrid_to_bare();

    const Eigen::MatrixXd& matrix() const { return s_; }
    const Eigen::VectorXd& displacement_vector() const { return d_; }

    // this after `first`.
    SymplecticOp after(const SymplecticOp& first) const;
    GaussianState apply(const GaussianState& s) const;
    // max |S^T J S - J|
    double symplecticity_error() const;

private:
    Eigen::MatrixXd s_;
    Eigen::VectorXd d_;
};

GaussianState make_squeezed_vacuum(double xi, int n_modes = 1);
GaussianState make_coherent(std::complex<double> alpha);
// Resonant Dicke ground state: xi_- on c, xi_+ on d, expressed in the (a, b) basis.
GaussianState make_two_mode_ground(const dicke::DickeParams& p);

GaussianState evolve_free(const GaussianState& s, std::span<const double> freqs, double t);

struct QuadratureMoments {
    double mean{0.0};
    double second{0.0};
    double fourth{0.0};
    double variance() const { return second - mean * mean; }
};

QuadratureMoments quadrature_moments(const GaussianState& s, int mode);
// <a^dag a> for one mode.
double mode_occupation(const GaussianState& s, int mode);

// |<psi_1|psi_2>| for two pure Gaussian states.
double overlap(const GaussianState& a, const GaussianState& b);

using StateFamily = std::function<GaussianState(double)>;

// Fidelity-susceptibility QFI, 8 (1 - |<psi(w - e)|psi(w + e)>|) / (2e)^2,
// Richardson-extrapolated over e and e/2. eps <= 0 selects 1e-4 * omega0.
// Throws StepTooSmall when the two step sizes disagree by more than 1e-3.
double fidelity_qfi(const StateFamily& family, double omega0, double eps = 0.0);

}  // namespace usc::gaussian
