#include "usc/open_dynamics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "usc/errors.hpp"

namespace usc::open {

namespace {

// Coupling ratio g/omega for the resonant lower polariton; g_c = omega.
double resonant_ratio(const dicke::DickeParams& p) {
    dicke::check(p);
    const double r = p.g / p.omega;
    if (r >= 1.0 - dicke::kThresholdGuard) {
        throw BeyondThreshold("driven polariton needs g < omega (g/omega = " + std::to_string(r) +
                              ")");
    }
    return r;
}

double lorentz(const DriveParams& d) { return 4.0 * d.delta * d.delta + d.kappa * d.kappa; }

// 4 t eta^2 kappa / D * (g - 2 omega)^2 / (omega D^2 (omega - g)); the two
// SNR terms multiply this by 64 delta^2 and kappa^2 respectively.
double common_factor(const dicke::DickeParams& p, const DriveParams& d) {
    check(d);
    const double r = resonant_ratio(p);
    const double D = lorentz(d);
    return 4.0 * d.t_meas * d.eta * d.eta * d.kappa / D * (r - 2.0) * (r - 2.0) /
           (D * D * (1.0 - r));
}

}  // namespace

void check(const DriveParams& d) {
    if (!(d.kappa > 0.0)) throw InvalidParameter("kappa must be positive");
    if (!(d.t_meas > 0.0)) throw InvalidParameter("measurement time must be positive");
    if (!(d.eta >= 0.0)) throw InvalidParameter("pump strength must be non-negative");
    if (!std::isfinite(d.delta)) throw InvalidParameter("detuning must be finite");
}

SteadyResponse steady_state_response(const DriveParams& d) {
    check(d);
    const double D = lorentz(d);
    SteadyResponse r;
    r.amp_intracavity = 2.0 * d.eta / std::sqrt(D);
    r.amp_output = std::sqrt(d.kappa) * r.amp_intracavity;
    r.phase = std::atan2(d.kappa, 2.0 * d.delta);
    r.photon_flux = 4.0 * d.kappa * d.eta * d.eta / D;
    return r;
}

std::complex<double> steady_amplitude(const DriveParams& d) {
    check(d);
    return -d.eta / std::complex<double>(d.delta, -0.5 * d.kappa);
}

gaussian::GaussianState lindblad_steady_state(const DriveParams& d) {
    check(d);
    // d/dt (X, P) = A (X, P) + b
    Eigen::Matrix2d A;
    A << -0.5 * d.kappa, d.delta, -d.delta, -0.5 * d.kappa;
    const Eigen::Vector2d b(0.0, -d.eta);
    Eigen::FullPivLU<Eigen::Matrix2d> lu(A);
    if (!lu.isInvertible()) throw SingularDrift("drift matrix is singular");
    const Eigen::Vector2d mean = lu.solve(-b);

    // A S + S A^T + Dif = 0, vacuum noise Dif = (kappa/4) I
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    Eigen::Matrix4d L;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    // vec column-major: index = row + 2 col
                    L(i + 2 * j, k + 2 * l) = A(i, k) * I(j, l) + I(i, k) * A(j, l);
                }
            }
        }
    }
    Eigen::Vector4d rhs = Eigen::Vector4d::Constant(0.0);
    rhs(0) = rhs(3) = -0.25 * d.kappa;
    Eigen::FullPivLU<Eigen::Matrix4d> lyap(L);
    if (!lyap.isInvertible()) throw SingularDrift("Lyapunov operator is singular");
    const Eigen::Vector4d s = lyap.solve(rhs);
    Eigen::Matrix2d cov;
    cov << s(0), s(2), s(1), s(3);
    return gaussian::GaussianState(mean, cov);
}

FockSteadyState lindblad_steady_state_fock(const DriveParams& d, int cutoff) {
    check(d);
    if (cutoff < 2) throw InvalidParameter("cutoff must be >= 2");
    using Mat = Eigen::MatrixXcd;
    const int n = cutoff + 1;
    Mat a = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Mat ad = a.adjoint();
    const Mat H = d.delta * ad * a + d.eta * (a + ad);
    const Mat I = Mat::Identity(n, n);
    const std::complex<double> im(0.0, 1.0);

    // vec(A rho B) = (B^T kron A) vec(rho)
    auto kron = [](const Mat& x, const Mat& y) {
        Mat out(x.rows() * y.rows(), x.cols() * y.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (Eigen::Index j = 0; j < x.cols(); ++j) {
                out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
            }
        }
        return out;
    };
    const Mat ada = ad * a;
    Mat L = -im * (kron(I, H) - kron(H.transpose(), I)) +
            d.kappa * (kron(ad.transpose(), a) - 0.5 * kron(I, ada) -
                       0.5 * kron(ada.transpose(), I));

    // replace one equation by Tr rho = 1
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n * n);
    L.row(0).setZero();
    for (int k = 0; k < n; ++k) L(0, k + n * k) = 1.0;
    rhs(0) = 1.0;
    const Eigen::VectorXcd v = L.partialPivLu().solve(rhs);
    Mat rho = Eigen::Map<const Mat>(v.data(), n, n);
    rho = 0.5 * (rho + rho.adjoint());

    const std::complex<double> ma = (rho * a).trace();
    const std::complex<double> ma2 = (rho * a * a).trace();
    const double n_mean = std::real((rho * ada).trace());
    const double x = ma.real(), p = ma.imag();
    Eigen::Matrix2d cov;
    cov(0, 0) = 0.25 * (2.0 * ma2.real() + 2.0 * n_mean + 1.0) - x * x;
    cov(1, 1) = 0.25 * (-2.0 * ma2.real() + 2.0 * n_mean + 1.0) - p * p;
    cov(0, 1) = cov(1, 0) = 0.5 * ma2.imag() - x * p;
    FockSteadyState out{gaussian::GaussianState(Eigen::Vector2d(x, p), cov),
                        std::real((rho * rho).trace())};
    return out;
}

double homodyne_variance(double t, double xi_real) {
    if (!(t > 0.0)) throw InvalidParameter("measurement time must be positive");
    return std::exp(2.0 * xi_real) / (4.0 * t);
}

double snr_amplitude(const dicke::DickeParams& p, const DriveParams& d) {
    return 64.0 * d.delta * d.delta * common_factor(p, d);
}

double snr_amplitude_near_threshold(const dicke::DickeParams& p, const DriveParams& d) {
    check(d);
    const double r = resonant_ratio(p);
    const double D = lorentz(d);
    const double alpha_sq = 4.0 * d.eta * d.eta / D;
    // e^{-4 xi_-} = 1 / (1 - g/g_c)
    return 64.0 * d.kappa * d.t_meas * d.delta * d.delta * alpha_sq / (D * D * (1.0 - r));
}

double snr_phase(const dicke::DickeParams& p, const DriveParams& d) {
    return d.kappa * d.kappa * common_factor(p, d);
}

double driven_qfi_total(const dicke::DickeParams& p, const DriveParams& d) {
    return (64.0 * d.delta * d.delta + d.kappa * d.kappa) * common_factor(p, d);
}

}  // namespace usc::open
