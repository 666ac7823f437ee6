#include "usc/gaussian.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "usc/errors.hpp"

namespace usc::gaussian {

Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        j(2 * k, 2 * k + 1) = 1.0;
        j(2 * k + 1, 2 * k) = -1.0;
    }
    return j;
}

// ---------------------------------------------------------------- GaussianState

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)) {
    if (mean_.size() == 0 || mean_.size() % 2 != 0) {
        throw InvalidParameter("mean vector length must be a positive even number");
    }
    if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
        throw DimensionMismatch("covariance shape does not match mean vector");
    }
    // symmetrise away round-off from products of symplectic maps
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

GaussianState GaussianState::vacuum(int n_modes) {
    return {Eigen::VectorXd::Zero(2 * n_modes),
            kVacuumVariance * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

double GaussianState::purity_determinant() const { return (4.0 * cov_).determinant(); }

bool GaussianState::is_pure(double tol) const {
    return std::fabs(purity_determinant() - 1.0) <= tol;
}

double GaussianState::uncertainty_margin() const {
    const Eigen::MatrixXcd m = cov_.cast<std::complex<double>>() +
                               std::complex<double>(0.0, 0.25) *
                                   symplectic_form(n_modes()).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// ----------------------------------------------------------------- SymplecticOp

SymplecticOp::SymplecticOp(Eigen::MatrixXd matrix, Eigen::VectorXd displacement)
    : s_(std::move(matrix)), d_(std::move(displacement)) {
    if (s_.rows() != s_.cols() || s_.rows() != d_.size() || d_.size() % 2 != 0) {
        throw DimensionMismatch("symplectic matrix and displacement shapes disagree");
    }
}

SymplecticOp SymplecticOp::identity(int n_modes) {
    return {Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes),
            Eigen::VectorXd::Zero(2 * n_modes)};
}

SymplecticOp SymplecticOp::squeeze(double xi, int n_modes, int mode) {
    auto op = identity(n_modes);
    op.s_(2 * mode, 2 * mode) = std::exp(-xi);
    op.s_(2 * mode + 1, 2 * mode + 1) = std::exp(xi);
    return op;
}

SymplecticOp SymplecticOp::rotation(std::span<const double> angles) {
    const int n = static_cast<int>(angles.size());
    auto op = identity(n);
    for (int k = 0; k < n; ++k) {
        const double c = std::cos(angles[k]);
        const double s = std::sin(angles[k]);
        // a -> a e^{-i theta}
        op.s_(2 * k, 2 * k) = c;
        op.s_(2 * k, 2 * k + 1) = s;
        op.s_(2 * k + 1, 2 * k) = -s;
        op.s_(2 * k + 1, 2 * k + 1) = c;
    }
    return op;
}

SymplecticOp SymplecticOp::displacement(std::complex<double> alpha, int n_modes, int mode) {
    auto op = identity(n_modes);
    op.d_(2 * mode) = alpha.real();
    op.d_(2 * mode + 1) = alpha.imag();
    return op;
}

SymplecticOp SymplecticOp::hybrid_to_bare() {
    // input ordering (c, d), output ordering (a, b): a = (c + d)/sqrt2, b = (d - c)/sqrt2
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    for (int q = 0; q < 2; ++q) {
        m(q, q) = h;
        m(q, 2 + q) = h;
        m(2 + q, q) = -h;
        m(2 + q, 2 + q) = h;
    }
    return {m, Eigen::VectorXd::Zero(4)};
}

SymplecticOp SymplecticOp::after(const SymplecticOp& first) const {
    return {s_ * first.s_, s_ * first.d_ + d_};
}

GaussianState SymplecticOp::apply(const GaussianState& s) const {
    if (s.mean().size() != d_.size()) throw DimensionMismatch("mode count mismatch");
    return {s_ * s.mean() + d_, s_ * s.covariance() * s_.transpose()};
}

double SymplecticOp::symplecticity_error() const {
    const auto j = symplectic_form(static_cast<int>(d_.size() / 2));
    return (s_.transpose() * j * s_ - j).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------- constructors

GaussianState make_squeezed_vacuum(double xi, int n_modes) {
    if (!std::isfinite(xi)) throw InvalidParameter("squeezing parameter must be finite");
    return SymplecticOp::squeeze(xi, n_modes, 0).apply(GaussianState::vacuum(n_modes));
}

GaussianState make_coherent(std::complex<double> alpha) {
    return SymplecticOp::displacement(alpha).apply(GaussianState::vacuum(1));
}

GaussianState make_two_mode_ground(const dicke::DickeParams& p) {
    const auto sq = dicke::squeezing_parameters(p);
    const auto squeeze_c = SymplecticOp::squeeze(sq.xi_minus, 2, 0);
    const auto squeeze_d = SymplecticOp::squeeze(sq.xi_plus, 2, 1);
    const auto op = SymplecticOp::hybrid_to_bare().after(squeeze_d.after(squeeze_c));
    return op.apply(GaussianState::vacuum(2));
}

GaussianState evolve_free(const GaussianState& s, std::span<const double> freqs, double t) {
    if (static_cast<int>(freqs.size()) != s.n_modes()) {
        throw DimensionMismatch("one frequency per mode required");
    }
    std::vector<double> angles(freqs.begin(), freqs.end());
    for (auto& a : angles) a *= t;
    return SymplecticOp::rotation(angles).apply(s);
}

// -------------------------------------------------------------------- moments

QuadratureMoments quadrature_moments(const GaussianState& s, int mode) {
    if (mode < 0 || mode >= s.n_modes()) throw InvalidParameter("mode index out of range");
    const double mu = s.mean()(2 * mode);
    const double var = s.covariance()(2 * mode, 2 * mode);
    const double mu2 = mu * mu;
    return {mu, var + mu2, 3.0 * var * var + 6.0 * var * mu2 + mu2 * mu2};
}

double mode_occupation(const GaussianState& s, int mode) {
    if (mode < 0 || mode >= s.n_modes()) throw InvalidParameter("mode index out of range");
    const int x = 2 * mode;
    const auto& m = s.mean();
    const auto& c = s.covariance();
    return c(x, x) + c(x + 1, x + 1) + m(x) * m(x) + m(x + 1) * m(x + 1) - 0.5;
}

// --------------------------------------------------------------------- overlap

namespace {

// log |<a|b>|^2 = -1/2 log det(2 (Sa + Sb)) - 1/2 d^T (Sa + Sb)^{-1} d
double log_fidelity(const GaussianState& a, const GaussianState& b) {
    if (a.n_modes() != b.n_modes()) throw DimensionMismatch("mode count mismatch");
    const Eigen::MatrixXd sum = a.covariance() + b.covariance();
    const Eigen::LLT<Eigen::MatrixXd> llt(2.0 * sum);
    if (llt.info() != Eigen::Success) throw SolverFailure("covariance sum not positive definite");
    const Eigen::MatrixXd l = llt.matrixL();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log(l(i, i));
    const Eigen::VectorXd d = a.mean() - b.mean();
    // (2 sum)^{-1} solve, then rescale: d^T sum^{-1} d = 2 d^T (2 sum)^{-1} d
    const double quad = 2.0 * d.dot(llt.solve(d));
    return -0.5 * logdet - 0.5 * quad;
}

// 1 - |<a|b>| computed without cancellation.
double infidelity_amplitude(const GaussianState& a, const GaussianState& b) {
    return -std::expm1(0.5 * log_fidelity(a, b));
}

}  // namespace

double overlap(const GaussianState& a, const GaussianState& b) {
    return std::exp(0.5 * log_fidelity(a, b));
}

double fidelity_qfi(const StateFamily& family, double omega0, double eps) {
    if (eps <= 0.0) eps = 1e-4 * std::fabs(omega0);
    if (eps <= 0.0) throw StepTooSmall("finite-difference step must be positive");
    auto estimate = [&](double e) {
        const double step = 2.0 * e;
        return 8.0 * infidelity_amplitude(family(omega0 - e), family(omega0 + e)) / (step * step);
    };
    const double coarse = estimate(eps);
    const double fine = estimate(0.5 * eps);
    const double scale = std::fmax(std::fabs(coarse), std::fabs(fine));
    if (scale > 1e-6 && std::fabs(coarse - fine) > 1e-3 * scale) {
        throw StepTooSmall("fidelity QFI not resolved: step estimates differ by " +
                           std::to_string(std::fabs(coarse - fine) / scale));
    }
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace usc::gaussian
