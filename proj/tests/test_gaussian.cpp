// Gaussian phase-space engine: states, symplectic maps, moments, overlaps.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "usc/analytic_dicke.hpp"
#include "usc/errors.hpp"
#include "usc/gaussian.hpp"
#include "usc/numdiff.hpp"

using namespace usc;
using namespace usc::gaussian;
using doctest::Approx;

TEST_CASE("vacuum") {
    const auto v = GaussianState::vacuum(2);
    CHECK(v.n_modes() == 2);
    CHECK(v.covariance().isApprox(0.25 * Eigen::MatrixXd::Identity(4, 4)));
    CHECK(v.purity_determinant() == Approx(1.0));
    CHECK(v.is_pure());
    CHECK(v.uncertainty_margin() >= -1e-14);
    CHECK(mode_occupation(v, 1) == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("invalid states are rejected") {
    CHECK_THROWS_AS(GaussianState(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3)),
                    InvalidParameter);
    CHECK_THROWS_AS(GaussianState(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(4, 4)),
                    DimensionMismatch);
}

TEST_CASE("squeeze orientation") {
    const auto s = make_squeezed_vacuum(0.3);
    CHECK(s.covariance()(0, 0) == Approx(0.25 * std::exp(-0.6)).epsilon(1e-14));
    CHECK(s.covariance()(1, 1) == Approx(0.25 * std::exp(0.6)).epsilon(1e-14));
    const auto m = quadrature_moments(make_squeezed_vacuum(-0.5), 0);
    CHECK(m.variance() == Approx(0.679570457114761).epsilon(1e-12));
    CHECK(mode_occupation(make_squeezed_vacuum(-0.5), 0) == Approx(std::pow(std::sinh(0.5), 2)).epsilon(1e-12));
}

TEST_CASE("rotated squeezed vacuum") {
    // a quarter period later the broadened and narrowed quadratures have swapped
    const std::array<double, 1> w{1.0};
    const auto s = evolve_free(make_squeezed_vacuum(0.5), w, std::numbers::pi / 2);
    CHECK(s.covariance()(0, 0) == Approx(0.25 * std::exp(1.0)).epsilon(1e-12));
    const auto e = evolve_free(make_squeezed_vacuum(0.5), w, std::numbers::pi / 4);
    CHECK(e.covariance()(0, 0) == Approx(0.25 * std::cosh(1.0)).epsilon(1e-12));
}

TEST_CASE("coherent state moments") {
    const auto c = make_coherent({1.0, 0.0});
    const auto m = quadrature_moments(c, 0);
    CHECK(m.mean == Approx(1.0));
    CHECK(m.second == Approx(1.25));
    CHECK(m.fourth == Approx(2.6875));
    CHECK(mode_occupation(c, 0) == Approx(1.0));
    // mean follows alpha cos(omega t)
    const std::array<double, 1> w{2.0};
    for (double t : {0.0, 0.3, 1.7}) {
        CHECK(quadrature_moments(evolve_free(c, w, t), 0).mean == Approx(std::cos(2.0 * t)).epsilon(1e-13));
    }
}

TEST_CASE("Gaussian moment identities on random states") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.5, 1.5), ang(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 200; ++i) {
        const double xi = u(rng);
        const std::array<double, 1> th{ang(rng)};
        const auto op = SymplecticOp::displacement({u(rng), u(rng)})
                            .after(SymplecticOp::rotation(th))
                            .after(SymplecticOp::squeeze(xi));
        const auto s = op.apply(GaussianState::vacuum(1));
        const auto m = quadrature_moments(s, 0);
        const double var = s.covariance()(0, 0);
        const double mu = s.mean()(0);
        CHECK(m.second == Approx(var + mu * mu).epsilon(1e-12));
        CHECK(m.fourth == Approx(mu * mu * mu * mu + 6 * mu * mu * var + 3 * var * var).epsilon(1e-12));
        CHECK(s.purity_determinant() == Approx(1.0).epsilon(1e-10));
        CHECK(s.uncertainty_margin() >= -1e-12);
        CHECK(op.symplecticity_error() <= 1e-12);
    }
}

TEST_CASE("free evolution preserves purity and occupation") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0), freq(0.1, 3.0), time(0.0, 20.0);
    for (int i = 0; i < 50; ++i) {
        const auto p = dicke::DickeParams::resonant_at(1.0, 0.45 * (u(rng) + 1.0));
        auto s = SymplecticOp::displacement({u(rng), u(rng)}, 2, 1).apply(make_two_mode_ground(p));
        const std::array<double, 2> w{freq(rng), freq(rng)};
        const auto e = evolve_free(s, w, time(rng));
        CHECK(e.purity_determinant() == Approx(1.0).epsilon(1e-9));
        // free evolution conserves each occupation only for uncorrelated modes,
        // but always conserves the symplectic invariant det
        CHECK(e.covariance().determinant() == Approx(s.covariance().determinant()).epsilon(1e-9));
    }
}

TEST_CASE("two-mode Dicke ground state") {
    const auto p = dicke::DickeParams::resonant_at(1.0, 0.99);
    const auto g = make_two_mode_ground(p);
    CHECK(g.is_pure(1e-9));
    CHECK(mode_occupation(g, 0) == Approx(dicke::bare_mode_occupation(dicke::squeezing_parameters(p))).epsilon(1e-12));
    // hybrid occupations through the inverse rotation
    const auto hybrid = SymplecticOp::hybrid_to_bare();
    Eigen::MatrixXd inv = hybrid.matrix().inverse();
    const GaussianState cd(inv * g.mean(), inv * g.covariance() * inv.transpose());
    const auto v = dicke::virtual_mode_occupation(p);
    CHECK(mode_occupation(cd, 0) == Approx(v.n_c).epsilon(1e-12));
    CHECK(mode_occupation(cd, 1) == Approx(v.n_d).epsilon(1e-12));
}

TEST_CASE("overlap") {
    const auto v = GaussianState::vacuum(1);
    CHECK(overlap(v, v) == Approx(1.0));
    CHECK(overlap(v, make_coherent({1.0, 0.0})) == Approx(std::exp(-0.5)).epsilon(1e-13));
    CHECK(overlap(v, make_squeezed_vacuum(0.4)) == Approx(1.0 / std::sqrt(std::cosh(0.4))).epsilon(1e-13));
    const auto a = make_coherent({0.3, -0.2}), b = make_coherent({-0.1, 0.5});
    CHECK(overlap(a, b) == Approx(std::exp(-0.5 * std::norm(std::complex<double>(0.4, -0.7)))).epsilon(1e-13));
}

TEST_CASE("fidelity QFI on the coherent family") {
    // |alpha e^{-i omega t}>: QFI = 4 |alpha|^2 t^2
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> amp(0.1, 3.0), time(0.1, 5.0);
    for (int i = 0; i < 10; ++i) {
        const double a = amp(rng), t = time(rng);
        auto family = [a, t](double w) { return make_coherent(a * std::exp(std::complex<double>(0.0, -w * t))); };
        CHECK(numdiff::relative_deviation(fidelity_qfi(family, 1.0), 4 * a * a * t * t) <= 1e-6);
    }
}

TEST_CASE("fidelity QFI on the squeezed family") {
    // squeezed vacuum with xi(w) = w: QFI = 2
    auto family = [](double w) { return make_squeezed_vacuum(w); };
    CHECK(fidelity_qfi(family, 0.3, 1e-3) == Approx(2.0).epsilon(1e-8));
    CHECK(fidelity_qfi(family, 0.3) == Approx(2.0).epsilon(1e-6));
}
