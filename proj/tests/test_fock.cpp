// Truncated Fock-space Hamiltonians against the Gaussian closed forms.

#include <cmath>
#include <random>

#include "doctest.h"
#include "usc/analytic_dicke.hpp"
#include "usc/analytic_rabi.hpp"
#include "usc/errors.hpp"
#include "usc/fock.hpp"
#include "usc/numdiff.hpp"

using namespace usc;
using namespace usc::fock;
using doctest::Approx;

namespace {

double rel(double a, double b) { return numdiff::relative_deviation(a, b); }

SparseMatrix lowering_matrix(int cutoff) {
    return annihilation(TruncatedSpace{{cutoff}, 1}, 0);
}

}  // namespace

TEST_CASE("space dimension and caps") {
    CHECK(TruncatedSpace{{3, 4}, 2}.dimension() == 40);
    CHECK_THROWS_AS(TruncatedSpace({{200, 200}, 1}).check(), DimensionCap);
    CHECK_THROWS_AS(TruncatedSpace({{-1}, 1}).check(), InvalidParameter);
    CHECK_NOTHROW(TruncatedSpace({{10}, 2}).check());
}

TEST_CASE("ladder operator algebra") {
    const int c = 12;
    const Eigen::MatrixXcd a = Eigen::MatrixXcd(lowering_matrix(c));
    const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
    for (int i = 0; i < c; ++i) CHECK(comm(i, i).real() == Approx(1.0));
    CHECK(comm(c, c).real() == Approx(-c));
    const auto n = number_operator(TruncatedSpace{{c}, 1}, 0).dense();
    for (int i = 0; i <= c; ++i) CHECK(n(i, i).real() == Approx(i));
}

TEST_CASE("Hermiticity is enforced") {
    SparseMatrix m(2, 2);
    m.insert(0, 1) = 1.0;
    CHECK_THROWS_AS(HermitianOperator{m}, InvalidParameter);
    m.insert(1, 0) = 1.0;
    CHECK_NOTHROW(HermitianOperator{m});
}

TEST_CASE("two-boson gap at resonance") {
    const auto p = dicke::DickeParams::resonant_at(1.0, 0.5);
    const auto s = spectrum(build_hp_two_mode(p, TruncatedSpace{{40, 40}, 1}));
    CHECK(rel(s.gap, dicke::normal_frequencies(p).omega_minus) <= 1e-8);
    CHECK(s.eigenvalues(0) < s.eigenvalues(1));
}

TEST_CASE("two-boson gap off resonance") {
    const dicke::DickeParams p{1.0, 4.0, 1.0, {}};
    const auto s = spectrum(build_hp_two_mode(p, TruncatedSpace{{60, 60}, 1}));
    CHECK(rel(s.gap, 0.859018423475299) <= 1e-6);
}

TEST_CASE("two-boson virtual occupations") {
    const auto p = dicke::DickeParams::resonant_at(1.0, 0.5);
    const TruncatedSpace space{{40, 40}, 1};
    const auto s = spectrum(build_hp_two_mode(p, space));
    const auto v = dicke::virtual_mode_occupation(p);
    CHECK(rel(ground_expectation(s, hybrid_number_operator(space, -1)), v.n_c) <= 1e-6);
    CHECK(rel(ground_expectation(s, hybrid_number_operator(space, +1)), v.n_d) <= 1e-6);
    CHECK(rel(ground_expectation(s, number_operator(space, 0)),
              dicke::bare_mode_occupation(dicke::squeezing_parameters(p))) <= 1e-6);
    CHECK_THROWS_AS(ground_expectation(s, number_operator(TruncatedSpace{{10}, 1}, 0)), DimensionMismatch);
}

TEST_CASE("two-boson gaps on random points") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> freq(0.5, 2.0), ratio(0.0, 0.8);
    for (int i = 0; i < 8; ++i) {
        const double w = freq(rng), W = freq(rng);
        const dicke::DickeParams p{w, W, ratio(rng) * std::sqrt(w * W), {}};
        const auto s = spectrum(build_hp_two_mode(p, TruncatedSpace{{24, 24}, 1}));
        CHECK(rel(s.gap, dicke::normal_frequencies(p).omega_minus) <= 1e-6);
    }
}

TEST_CASE("finite-N gap approaches the thermodynamic limit monotonically") {
    const auto p = dicke::DickeParams::resonant_at(1.0, 0.5);
    const double limit = dicke::normal_frequencies(p).omega_minus;
    double previous_error = INFINITY;
    for (int n : {2, 4, 8, 16, 32}) {
        auto pn = p;
        pn.n_atoms = n;
        const auto s = spectrum(build_dicke_finite(pn, TruncatedSpace{{40}, n + 1}));
        const double error = std::fabs(s.gap - limit);
        CHECK(error < previous_error);
        previous_error = error;
    }
    CHECK(previous_error < 5e-3);
    CHECK_THROWS_AS(build_dicke_finite(p, TruncatedSpace{{10}, 2}), InvalidParameter);
}

TEST_CASE("Lanczos agrees with the dense solver") {
    const dicke::DickeParams p{1.0, 1.3, 0.7, {}};
    const auto h = build_hp_two_mode(p, TruncatedSpace{{30, 30}, 1});  // 961 > dense limit
    REQUIRE(h.dim() > kDenseLimit);
    const auto sparse = spectrum(h, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
    for (int i = 0; i < 3; ++i) CHECK(sparse.eigenvalues(i) == Approx(es.eigenvalues()(i)).epsilon(1e-10));
    const Eigen::VectorXcd residual = h.matrix() * sparse.ground_state - sparse.eigenvalues(0) * sparse.ground_state;
    CHECK(residual.norm() <= 1e-7);
}

TEST_CASE("gap derivative matches the lower-polariton slope") {
    const double r = 0.5;
    auto family = [r](double w) {
        return build_hp_two_mode(dicke::DickeParams::resonant_at(w, r), TruncatedSpace{{30, 30}, 1});
    };
    CHECK(rel(gap_derivative(family, 1.0, 1e-3), dicke::dfreq_lower(dicke::DickeParams::resonant_at(1.0, r))) <= 1e-6);
}

TEST_CASE("converged two-boson spectrum") {
    const auto p = dicke::DickeParams::resonant_at(1.0, 0.9);
    const auto c = converged_hp(p);
    CHECK(rel(c.spectrum.gap, dicke::normal_frequencies(p).omega_minus) <= 1e-8);
    CHECK(c.cutoff >= default_start_cutoff(0.0));
    CHECK(default_start_cutoff(1.5) == 50);
}

TEST_CASE("converged spectrum reports exhaustion") {
    // a gap of 1/cutoff never settles, so the search must hit the cap
    auto family = [](int cutoff) {
        const TruncatedSpace space{{cutoff}, 1};
        return HermitianOperator{SparseMatrix(number_operator(space, 0).matrix() / static_cast<double>(cutoff))};
    };
    CutoffSchedule tight{20, 10, false, 1e-8, 200};
    CHECK_THROWS_AS(converged_spectrum(family, tight), ConvergenceError);
}

TEST_CASE("Rabi gap at weak coupling") {
    // dispersive regime: gap -> omega_eff
    const auto p = rabi::RabiParams::from_ratio(1.0, 0.5, 1e3);
    const auto s = spectrum(build_rabi(p, TruncatedSpace{{60}, 2}));
    CHECK(rel(s.gap, rabi::rabi_effective(p).omega_eff) <= 5e-3);
    CHECK_THROWS_AS(build_rabi(p, TruncatedSpace{{60}, 3}), InvalidParameter);
}

TEST_CASE("Rabi Hamiltonian without coupling") {
    const rabi::RabiParams p{1.0, 3.0, 0.0};
    const auto s = spectrum(build_rabi(p, TruncatedSpace{{10}, 2}), 3);
    CHECK(s.eigenvalues(0) == Approx(-1.5));
    CHECK(s.eigenvalues(1) == Approx(-0.5));
    CHECK(s.eigenvalues(2) == Approx(0.5));
}
