// Closed forms of the Dicke model against independent evaluations.

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "usc/analytic_dicke.hpp"
#include "usc/errors.hpp"
#include "usc/gaussian.hpp"
#include "usc/numdiff.hpp"

using namespace usc;
using namespace usc::dicke;
using doctest::Approx;

namespace {

DickeParams resonant(double g) { return DickeParams::resonant_at(1.0, g); }

double rel(double a, double b) { return numdiff::relative_deviation(a, b); }

}  // namespace

TEST_CASE("squeezing parameters") {
    const auto zero = squeezing_parameters(resonant(0.0));
    CHECK(zero.xi_minus == 0.0);
    CHECK(zero.xi_plus == 0.0);

    const auto half = squeezing_parameters(resonant(0.5));
    CHECK(half.xi_minus == Approx(-0.173286795139986).epsilon(1e-13));
    CHECK(half.xi_plus == Approx(0.101366277027041).epsilon(1e-13));

    const auto near = squeezing_parameters(resonant(0.99));
    CHECK(near.xi_minus == Approx(-1.151292546497023).epsilon(1e-13));
    CHECK(near.xi_plus == Approx(0.172033659684100).epsilon(1e-13));

    CHECK_THROWS_AS(squeezing_parameters({1.0, 2.0, 0.5, {}}), NotResonant);
    CHECK_THROWS_AS(squeezing_parameters(resonant(1.0)), BeyondThreshold);
    CHECK_THROWS_AS(squeezing_parameters(resonant(1.0 - 1e-10)), BeyondThreshold);
    CHECK_THROWS_AS(squeezing_parameters({-1.0, -1.0, 0.1, {}}), InvalidParameter);
}

TEST_CASE("squeezing product identity") {
    for (double r = 0.0; r < 0.999; r += 0.037) {
        const auto sq = squeezing_parameters(resonant(r));
        CHECK(sq.xi_minus <= 0.0);
        CHECK(sq.xi_plus >= 0.0);
        CHECK(rel(std::exp(2 * sq.xi_minus) * std::exp(2 * sq.xi_plus), std::sqrt(1 - r * r)) <= 1e-12);
    }
}

TEST_CASE("normal frequencies") {
    const auto bare = normal_frequencies(resonant(0.0));
    CHECK(bare.omega_minus == Approx(1.0));
    CHECK(bare.omega_plus == Approx(1.0));

    const auto half = normal_frequencies(resonant(0.5));
    CHECK(half.omega_minus == Approx(0.707106781186548).epsilon(1e-13));
    CHECK(half.omega_plus == Approx(1.224744871391589).epsilon(1e-13));

    const auto off = normal_frequencies({1.0, 4.0, 1.0, {}});
    CHECK(off.omega_minus == Approx(0.859018423475299).epsilon(1e-12));
    CHECK(off.omega_plus == Approx(4.032627846470588).epsilon(1e-12));

    CHECK_THROWS_AS(normal_frequencies({1.0, 4.0, 2.0, {}}), BeyondThreshold);
}

TEST_CASE("trace and determinant identities on random parameters") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> freq(0.05, 20.0), ratio(0.0, 0.999);
    for (int i = 0; i < 500; ++i) {
        const double w = freq(rng), W = freq(rng);
        const double g = ratio(rng) * std::sqrt(w * W);
        const auto nf = normal_frequencies({w, W, g, {}});
        CHECK(nf.omega_minus <= nf.omega_plus);
        const double m2 = nf.omega_minus * nf.omega_minus, p2 = nf.omega_plus * nf.omega_plus;
        CHECK(rel(m2 + p2, w * w + W * W) <= 1e-12);
        CHECK(rel(m2 * p2, w * W * (w * W - g * g)) <= 1e-12);
    }
}

TEST_CASE("resonant frequencies follow the squeezing parameters") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> freq(0.1, 10.0), ratio(0.0, 0.9999);
    for (int i = 0; i < 200; ++i) {
        const double w = freq(rng);
        const auto p = DickeParams::resonant_at(w, ratio(rng) * w);
        const auto nf = normal_frequencies(p);
        const auto sq = squeezing_parameters(p);
        CHECK(rel(nf.omega_minus, w * std::exp(2 * sq.xi_minus)) <= 1e-12);
        CHECK(rel(nf.omega_plus, w * std::exp(2 * sq.xi_plus)) <= 1e-12);
    }
}

TEST_CASE("occupations") {
    CHECK(bare_mode_occupation({0.0, 0.0}) == 0.0);
    CHECK(bare_mode_occupation(squeezing_parameters(resonant(0.99))) ==
          Approx(1.027444350371866).epsilon(1e-12));
    CHECK(bare_mode_occupation(squeezing_parameters(resonant(0.5))) ==
          Approx(0.020320224484870).epsilon(1e-12));

    const auto v0 = virtual_mode_occupation(resonant(0.0));
    CHECK(v0.n_c == 0.0);
    CHECK(v0.n_d == 0.0);
    const auto v99 = virtual_mode_occupation(resonant(0.99));
    CHECK(v99.n_c == Approx(2.025).epsilon(1e-12));
    CHECK(v99.n_d == Approx(0.029888700743731).epsilon(1e-12));
    const auto v5 = virtual_mode_occupation(resonant(0.5));
    CHECK(v5.n_c == Approx(0.030330085889911).epsilon(1e-12));
    CHECK(v5.n_d == Approx(0.010310363079829).epsilon(1e-12));
}

TEST_CASE("virtual occupation closed form agrees with sinh^2 everywhere") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ratio(1e-6, 1.0 - 1e-8);
    for (int i = 0; i < 500; ++i) {
        const double r = ratio(rng);
        CHECK(rel(virtual_mode_occupation(resonant(r)).n_c, virtual_occupation_closed_form(r)) <= 1e-12);
    }
}

TEST_CASE("ground-state QFI") {
    CHECK(ground_state_qfi(resonant(0.0)) == 0.0);
    CHECK(ground_state_qfi(resonant(0.9)) == Approx(10.15305).epsilon(1e-6));
    CHECK(ground_state_qfi_near_critical(resonant(0.9)) == Approx(10.125).epsilon(1e-12));
    CHECK(ground_state_qfi(resonant(0.5)) == Approx(0.138888888888889).epsilon(1e-12));
    CHECK_THROWS_AS(ground_state_qfi(resonant(1.2)), BeyondThreshold);
    CHECK_THROWS_AS(ground_state_qfi({1.0, 2.0, 0.2, {}}), NotResonant);
}

TEST_CASE("ground-state QFI matches the fidelity of the two-mode ground state") {
    for (int i = 1; i <= 10; ++i) {
        const double r = i < 10 ? 0.1 * i : 0.95;
        const double oracle = gaussian::fidelity_qfi(
            [r](double w) { return gaussian::make_two_mode_ground(DickeParams::resonant_at(w, r)); }, 1.0);
        CHECK(rel(ground_state_qfi(resonant(r)), oracle) <= 1e-4);
    }
}

TEST_CASE("fixed-partner convention differentiates g_c only") {
    for (double r : {0.2, 0.6, 0.95}) {
        const double Omega = 1.0;
        // xi_-(omega) with Omega held fixed
        auto xi_m = [&](double w) { return 0.25 * std::log1p(-r / std::sqrt(w * Omega)); };
        auto xi_p = [&](double w) { return 0.25 * std::log1p(r / std::sqrt(w * Omega)); };
        const double dm = numdiff::richardson(xi_m, 1.0, 1e-4);
        const double dp = numdiff::richardson(xi_p, 1.0, 1e-4);
        const double oracle = 2 * dm * dm + 2 * dp * dp;
        CHECK(rel(ground_state_qfi(resonant(r), DerivativeConvention::FixedPartner), oracle) <= 1e-8);
    }
}

TEST_CASE("near-critical QFI approaches the exact one") {
    for (double gap : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto p = resonant(1.0 - gap);
        CHECK(rel(ground_state_qfi(p), ground_state_qfi_near_critical(p)) <= gap);
    }
}

TEST_CASE("lower-polariton frequency derivative") {
    CHECK(dfreq_lower(resonant(0.0)) == Approx(1.0));
    CHECK(dfreq_lower(resonant(0.99)) == Approx(5.05).epsilon(1e-12));
    CHECK(dfreq_lower(resonant(0.5)) == Approx(1.060660171779821).epsilon(1e-12));
    for (double r = 0.0; r <= 0.99 + 1e-12; r += 0.03) {
        auto lower = [r](double w) { return normal_frequencies(DickeParams::resonant_at(w, r)).omega_minus; };
        const double fd = numdiff::central(lower, 1.0, 1e-6);
        CHECK(rel(dfreq_lower(resonant(r)), fd) <= 1e-6);
    }
}

TEST_CASE("coherent-probe QFI") {
    CHECK(coherent_qfi(resonant(0.0), 1.0, 1.0).exact == Approx(4.0));
    const auto q = coherent_qfi(resonant(0.99), 1.0, 1.0);
    CHECK(q.exact == Approx(102.01).epsilon(1e-12));
    CHECK(q.heisenberg == Approx(100.0).epsilon(1e-12));
    CHECK(q.virtual_form == Approx(16 * 2.025 * 2.025).epsilon(1e-12));
    CHECK(coherent_qfi(resonant(0.99), 2.0, 3.0).exact == Approx(3672.36).epsilon(1e-12));
}

TEST_CASE("coherent-probe QFI matches the fidelity of the evolved coherent state") {
    for (double r : {0.0, 0.4, 0.9, 0.99}) {
        const double alpha = 1.5, t = 2.0;
        auto family = [&](double w) {
            const double wm = normal_frequencies(DickeParams::resonant_at(w, r)).omega_minus;
            return gaussian::make_coherent(alpha * std::exp(std::complex<double>(0.0, -wm * t)));
        };
        CHECK(rel(coherent_qfi(resonant(r), alpha, t).exact, gaussian::fidelity_qfi(family, 1.0)) <= 1e-5);
    }
}

TEST_CASE("coherent-probe QFI increases with coupling") {
    double previous = -1.0;
    for (double r = 0.0; r < 0.9999; r += 0.0125) {
        const double q = coherent_qfi(resonant(r), 1.0, 1.0).exact;
        CHECK(q > previous);
        previous = q;
    }
}

TEST_CASE("real squeezing comparison") {
    CHECK(real_squeezing_qfi(resonant(0.0), 1.0, 1.0) == Approx(4.0));
    CHECK(real_squeezing_qfi(resonant(0.99), 1.0, 1.0) == Approx(40.0).epsilon(1e-12));
    for (double r : {0.1, 0.5, 0.99, 0.9999}) {
        const auto p = resonant(r);
        const double ratio = coherent_qfi(p, 1.0, 1.0).heisenberg / real_squeezing_qfi(p, 1.0, 1.0);
        CHECK(rel(ratio, std::exp(-2 * squeezing_parameters(p).xi_minus) / 4) <= 1e-12);
    }
}
