#include "usc/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "usc/analytic_dicke.hpp"
#include "usc/analytic_rabi.hpp"
#include "usc/errors.hpp"
#include "usc/fock.hpp"
#include "usc/gaussian.hpp"
#include "usc/numdiff.hpp"
#include "usc/open_dynamics.hpp"
#include "usc/strategy_lab.hpp"

namespace usc::validation {

namespace {

using numdiff::relative_deviation;

struct Check {
    std::string name;
    double tolerance;
    bool heavy;
    std::function<double(const ValidationOptions&)> deviation;
};

double hp_gap_deviation(double omega, double Omega, double g, int cutoff) {
    const dicke::DickeParams p{omega, Omega, g, {}};
    const auto s = fock::spectrum(fock::build_hp_two_mode(p, fock::TruncatedSpace{{cutoff, cutoff}, 1}));
    return relative_deviation(s.gap, dicke::normal_frequencies(p).omega_minus);
}

double ground_qfi_family_deviation(double ratio) {
    const double g = ratio;  // omega = Omega = 1, g_c = 1
    const auto closed = dicke::ground_state_qfi(dicke::DickeParams::resonant_at(1.0, g));
    const double oracle = gaussian::fidelity_qfi(
        [g](double w) { return gaussian::make_two_mode_ground(dicke::DickeParams::resonant_at(w, g)); },
        1.0);
    return relative_deviation(closed, oracle);
}

double rabi_gap_derivative(double Omega_over_omega, double ratio) {
    const auto p = rabi::RabiParams::from_ratio(1.0, ratio, Omega_over_omega);
    const int cutoff = fock::converged_rabi(p).cutoff;
    return fock::gap_derivative(
        [p, cutoff](double w) {
            return fock::build_rabi({w, p.Omega, p.g}, fock::TruncatedSpace{{cutoff}, 2});
        },
        1.0);
}

std::vector<Check> all_checks() {
    std::vector<Check> c;
    c.push_back({"hp_gap_resonant", 1e-8, false, [](const ValidationOptions&) {
                     return hp_gap_deviation(1.0, 1.0, 0.5, 40);
                 }});
    c.push_back({"hp_gap_off_resonant", 1e-6, false, [](const ValidationOptions&) {
                     return hp_gap_deviation(1.0, 4.0, 1.0, 60);
                 }});
    c.push_back({"hp_random_gaps", 1e-6, true, [](const ValidationOptions&) {
                     std::mt19937_64 rng(7);
                     std::uniform_real_distribution<double> freq(0.5, 2.0), ratio(0.0, 0.9);
                     double worst = 0.0;
                     for (int i = 0; i < 5; ++i) {
                         const double w = freq(rng), W = freq(rng);
                         const double g = ratio(rng) * std::sqrt(w * W);
                         const auto conv = fock::converged_hp({w, W, g, {}});
                         worst = std::max(worst, relative_deviation(conv.spectrum.gap,
                                                                    dicke::normal_frequencies({w, W, g, {}}).omega_minus));
                     }
                     return worst;
                 }});
    c.push_back({"hp_virtual_occupation", 1e-6, false, [](const ValidationOptions&) {
                     const fock::TruncatedSpace space{{40, 40}, 1};
                     const auto p = dicke::DickeParams::resonant_at(1.0, 0.5);
                     const auto s = fock::spectrum(fock::build_hp_two_mode(p, space));
                     const double n = fock::ground_expectation(s, fock::hybrid_number_operator(space, -1));
                     return std::fabs(n - dicke::virtual_mode_occupation(p).n_c);
                 }});
    c.push_back({"hp_bare_occupation_near_threshold", 1e-3, true, [](const ValidationOptions&) {
                     const fock::TruncatedSpace space{{80, 80}, 1};
                     const auto p = dicke::DickeParams::resonant_at(1.0, 0.99);
                     const auto s = fock::spectrum(fock::build_hp_two_mode(p, space));
                     const double n = fock::ground_expectation(s, fock::number_operator(space, 0));
                     return std::fabs(n - dicke::bare_mode_occupation(dicke::squeezing_parameters(p)));
                 }});
    c.push_back({"finite_n_gap_monotone", 0.0, false, [](const ValidationOptions&) {
                     // 0 when gap(N) approaches the two-boson gap monotonically
                     const double target = dicke::normal_frequencies(dicke::DickeParams::resonant_at(1.0, 0.5)).omega_minus;
                     double previous = INFINITY;
                     double violations = 0.0;
                     for (int n : {2, 4, 8, 16}) {
                         dicke::DickeParams p{1.0, 1.0, 0.5, n};
                         const auto s = fock::spectrum(fock::build_dicke_finite(p, fock::TruncatedSpace{{40}, n + 1}));
                         const double dist = std::fabs(s.gap - target);
                         if (!(dist < previous)) violations += 1.0;
                         previous = dist;
                     }
                     return violations;
                 }});
    c.push_back({"ground_qfi_vs_fidelity", 1e-4, false, [](const ValidationOptions&) {
                     double worst = 0.0;
                     for (double r : {0.1, 0.3, 0.5, 0.7, 0.9, 0.95}) {
                         worst = std::max(worst, ground_qfi_family_deviation(r));
                     }
                     return worst;
                 }});
    c.push_back({"virtual_occupation_identity", 1e-12, false, [](const ValidationOptions&) {
                     double worst = 0.0;
                     for (double r = 0.05; r < 1.0; r += 0.05) {
                         const auto p = dicke::DickeParams::resonant_at(1.0, r);
                         worst = std::max(worst, relative_deviation(dicke::virtual_mode_occupation(p).n_c,
                                                                    dicke::virtual_occupation_closed_form(r)));
                     }
                     return worst;
                 }});
    c.push_back({"squeezed_second_moment_orientation", 1e-12, false, [](const ValidationOptions& o) {
                     const double vacuum = o.inject_half_vacuum ? 0.5 : gaussian::kVacuumVariance;
                     double worst = 0.0;
                     for (double xi : {-1.0, -0.5, -0.1, 0.3}) {
                         const auto m = gaussian::quadrature_moments(gaussian::make_squeezed_vacuum(xi), 0);
                         worst = std::max(worst, relative_deviation(m.second, vacuum * std::exp(-2.0 * xi)));
                     }
                     return worst;
                 }});
    c.push_back({"strategy_oracles", 1e-6, false, [](const ValidationOptions&) {
                     strategy::ComparisonGrid grid;
                     grid.g_over_gc = {0.0, 0.2, 0.5, 0.9, 0.99};
                     for (int i = 0; i < 40; ++i) grid.time_grid.push_back(0.3 * i);
                     grid.xi_r = -0.5;
                     double worst = 0.0;
                     for (const auto& row : strategy::run_comparison(grid)) {
                         worst = std::max(worst, row.oracle_deviation);
                     }
                     return worst;
                 }});
    c.push_back({"homodyne_optimality", 1e-12, false, [](const ValidationOptions&) {
                     double worst = 0.0;
                     for (double r : {0.1, 0.5, 0.9, 0.99}) {
                         const auto p = rabi::RabiParams::from_ratio(1.0, r);
                         worst = std::max(worst, relative_deviation(rabi::strategy_normal_mode(p, 1.3, 2.0).envelope_at(2.0),
                                                                    rabi::rabi_coherent_qfi(p, 1.3, 2.0)));
                         worst = std::max(worst, relative_deviation(rabi::strategy_extract_static(p).value,
                                                                    rabi::rabi_ground_qfi(p)));
                     }
                     return worst;
                 }});
    c.push_back({"crossover_envelopes_equal", 1e-9, false, [](const ValidationOptions&) {
                     const double x = strategy::crossover_coupling(1.0);
                     const auto p = rabi::RabiParams::from_ratio(1.0, std::sqrt(x));
                     return relative_deviation(rabi::strategy_normal_mode(p, 1.0, 1.0).envelope,
                                               rabi::strategy_displaced(p, 1.0, 1.0).envelope);
                 }});
    c.push_back({"scaling_exponents", 0.05, false, [](const ValidationOptions&) {
                     std::vector<double> grid;
                     for (int i = 0; i < 20; ++i) grid.push_back(1.0 - std::pow(10.0, -2.0 - 2.0 * i / 19.0));
                     const double nm = strategy::scaling_exponent(rabi::StrategyId::NormalMode, grid);
                     const double dp = strategy::scaling_exponent(rabi::StrategyId::DisplacedExtract, grid);
                     return std::max(std::fabs(nm - 2.0), std::fabs(dp - 1.0));
                 }});
    c.push_back({"lindblad_mean_vs_response", 1e-10, false, [](const ValidationOptions&) {
                     double worst = 0.0;
                     for (int i = 0; i < 10; ++i) {
                         const open::DriveParams d{0.5 + 0.2 * i, 0.3 + 0.15 * i, -1.5 + 0.35 * i, 1.0};
                         const double mean = open::lindblad_steady_state(d).mean().norm();
                         worst = std::max(worst, relative_deviation(mean, open::steady_state_response(d).amp_intracavity));
                     }
                     return worst;
                 }});
    c.push_back({"lindblad_fock_liouvillian", 1e-8, true, [](const ValidationOptions&) {
                     double worst = 0.0;
                     for (double delta : {0.0, 0.5, -1.0}) {
                         const open::DriveParams d{1.0, 1.0, delta, 1.0};
                         const auto fock_ss = open::lindblad_steady_state_fock(d, 30);
                         const auto drift = open::lindblad_steady_state(d);
                         worst = std::max(worst, (fock_ss.state.mean() - drift.mean()).cwiseAbs().maxCoeff());
                         worst = std::max(worst, (fock_ss.state.covariance() - drift.covariance()).cwiseAbs().maxCoeff());
                         worst = std::max(worst, std::fabs(fock_ss.purity - 1.0));
                     }
                     return worst;
                 }});
    c.push_back({"driven_decomposition", 1e-12, false, [](const ValidationOptions&) {
                     double worst = 0.0;
                     for (double delta : {-1.0, 0.0, 0.5, 2.0}) {
                         for (double g : {0.0, 0.5, 0.99}) {
                             const auto p = dicke::DickeParams::resonant_at(1.0, g);
                             const open::DriveParams d{1.0, 1.0, delta, 1.0};
                             worst = std::max(worst, relative_deviation(open::snr_amplitude(p, d) + open::snr_phase(p, d),
                                                                        open::driven_qfi_total(p, d)));
                         }
                     }
                     return worst;
                 }});
    c.push_back({"rabi_gap_schrieffer_wolff", 0.05, true, [](const ValidationOptions&) {
                     const auto p = rabi::RabiParams::from_ratio(1.0, 0.99, 1e4);
                     return relative_deviation(fock::converged_rabi(p).spectrum.gap,
                                               rabi::rabi_effective(p).omega_eff);
                 }});
    c.push_back({"rabi_gap_derivative_ordering", 0.0, true, [](const ValidationOptions&) {
                     // number of ordering violations across Omega/omega = 1e2, 1e3, 1e4
                     const double a = rabi_gap_derivative(1e2, 0.99);
                     const double b = rabi_gap_derivative(1e3, 0.99);
                     const double c3 = rabi_gap_derivative(1e4, 0.99);
                     return static_cast<double>((b > a ? 0 : 1) + (c3 > b ? 0 : 1));
                 }});
    return c;
}

}  // namespace

bool ValidationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::vector<std::string> check_names() {
    std::vector<std::string> names;
    for (const auto& c : all_checks()) names.push_back(c.name);
    return names;
}

ValidationReport validate(const ValidationOptions& options) {
    ValidationReport report;
    for (const auto& [name, _] : options.tolerance_overrides) {
        const auto names = check_names();
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw InvalidSpec("no validation check named '" + name + "'");
        }
    }
    for (const auto& check : all_checks()) {
        if (options.quick && check.heavy) continue;
        CheckResult r;
        r.name = check.name;
        const auto it = options.tolerance_overrides.find(check.name);
        r.tolerance = it == options.tolerance_overrides.end() ? check.tolerance : it->second;
        try {
            r.deviation = check.deviation(options);
            r.pass = std::isfinite(r.deviation) && r.deviation <= r.tolerance;
        } catch (const std::exception& e) {
            r.deviation = INFINITY;
            r.pass = false;
            r.detail = e.what();
        }
        report.checks.push_back(std::move(r));
    }
    return report;
}

}  // namespace usc::validation
