// strategy_lab.hpp: compares the Rabi-model measurement strategies on a
// (coupling, time) grid and checks every closed form against Gaussian error
// propagation.

#pragma once

#include <optional>
#include <vector>

#include "usc/analytic_rabi.hpp"

namespace usc::strategy {

struct ComparisonGrid {
    std::vector<double> g_over_gc;  // each in [0, 1), ascending
    std::vector<double> time_grid;  // each >= 0, ascending
    double alpha_mag{1.0};
    std::optional<double> xi_r;     // enables the synergy column
    double omega{1.0};
    double Omega_over_omega{1e4};
};

void check(const ComparisonGrid& grid);

struct ComparisonRow {
    double g_over_gc{0.0};
    double t{0.0};
    double snr_extract_static{0.0};
    double snr_extract_evolved{0.0};
    double snr_displaced{0.0};
    double snr_normal_mode{0.0};
    std::optional<double> snr_synergy;
    double envelope_displaced{0.0};    // coefficient of t^2
    double envelope_normal_mode{0.0};  // coefficient of t^2
    std::optional<double> envelope_synergy;
    double oracle_deviation{0.0};      // worst strategy, see oracle_deviation()
    bool flagged{false};               // oracle_deviation > tolerance
};

// Rows ordered coupling-major, time-minor.
std::vector<ComparisonRow> run_comparison(const ComparisonGrid& grid, double tolerance = 1e-6);

// Gaussian-engine error propagation for each strategy. The omega-derivative is
// taken numerically with Omega and g fixed.
namespace oracle {
double extract_static(const rabi::RabiParams& p);
double extract_evolved(const rabi::RabiParams& p, double t);
double displaced(const rabi::RabiParams& p, double alpha_mag, double t);
double normal_mode(const rabi::RabiParams& p, double alpha_mag, double t);
// Exact SNR of a squeezed coherent probe of the normal mode. Near threshold it
// tends to the synergy closed form times (2 - x)^2.
double squeezed_normal_mode(const rabi::RabiParams& p, double alpha_mag, double t, double xi_r);
}  // namespace oracle

// |a - b| / max(|a|, |b|, scale, 1e-9): relative error that stays meaningful
// at the zeros of the oscillating SNR curves. `scale` is the size of the
// curve (its envelope at t, or its maximum over the time grid).
double oracle_deviation(double closed, double oracle, double scale);

// x = g^2/g_c^2 where the normal-mode and displaced envelopes cross, in
// (0.81, 0.9801). Independent of alpha_mag, which must be positive.
double crossover_coupling(double alpha_mag);

// Least-squares slope of log(envelope / 16 |alpha|^2) against log(n) with the
// near-threshold occupation n = 1/(4 sqrt(1 - x)), over g/g_c in [0.99, 0.9999].
// ExtractStatic uses its value directly.
double scaling_exponent(rabi::StrategyId id, const std::vector<double>& g_grid,
                        double alpha_mag = 1.0, double xi_r = 0.0);

}  // namespace usc::strategy
