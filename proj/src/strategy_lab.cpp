#include "usc/strategy_lab.hpp"

#include <algorithm>
#include <cmath>

#include "usc/errors.hpp"
#include "usc/gaussian.hpp"
#include "usc/numdiff.hpp"

namespace usc::strategy {

using rabi::RabiParams;

namespace {

// Relative step for the omega-derivatives of the oracles, shrunk near the
// threshold where x = g^2/g_c^2 varies on the scale 1 - x.
constexpr double kRelStep = 1e-4;

// Same coupling constant, different omega: g_c and x move with omega.
RabiParams at_omega(const RabiParams& p, double w) { return {w, p.Omega, p.g}; }

double squeezing_of(const RabiParams& p) { return rabi::rabi_effective(p).xi; }

double omega_eff_of(const RabiParams& p) { return rabi::rabi_effective(p).omega_eff; }

double derivative(const std::function<double(double)>& f, const RabiParams& p) {
    const double gap = 1.0 - p.coupling_ratio_sq();
    return numdiff::richardson(f, p.omega, std::min(kRelStep, 1e-2 * gap) * p.omega);
}

// SNR of measuring X^2 on a state family: (d<X^2>)^2 / (<X^4> - <X^2>^2).
double second_moment_snr(const std::function<gaussian::GaussianState(double)>& family,
                         const RabiParams& p) {
    const auto m = gaussian::quadrature_moments(family(p.omega), 0);
    const double noise = m.fourth - m.second * m.second;
    const double d = derivative(
        [&](double v) { return gaussian::quadrature_moments(family(v), 0).second; }, p);
    return d * d / noise;
}

// SNR of measuring X: (d<X>)^2 / Var X.
double first_moment_snr(const std::function<gaussian::GaussianState(double)>& family,
                        const RabiParams& p) {
    const auto m = gaussian::quadrature_moments(family(p.omega), 0);
    const double d = derivative([&](double v) { return family(v).mean()(0); }, p);
    return d * d / m.variance();
}

}  // namespace

void check(const ComparisonGrid& grid) {
    auto ascending = [](const std::vector<double>& v) {
        return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
    };
    if (grid.g_over_gc.empty() || grid.time_grid.empty()) {
        throw InvalidParameter("comparison grids must be non-empty");
    }
    if (!ascending(grid.g_over_gc) || !ascending(grid.time_grid)) {
        throw InvalidParameter("comparison grids must be strictly ascending");
    }
    if (grid.g_over_gc.front() < 0.0) throw InvalidParameter("g/g_c must be >= 0");
    if (grid.time_grid.front() < 0.0) throw InvalidParameter("times must be >= 0");
    if (!(grid.alpha_mag >= 0.0)) throw InvalidParameter("alpha must be >= 0");
    if (!(grid.omega > 0.0) || !(grid.Omega_over_omega > 0.0)) {
        throw InvalidParameter("frequencies must be positive");
    }
    if (grid.xi_r && *grid.xi_r > 0.0) throw InvalidParameter("xi_r must be <= 0");
}

namespace oracle {

double extract_static(const RabiParams& p) {
    auto family = [&](double w) {
        return gaussian::make_squeezed_vacuum(squeezing_of(at_omega(p, w)));
    };
    return second_moment_snr(family, p);
}

double extract_evolved(const RabiParams& p, double t) {
    auto family = [&](double w) {
        const double freq[] = {w};
        return gaussian::evolve_free(
            gaussian::make_squeezed_vacuum(squeezing_of(at_omega(p, w))), freq, t);
    };
    return second_moment_snr(family, p);
}

double displaced(const RabiParams& p, double alpha_mag, double t) {
    auto family = [&](double w) {
        const auto prepared = gaussian::SymplecticOp::displacement(alpha_mag).apply(
            gaussian::make_squeezed_vacuum(squeezing_of(at_omega(p, w))));
        const double freq[] = {w};
        return gaussian::evolve_free(prepared, freq, t);
    };
    return first_moment_snr(family, p);
}

double normal_mode(const RabiParams& p, double alpha_mag, double t) {
    auto family = [&](double w) {
        const double freq[] = {omega_eff_of(at_omega(p, w))};
        return gaussian::evolve_free(gaussian::make_coherent(alpha_mag), freq, t);
    };
    return first_moment_snr(family, p);
}

double squeezed_normal_mode(const RabiParams& p, double alpha_mag, double t, double xi_r) {
    // Pre-rotate the squeezed ellipse so free evolution at the nominal
    // frequency brings the reduced quadrature onto X at time t.
    const double pre[] = {-omega_eff_of(p) * t};
    const auto probe = gaussian::SymplecticOp::rotation(pre).apply(
        gaussian::make_squeezed_vacuum(-xi_r));
    const auto displaced_probe = gaussian::SymplecticOp::displacement(alpha_mag).apply(probe);
    auto family = [&](double w) {
        const double freq[] = {omega_eff_of(at_omega(p, w))};
        return gaussian::evolve_free(displaced_probe, freq, t);
    };
    return first_moment_snr(family, p);
}

}  // namespace oracle

double oracle_deviation(double closed, double oracle, double scale) {
    const double denom = std::max({std::fabs(closed), std::fabs(oracle), scale, 1e-9});
    return std::fabs(closed - oracle) / denom;
}

std::vector<ComparisonRow> run_comparison(const ComparisonGrid& grid, double tolerance) {
    check(grid);
    std::vector<ComparisonRow> rows;
    rows.reserve(grid.g_over_gc.size() * grid.time_grid.size());
    for (double r : grid.g_over_gc) {
        const auto p = RabiParams::from_ratio(grid.omega, r, grid.Omega_over_omega);
        const double x = p.coupling_ratio_sq();
        const auto st = rabi::strategy_extract_static(p);
        const double st_dev = oracle_deviation(st.value, oracle::extract_static(p), 0.0);

        double evolved_scale = 0.0;
        for (double t : grid.time_grid) {
            evolved_scale = std::max(evolved_scale, rabi::strategy_extract_evolved(p, t));
        }

        for (double t : grid.time_grid) {
            ComparisonRow row;
            row.g_over_gc = r;
            row.t = t;
            row.snr_extract_static = st.value;
            row.snr_extract_evolved = rabi::strategy_extract_evolved(p, t);
            const auto disp = rabi::strategy_displaced(p, grid.alpha_mag, t);
            const auto nm = rabi::strategy_normal_mode(p, grid.alpha_mag, t);
            row.snr_displaced = disp.value;
            row.snr_normal_mode = nm.value;
            row.envelope_displaced = disp.envelope;
            row.envelope_normal_mode = nm.envelope;

            double dev = st_dev;
            dev = std::max(dev, oracle_deviation(row.snr_extract_evolved,
                                                 oracle::extract_evolved(p, t), evolved_scale));
            dev = std::max(dev, oracle_deviation(disp.value, oracle::displaced(p, grid.alpha_mag, t),
                                                 disp.envelope_at(t)));
            dev = std::max(dev, oracle_deviation(nm.value, oracle::normal_mode(p, grid.alpha_mag, t),
                                                 nm.envelope_at(t)));
            if (grid.xi_r) {
                const auto syn = rabi::strategy_synergy(p, grid.alpha_mag, t, *grid.xi_r);
                row.snr_synergy = syn.value;
                row.envelope_synergy = syn.envelope;
                const double scaled = syn.value * (2.0 - x) * (2.0 - x);
                dev = std::max(dev, oracle_deviation(
                                        scaled,
                                        oracle::squeezed_normal_mode(p, grid.alpha_mag, t, *grid.xi_r),
                                        syn.envelope_at(t) * (2.0 - x) * (2.0 - x)));
            }
            row.oracle_deviation = dev;
            row.flagged = dev > tolerance;
            rows.push_back(row);
        }
    }
    return rows;
}

double crossover_coupling(double alpha_mag) {
    if (!(alpha_mag > 0.0)) throw InvalidParameter("alpha must be positive");
    // normal-mode / displaced envelope ratio minus one; alpha cancels
    auto f = [](double x) { return (2.0 - x) * (2.0 - x) / (4.0 * std::sqrt(1.0 - x)) - 1.0; };
    double lo = 0.81, hi = 0.9801;
    double flo = f(lo);
    const double fhi = f(hi);
    if (!(flo < 0.0 && fhi > 0.0)) {
        throw NoRootInBracket("envelope ratio does not change sign on (0.81, 0.9801)");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double scaling_exponent(rabi::StrategyId id, const std::vector<double>& g_grid, double alpha_mag,
                        double xi_r) {
    if (!(alpha_mag > 0.0)) throw InvalidParameter("alpha must be positive");
    if (id == rabi::StrategyId::ExtractEvolved) {
        throw InvalidParameter("extract_evolved has no time-independent envelope");
    }
    std::vector<double> xs, ys;
    for (double r : g_grid) {
        if (r < 0.99 - 1e-12 || r > 0.9999 + 1e-12) {
            throw InvalidParameter("scaling grid must lie in g/g_c in [0.99, 0.9999]");
        }
        const auto p = RabiParams::from_ratio(1.0, r);
        // near-threshold occupation 1/(4 sqrt(1 - x)), the form the scaling laws use
        const double n = rabi::rabi_effective(p).n_virtual_asymptote;
        double env = 0.0;
        switch (id) {
            case rabi::StrategyId::ExtractStatic:
                env = rabi::strategy_extract_static(p).value;
                break;
            case rabi::StrategyId::DisplacedExtract:
                env = rabi::strategy_displaced(p, alpha_mag, 0.0).envelope;
                break;
            case rabi::StrategyId::NormalMode:
                env = rabi::strategy_normal_mode(p, alpha_mag, 0.0).envelope;
                break;
            case rabi::StrategyId::Synergy:
                env = rabi::strategy_synergy(p, alpha_mag, 0.0, xi_r).envelope;
                break;
            case rabi::StrategyId::ExtractEvolved:
                break;
        }
        xs.push_back(std::log(n));
        ys.push_back(std::log(env / (16.0 * alpha_mag * alpha_mag)));
    }
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3 || distinct.back() - distinct.front() < 0.1) {
        throw GridTooCoarse("scaling fit needs at least 3 distinct couplings spanning the window");
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace usc::strategy
