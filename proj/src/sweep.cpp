#include "usc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "usc/analytic_rabi.hpp"
#include "usc/errors.hpp"
#include "usc/fock.hpp"
#include "usc/open_dynamics.hpp"
#include "usc/strategy_lab.hpp"

namespace usc::sweep {

namespace {

using Values = std::map<std::string, double>;

const std::vector<std::string> kDickeParams = {
    "omega", "Omega", "g", "g_over_gc", "one_minus_g_over_gc", "kappa", "eta",
    "delta", "delta_over_kappa", "t", "alpha", "xi_r"};
const std::vector<std::string> kRabiParams = {
    "omega", "Omega", "Omega_over_omega", "g", "g_over_gc", "one_minus_g_over_gc",
    "t", "omega_t", "alpha", "xi_r"};

const std::vector<std::string> kDickeQuantities = {
    "coupling_ratio", "omega_minus", "omega_plus", "xi_minus", "xi_plus", "n_bare", "n_c", "n_d",
    "ground_qfi", "ground_qfi_near_critical", "dfreq_lower", "coherent_qfi",
    "coherent_qfi_heisenberg", "real_squeezing_qfi", "amp_intracavity", "amp_output", "phase",
    "photon_flux", "snr_amplitude", "snr_amplitude_near_threshold", "snr_phase",
    "driven_qfi_total", "homodyne_variance"};
const std::vector<std::string> kRabiQuantities = {
    "coupling_ratio", "coupling_ratio_sq", "xi", "n_virtual", "n_virtual_asymptote", "omega_eff",
    "domega_eff", "ground_qfi", "coherent_qfi", "snr_extract_static", "snr_extract_evolved",
    "snr_displaced", "snr_normal_mode", "snr_synergy", "envelope_displaced",
    "envelope_normal_mode", "envelope_synergy", "oracle_deviation", "gap", "dgap_domega"};
// The Fock-space columns cost a diagonalisation per point; request them explicitly.
const std::vector<std::string> kRabiDefault(kRabiQuantities.begin(), kRabiQuantities.end() - 2);

// Parameters that describe the same physical quantity; at most one may be given.
const std::vector<std::vector<std::string>> kAliases = {
    {"g", "g_over_gc", "one_minus_g_over_gc"},
    {"Omega", "Omega_over_omega"},
    {"delta", "delta_over_kappa"},
    {"t", "omega_t"}};

bool has(const Values& v, const std::string& k) { return v.count(k) != 0; }

double get(const Values& v, const std::string& k, double fallback) {
    const auto it = v.find(k);
    return it == v.end() ? fallback : it->second;
}

double resolve_g(const Values& v, double gc) {
    if (has(v, "g")) return v.at("g");
    if (has(v, "g_over_gc")) return v.at("g_over_gc") * gc;
    if (has(v, "one_minus_g_over_gc")) return (1.0 - v.at("one_minus_g_over_gc")) * gc;
    return 0.0;
}

dicke::DickeParams resolve_dicke(const Values& v) {
    dicke::DickeParams p;
    p.omega = get(v, "omega", 1.0);
    p.Omega = get(v, "Omega", p.omega);
    p.g = resolve_g(v, std::sqrt(p.omega * p.Omega));
    return p;
}

open::DriveParams resolve_drive(const Values& v) {
    open::DriveParams d;
    d.kappa = get(v, "kappa", 1.0);
    d.eta = get(v, "eta", 1.0);
    d.delta = has(v, "delta_over_kappa") ? v.at("delta_over_kappa") * d.kappa : get(v, "delta", 0.0);
    d.t_meas = get(v, "t", 1.0);
    return d;
}

rabi::RabiParams resolve_rabi(const Values& v) {
    rabi::RabiParams p;
    p.omega = get(v, "omega", 1.0);
    p.Omega = has(v, "Omega_over_omega") ? v.at("Omega_over_omega") * p.omega
                                         : get(v, "Omega", 1e4 * p.omega);
    p.g = resolve_g(v, std::sqrt(p.omega * p.Omega));
    return p;
}

double resolve_time(const Values& v, double omega) {
    return has(v, "omega_t") ? v.at("omega_t") / omega : get(v, "t", 1.0);
}

using Evaluator = std::function<double()>;

// Lazily shared pieces of one Rabi point so the Fock columns diagonalise once.
struct RabiPoint {
    rabi::RabiParams p;
    double t, alpha, xi_r;
    std::optional<fock::ConvergedSpectrum> converged;

    const fock::ConvergedSpectrum& spectrum() {
        if (!converged) converged = fock::converged_rabi(p);
        return *converged;
    }

    double gap_derivative() {
        const int cutoff = spectrum().cutoff;
        const rabi::RabiParams base = p;
        auto family = [base, cutoff](double w) {
            return fock::build_rabi({w, base.Omega, base.g}, fock::TruncatedSpace{{cutoff}, 2});
        };
        return fock::gap_derivative(family, p.omega);
    }

    double oracle_deviation() const {
        const double x = p.coupling_ratio_sq();
        const auto st = rabi::strategy_extract_static(p);
        double dev = strategy::oracle_deviation(st.value, strategy::oracle::extract_static(p), 0.0);
        const double ev = rabi::strategy_extract_evolved(p, t);
        dev = std::max(dev, strategy::oracle_deviation(ev, strategy::oracle::extract_evolved(p, t),
                                                       st.value));
        const auto disp = rabi::strategy_displaced(p, alpha, t);
        dev = std::max(dev, strategy::oracle_deviation(
                                disp.value, strategy::oracle::displaced(p, alpha, t), disp.envelope_at(t)));
        const auto nm = rabi::strategy_normal_mode(p, alpha, t);
        dev = std::max(dev, strategy::oracle_deviation(
                                nm.value, strategy::oracle::normal_mode(p, alpha, t), nm.envelope_at(t)));
        const auto syn = rabi::strategy_synergy(p, alpha, t, xi_r);
        const double k = (2.0 - x) * (2.0 - x);
        dev = std::max(dev, strategy::oracle_deviation(
                                syn.value * k, strategy::oracle::squeezed_normal_mode(p, alpha, t, xi_r),
                                syn.envelope_at(t) * k));
        return dev;
    }
};

Evaluator dicke_quantity(const std::string& q, const dicke::DickeParams& p,
                         const open::DriveParams& d, double alpha, double xi_r,
                         dicke::DerivativeConvention conv) {
    if (q == "coupling_ratio") return [=] { dicke::check(p); return p.coupling_ratio(); };
    if (q == "omega_minus") return [=] { return dicke::normal_frequencies(p).omega_minus; };
    if (q == "omega_plus") return [=] { return dicke::normal_frequencies(p).omega_plus; };
    if (q == "xi_minus") return [=] { return dicke::squeezing_parameters(p).xi_minus; };
    if (q == "xi_plus") return [=] { return dicke::squeezing_parameters(p).xi_plus; };
    if (q == "n_bare") return [=] { return dicke::bare_mode_occupation(dicke::squeezing_parameters(p)); };
    if (q == "n_c") return [=] { return dicke::virtual_mode_occupation(p).n_c; };
    if (q == "n_d") return [=] { return dicke::virtual_mode_occupation(p).n_d; };
    if (q == "ground_qfi") return [=] { return dicke::ground_state_qfi(p, conv); };
    if (q == "ground_qfi_near_critical") return [=] { return dicke::ground_state_qfi_near_critical(p); };
    if (q == "dfreq_lower") return [=] { return dicke::dfreq_lower(p); };
    if (q == "coherent_qfi") return [=] { return dicke::coherent_qfi(p, alpha, d.t_meas).exact; };
    if (q == "coherent_qfi_heisenberg") {
        return [=] { return dicke::coherent_qfi(p, alpha, d.t_meas).heisenberg; };
    }
    if (q == "real_squeezing_qfi") return [=] { return dicke::real_squeezing_qfi(p, alpha, d.t_meas); };
    if (q == "amp_intracavity") return [=] { return open::steady_state_response(d).amp_intracavity; };
    if (q == "amp_output") return [=] { return open::steady_state_response(d).amp_output; };
    if (q == "phase") return [=] { return open::steady_state_response(d).phase; };
    if (q == "photon_flux") return [=] { return open::steady_state_response(d).photon_flux; };
    if (q == "snr_amplitude") return [=] { return open::snr_amplitude(p, d); };
    if (q == "snr_amplitude_near_threshold") {
        return [=] { return open::snr_amplitude_near_threshold(p, d); };
    }
    if (q == "snr_phase") return [=] { return open::snr_phase(p, d); };
    if (q == "driven_qfi_total") return [=] { return open::driven_qfi_total(p, d); };
    if (q == "homodyne_variance") return [=] { return open::homodyne_variance(d.t_meas, xi_r); };
    throw InvalidSpec("unknown Dicke quantity '" + q + "'");
}

Evaluator rabi_quantity(const std::string& q, RabiPoint& pt) {
    const auto& p = pt.p;
    if (q == "coupling_ratio") return [&] { rabi::check(p); return p.g / p.critical_coupling(); };
    if (q == "coupling_ratio_sq") return [&] { rabi::check(p); return p.coupling_ratio_sq(); };
    if (q == "xi") return [&] { return rabi::rabi_effective(p).xi; };
    if (q == "n_virtual") return [&] { return rabi::rabi_effective(p).n_virtual; };
    if (q == "n_virtual_asymptote") return [&] { return rabi::rabi_effective(p).n_virtual_asymptote; };
    if (q == "omega_eff") return [&] { return rabi::rabi_effective(p).omega_eff; };
    if (q == "domega_eff") {
        return [&] {
            rabi::rabi_effective(p);
            const double x = p.coupling_ratio_sq();
            return (2.0 - x) / (2.0 * std::sqrt(1.0 - x));
        };
    }
    if (q == "ground_qfi") return [&] { return rabi::rabi_ground_qfi(p); };
    if (q == "coherent_qfi") return [&] { return rabi::rabi_coherent_qfi(p, pt.alpha, pt.t); };
    if (q == "snr_extract_static") return [&] { return rabi::strategy_extract_static(p).value; };
    if (q == "snr_extract_evolved") return [&] { return rabi::strategy_extract_evolved(p, pt.t); };
    if (q == "snr_displaced") return [&] { return rabi::strategy_displaced(p, pt.alpha, pt.t).value; };
    if (q == "snr_normal_mode") return [&] { return rabi::strategy_normal_mode(p, pt.alpha, pt.t).value; };
    if (q == "snr_synergy") {
        return [&] { return rabi::strategy_synergy(p, pt.alpha, pt.t, pt.xi_r).value; };
    }
    if (q == "envelope_displaced") {
        return [&] { return rabi::strategy_displaced(p, pt.alpha, pt.t).envelope; };
    }
    if (q == "envelope_normal_mode") {
        return [&] { return rabi::strategy_normal_mode(p, pt.alpha, pt.t).envelope; };
    }
    if (q == "envelope_synergy") {
        return [&] { return rabi::strategy_synergy(p, pt.alpha, pt.t, pt.xi_r).envelope; };
    }
    if (q == "oracle_deviation") return [&] { return pt.oracle_deviation(); };
    if (q == "gap") return [&] { return pt.spectrum().spectrum.gap; };
    if (q == "dgap_domega") return [&] { return pt.gap_derivative(); };
    throw InvalidSpec("unknown Rabi quantity '" + q + "'");
}

void validate_range(const Range& r) {
    if (r.name.empty()) throw InvalidSpec("range needs a parameter name");
    if (r.count < 2) throw InvalidSpec("range '" + r.name + "' needs count >= 2");
    if (!std::isfinite(r.start) || !std::isfinite(r.stop) || !(r.start < r.stop)) {
        throw InvalidSpec("range '" + r.name + "' needs finite start < stop");
    }
    if (r.log && !(r.start > 0.0)) throw InvalidSpec("log range '" + r.name + "' needs start > 0");
}

std::vector<Values> panel_points(const Panel& panel) {
    std::vector<Values> points{panel.fixed};
    for (const auto& r : panel.ranges) {
        std::vector<Values> next;
        const auto vals = r.values();
        next.reserve(points.size() * vals.size());
        for (const auto& base : points) {
            for (double v : vals) {
                Values pt = base;
                pt[r.name] = v;
                next.push_back(std::move(pt));
            }
        }
        points = std::move(next);
    }
    return points;
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

// ------------------------------------------------------------------ parsing

Target parse_target(const std::string& s) {
    if (s == "fig2") return Target::Fig2;
    if (s == "figs1") return Target::FigS1;
    if (s == "figs2") return Target::FigS2;
    if (s == "figs3") return Target::FigS3;
    if (s == "custom") return Target::Custom;
    throw InvalidSpec("unknown figure '" + s + "'");
}

Model parse_model(const std::string& s) {
    if (s == "dicke") return Model::Dicke;
    if (s == "rabi") return Model::Rabi;
    throw InvalidSpec("unknown model '" + s + "'");
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw InvalidSpec("unknown format '" + s + "'");
}

dicke::DerivativeConvention parse_convention(const std::string& s) {
    if (s == "tracked") return dicke::DerivativeConvention::TrackedResonance;
    if (s == "fixed") return dicke::DerivativeConvention::FixedPartner;
    throw InvalidSpec("unknown convention '" + s + "'");
}

std::string to_string(Target t) {
    switch (t) {
        case Target::Fig2: return "fig2";
        case Target::FigS1: return "figs1";
        case Target::FigS2: return "figs2";
        case Target::FigS3: return "figs3";
        case Target::Custom: return "custom";
    }
    return "custom";
}

std::string to_string(Model m) { return m == Model::Dicke ? "dicke" : "rabi"; }

Range Range::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4 && parts.size() != 5) {
        throw InvalidSpec("range '" + text + "' must be NAME:START:STOP:COUNT[:log]");
    }
    Range r;
    r.name = parts[0];
    try {
        std::size_t used = 0;
        r.start = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("start");
        r.stop = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("stop");
        r.count = std::stoi(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("count");
    } catch (const std::logic_error&) {
        throw InvalidSpec("range '" + text + "' has a malformed number");
    }
    if (parts.size() == 5) {
        if (parts[4] != "log" && parts[4] != "lin") {
            throw InvalidSpec("range spacing must be 'log' or 'lin'");
        }
        r.log = parts[4] == "log";
    }
    validate_range(r);
    return r;
}

std::vector<double> Range::values() const {
    validate_range(*this);
    std::vector<double> v(static_cast<std::size_t>(count));
    const double last = count - 1;
    if (log) {
        const double lo = std::log10(start), hi = std::log10(stop);
        for (int i = 0; i < count; ++i) v[i] = std::pow(10.0, lo + (hi - lo) * i / last);
        v.front() = start;
        v.back() = stop;
    } else {
        for (int i = 0; i < count; ++i) v[i] = start + (stop - start) * i / last;
        v.back() = stop;
    }
    return v;
}

const std::vector<std::string>& parameter_names(Model m) {
    return m == Model::Dicke ? kDickeParams : kRabiParams;
}

const std::vector<std::string>& quantity_names(Model m) {
    return m == Model::Dicke ? kDickeQuantities : kRabiQuantities;
}

const std::vector<std::string>& default_quantities(Model m) {
    return m == Model::Dicke ? kDickeQuantities : kRabiDefault;
}

void validate(const SweepSpec& spec) {
    if (spec.panels.empty()) throw InvalidSpec("sweep has no panels");
    const auto& names = parameter_names(spec.model);
    auto known = [&](const std::string& n) {
        return std::find(names.begin(), names.end(), n) != names.end();
    };
    for (const auto& panel : spec.panels) {
        std::set<std::string> given;
        for (const auto& [k, v] : panel.fixed) {
            if (!known(k)) {
                throw InvalidSpec("parameter '" + k + "' does not belong to the " +
                                  to_string(spec.model) + " model");
            }
            if (!std::isfinite(v)) throw InvalidSpec("parameter '" + k + "' must be finite");
            given.insert(k);
        }
        std::set<std::string> ranged;
        for (const auto& r : panel.ranges) {
            validate_range(r);
            if (!known(r.name)) {
                throw InvalidSpec("range parameter '" + r.name + "' does not belong to the " +
                                  to_string(spec.model) + " model");
            }
            if (!ranged.insert(r.name).second) {
                throw InvalidSpec("parameter '" + r.name + "' is swept twice");
            }
            given.insert(r.name);
        }
        for (const auto& group : kAliases) {
            int n = 0;
            for (const auto& k : group) n += static_cast<int>(given.count(k));
            if (n > 1) throw InvalidSpec("conflicting parameters for '" + group.front() + "'");
        }
    }
    const auto& qs = quantity_names(spec.model);
    for (const auto& q : spec.quantities) {
        if (std::find(qs.begin(), qs.end(), q) == qs.end()) {
            throw InvalidSpec("unknown quantity '" + q + "' for the " + to_string(spec.model) +
                              " model");
        }
    }
}

// ------------------------------------------------------------------ presets

SweepSpec figure_preset(Target target) {
    SweepSpec s;
    s.target = target;
    switch (target) {
        case Target::Fig2:
        case Target::FigS1: {
            s.model = Model::Dicke;
            const Values fixed = {{"omega", 1.0}, {"Omega", 1.0}, {"kappa", 1.0},
                                  {"eta", 1.0}, {"t", 1.0}};
            const Range detuning{"delta_over_kappa", -2.0, 2.0, 41, false};
            s.panels.push_back({"a", {detuning, {"g_over_gc", 0.0, 0.9, 19, false}}, fixed});
            s.panels.push_back(
                {"b", {detuning, {"one_minus_g_over_gc", 1e-4, 1e-1, 31, true}}, fixed});
            s.quantities = target == Target::Fig2
                               ? std::vector<std::string>{"coupling_ratio", "snr_amplitude"}
                               : std::vector<std::string>{"coupling_ratio", "snr_amplitude",
                                                          "snr_phase", "driven_qfi_total"};
            break;
        }
        case Target::FigS2:
            s.model = Model::Rabi;
            s.panels.push_back({"",
                                {{"Omega_over_omega", 1e2, 1e4, 3, true},
                                 {"g_over_gc", 0.0, 0.99, 34, false}},
                                {{"omega", 1.0}}});
            s.quantities = {"coupling_ratio", "omega_eff", "gap", "dgap_domega", "domega_eff"};
            break;
        case Target::FigS3: {
            s.model = Model::Rabi;
            const Range time{"omega_t", 0.0, 4.0 * std::numbers::pi, 400, false};
            const char* labels[] = {"a", "b", "c", "d"};
            const double couplings[] = {0.2, 0.5, 0.9, 0.99};
            for (int i = 0; i < 4; ++i) {
                s.panels.push_back({labels[i],
                                    {time},
                                    {{"omega", 1.0},
                                     {"Omega_over_omega", 1e4},
                                     {"alpha", 1.0},
                                     {"g_over_gc", couplings[i]}}});
            }
            s.quantities = {"coupling_ratio", "snr_extract_evolved", "snr_displaced",
                            "snr_normal_mode", "envelope_displaced", "envelope_normal_mode",
                            "oracle_deviation"};
            break;
        }
        case Target::Custom:
            throw InvalidSpec("custom sweeps have no preset");
    }
    return s;
}

// --------------------------------------------------------------- evaluation

std::vector<std::optional<double>> evaluate_point(Model model, const Values& values,
                                                  const std::vector<std::string>& quantities,
                                                  dicke::DerivativeConvention convention,
                                                  std::string& status) {
    std::vector<std::optional<double>> out(quantities.size());
    std::vector<std::string> kinds;
    auto record = [&](const std::string& kind) {
        if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);
    };
    auto run = [&](std::size_t i, const Evaluator& f) {
        try {
            const double v = f();
            if (std::isfinite(v)) {
                out[i] = v;
            } else {
                record("NonFinite");
            }
        } catch (const Error& e) {
            record(e.kind());
        } catch (const std::exception&) {
            record("Error");
        }
    };

    if (model == Model::Dicke) {
        const auto p = resolve_dicke(values);
        const auto d = resolve_drive(values);
        const double alpha = get(values, "alpha", 1.0);
        const double xi_r = get(values, "xi_r", 0.0);
        for (std::size_t i = 0; i < quantities.size(); ++i) {
            run(i, dicke_quantity(quantities[i], p, d, alpha, xi_r, convention));
        }
    } else {
        RabiPoint pt{resolve_rabi(values), 0.0, get(values, "alpha", 1.0), get(values, "xi_r", 0.0),
                     std::nullopt};
        pt.t = resolve_time(values, pt.p.omega);
        for (std::size_t i = 0; i < quantities.size(); ++i) {
            run(i, rabi_quantity(quantities[i], pt));
        }
    }
    if (kinds.empty()) {
        status = "ok";
    } else {
        status.clear();
        for (const auto& k : kinds) status += (status.empty() ? "" : "|") + k;
    }
    return out;
}

io::Table evaluate(const SweepSpec& spec) {
    validate(spec);
    const auto& quantities = spec.quantities.empty() ? default_quantities(spec.model) : spec.quantities;

    io::Table table;
    const bool labelled = spec.panels.size() > 1 || !spec.panels.front().label.empty();
    if (labelled) table.columns.push_back("panel");
    std::vector<std::string> axes;
    for (const auto& panel : spec.panels) {
        for (const auto& r : panel.ranges) {
            if (std::find(axes.begin(), axes.end(), r.name) == axes.end()) axes.push_back(r.name);
        }
    }
    table.columns.insert(table.columns.end(), axes.begin(), axes.end());
    table.columns.insert(table.columns.end(), quantities.begin(), quantities.end());
    table.columns.push_back("status");

    struct Job {
        const Panel* panel;
        Values values;
    };
    std::vector<Job> jobs;
    for (const auto& panel : spec.panels) {
        for (auto& v : panel_points(panel)) jobs.push_back({&panel, std::move(v)});
    }

    table.rows.resize(jobs.size());
    parallel_for(jobs.size(), spec.threads, [&](std::size_t i) {
        const auto& job = jobs[i];
        std::vector<io::Cell> row;
        if (labelled) row.emplace_back(job.panel->label);
        for (const auto& a : axes) {
            bool swept = false;
            for (const auto& r : job.panel->ranges) swept = swept || r.name == a;
            if (swept) {
                row.emplace_back(job.values.at(a));
            } else {
                row.emplace_back(std::monostate{});
            }
        }
        std::string status;
        for (const auto& v : evaluate_point(spec.model, job.values, quantities, spec.convention, status)) {
            if (v) {
                row.emplace_back(*v);
            } else {
                row.emplace_back(std::monostate{});
            }
        }
        row.emplace_back(status);
        table.rows[i] = std::move(row);
    });
    return table;
}

nlohmann::ordered_json spec_to_json(const SweepSpec& spec) {
    nlohmann::ordered_json j;
    j["target"] = to_string(spec.target);
    j["model"] = to_string(spec.model);
    j["convention"] = spec.convention == dicke::DerivativeConvention::TrackedResonance ? "tracked"
                                                                                        : "fixed";
    j["quantities"] = spec.quantities.empty() ? default_quantities(spec.model) : spec.quantities;
    j["panels"] = nlohmann::ordered_json::array();
    for (const auto& panel : spec.panels) {
        nlohmann::ordered_json pj;
        pj["label"] = panel.label;
        pj["ranges"] = nlohmann::ordered_json::array();
        for (const auto& r : panel.ranges) {
            pj["ranges"].push_back({{"name", r.name},
                                    {"start", r.start},
                                    {"stop", r.stop},
                                    {"count", r.count},
                                    {"spacing", r.log ? "log" : "lin"}});
        }
        pj["fixed"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : panel.fixed) pj["fixed"][k] = v;
        j["panels"].push_back(std::move(pj));
    }
    return j;
}

io::Table run_sweep(const SweepSpec& spec) {
    if (spec.out_path.empty()) throw InvalidSpec("sweep needs an output path");
    io::Table table = evaluate(spec);
    std::ofstream out(spec.out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + spec.out_path + "' for writing");
    if (spec.format == Format::Csv) {
        std::optional<std::string> comment;
        if (spec.timestamp) comment = "generated " + timestamp_now();
        io::write_csv(out, table, comment);
    } else {
        auto j = spec_to_json(spec);
        if (spec.timestamp) j["generated"] = timestamp_now();
        io::write_json(out, table, j);
    }
    out.close();
    if (!out) throw IoError("failed writing '" + spec.out_path + "'");
    return table;
}

}  // namespace usc::sweep
