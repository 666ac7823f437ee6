// uscmet: command-line front end: single-point evaluation, parameter sweeps,
// figure data and the validation suite.
//
// Exit codes: 0 success, 1 invalid specification, 2 validation failure,
// 3 I/O error.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "usc/errors.hpp"
#include "usc/sweep.hpp"
#include "usc/table_io.hpp"
#include "usc/validate.hpp"

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct Options {
    std::string model = "dicke";
    std::string convention = "tracked";
    std::string format = "csv";
    std::string out;
    bool no_timestamp = false;
    unsigned threads = 0;
    std::vector<std::string> ranges;
    std::vector<std::string> quantities;
    std::vector<std::string> sets;
    std::map<std::string, std::optional<double>> params;
};

std::pair<std::string, double> parse_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw usc::InvalidSpec("expected NAME=VALUE, got '" + text + "'");
    }
    try {
        std::size_t used = 0;
        const std::string rhs = text.substr(eq + 1);
        const double v = std::stod(rhs, &used);
        if (used != rhs.size()) throw std::invalid_argument(rhs);
        return {text.substr(0, eq), v};
    } catch (const std::logic_error&) {
        throw usc::InvalidSpec("malformed number in '" + text + "'");
    }
}

usc::sweep::SweepSpec build_spec(const Options& o) {
    usc::sweep::SweepSpec spec;
    spec.model = usc::sweep::parse_model(o.model);
    spec.convention = usc::sweep::parse_convention(o.convention);
    spec.format = usc::sweep::parse_format(o.format);
    spec.out_path = o.out;
    spec.timestamp = !o.no_timestamp;
    spec.threads = o.threads;
    spec.quantities = o.quantities;
    usc::sweep::Panel panel;
    for (const auto& [name, value] : o.params) {
        if (value) panel.fixed[name] = *value;
    }
    for (const auto& s : o.sets) {
        const auto [name, value] = parse_assignment(s);
        panel.fixed[name] = value;
    }
    for (const auto& r : o.ranges) panel.ranges.push_back(usc::sweep::Range::parse(r));
    spec.panels.push_back(std::move(panel));
    return spec;
}

int run_eval(const Options& o) {
    auto spec = build_spec(o);
    if (!spec.panels.front().ranges.empty()) throw usc::InvalidSpec("eval takes no --range");
    usc::sweep::validate(spec);
    const auto& quantities =
        spec.quantities.empty() ? usc::sweep::default_quantities(spec.model) : spec.quantities;
    std::string status;
    const auto values = usc::sweep::evaluate_point(spec.model, spec.panels.front().fixed,
                                                   quantities, spec.convention, status);
    std::size_t width = 6;
    for (const auto& q : quantities) width = std::max(width, q.size());
    for (std::size_t i = 0; i < quantities.size(); ++i) {
        std::cout << quantities[i] << std::string(width - quantities[i].size() + 2, ' ')
                  << (values[i] ? usc::io::format_double(*values[i]) : std::string("-")) << '\n';
    }
    std::cout << "status" << std::string(width - 4, ' ') << status << '\n';
    return 0;
}

int run_sweep(const Options& o) {
    auto spec = build_spec(o);
    if (spec.out_path.empty()) throw usc::InvalidSpec("sweep needs --out");
    const auto table = usc::sweep::run_sweep(spec);
    std::cerr << "wrote " << table.rows.size() << " rows to " << spec.out_path << '\n';
    return 0;
}

int run_figure(const Options& o, const std::string& name) {
    auto spec = usc::sweep::figure_preset(usc::sweep::parse_target(name));
    spec.format = usc::sweep::parse_format(o.format);
    spec.out_path = o.out.empty() ? name + (spec.format == usc::sweep::Format::Csv ? ".csv" : ".json")
                                  : o.out;
    spec.timestamp = !o.no_timestamp;
    spec.threads = o.threads;
    if (!o.quantities.empty()) spec.quantities = o.quantities;
    const auto table = usc::sweep::run_sweep(spec);
    std::cerr << "wrote " << table.rows.size() << " rows to " << spec.out_path << '\n';
    return 0;
}

int run_validate(const std::vector<std::string>& tolerances, bool inject, bool quick) {
    usc::validation::ValidationOptions options;
    for (const auto& t : tolerances) {
        const auto [name, value] = parse_assignment(t);
        options.tolerance_overrides[name] = value;
    }
    options.inject_half_vacuum = inject;
    options.quick = quick;
    const auto report = usc::validation::validate(options);
    for (const auto& c : report.checks) {
        std::printf("%-4s %-36s deviation %-12.4g tolerance %-10.4g %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.deviation, c.tolerance, c.detail.c_str());
    }
    std::printf("overall: %s\n", report.pass() ? "PASS" : "FAIL");
    return report.pass() ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency estimation with virtual excitations in the Dicke and Rabi models"};
    app.set_config("--config", "", "key = value configuration file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--model", o.model, "dicke or rabi")->check(CLI::IsMember({"dicke", "rabi"}));
    for (const char* name : {"omega", "Omega", "g", "kappa", "eta", "delta", "t", "alpha"}) {
        o.params[name] = std::nullopt;
    }
    o.params["xi_r"] = std::nullopt;
    app.add_option("--omega", o.params["omega"], "cavity / oscillator frequency");
    app.add_option("--Omega", o.params["Omega"], "atomic transition frequency");
    app.add_option("--g", o.params["g"], "coupling strength");
    app.add_option("--kappa", o.params["kappa"], "polariton loss rate");
    app.add_option("--eta", o.params["eta"], "pump strength");
    app.add_option("--delta", o.params["delta"], "pump detuning");
    app.add_option("--t", o.params["t"], "evolution / measurement time");
    app.add_option("--alpha", o.params["alpha"], "coherent amplitude |alpha|");
    app.add_option("--xi-r", o.params["xi_r"], "real squeezing parameter (<= 0)");
    app.add_option("--set", o.sets, "any other parameter as NAME=VALUE (e.g. g_over_gc=0.9)");
    app.add_option("--convention", o.convention, "omega-derivative convention")
        ->check(CLI::IsMember({"tracked", "fixed"}));
    app.add_option("--range", o.ranges, "NAME:START:STOP:COUNT[:log]");
    app.add_option("--quantity", o.quantities, "quantity column (repeatable)");
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", o.out, "output path");
    app.add_flag("--no-timestamp", o.no_timestamp, "omit the generation timestamp");
    app.add_option("--threads", o.threads, "worker threads (0: all cores)");

    auto* eval = app.add_subcommand("eval", "evaluate every quantity at one parameter point");
    auto* sweep = app.add_subcommand("sweep", "evaluate quantities over a parameter grid");
    auto* figure = app.add_subcommand("figure", "regenerate figure data");
    std::string figure_name;
    figure->add_option("name", figure_name, "fig2, figs1, figs2 or figs3")
        ->required()
        ->check(CLI::IsMember({"fig2", "figs1", "figs2", "figs3"}));
    auto* validate = app.add_subcommand("validate", "run every analytic-versus-oracle check");
    std::vector<std::string> tolerances;
    bool inject = false, quick = false;
    validate->add_option("--tolerance", tolerances, "override a check tolerance, NAME=VALUE");
    validate->add_flag("--inject-fault", inject, "negative control: wrong vacuum variance");
    validate->add_flag("--quick", quick, "skip the large diagonalisations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (eval->parsed()) return run_eval(o);
        if (sweep->parsed()) return run_sweep(o);
        if (figure->parsed()) return run_figure(o, figure_name);
        if (validate->parsed()) return run_validate(tolerances, inject, quick);
    } catch (const usc::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const usc::Error& e) {
        std::cerr << "error (" << e.kind() << "): " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}
