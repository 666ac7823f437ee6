// sweep.hpp: parameter sweeps and the figure presets built on them.
//
// A sweep is the Cartesian product of its ranges (first range slowest). Every
// grid point is resolved into model parameters, the requested quantities are
// evaluated independently, and a failure at one point leaves empty cells and
// the error kind in the `status` column instead of aborting the sweep.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "usc/analytic_dicke.hpp"
#include "usc/table_io.hpp"

namespace usc::sweep {

enum class Target { Fig2, FigS1, FigS2, FigS3, Custom };
enum class Model { Dicke, Rabi };
enum class Format { Csv, Json };

Target parse_target(const std::string& s);
Model parse_model(const std::string& s);
Format parse_format(const std::string& s);
dicke::DerivativeConvention parse_convention(const std::string& s);
std::string to_string(Target t);
std::string to_string(Model m);

struct Range {
    std::string name;
    double start{0.0};
    double stop{1.0};
    int count{2};
    bool log{false};

    // NAME:START:STOP:COUNT[:log]
    static Range parse(const std::string& text);
    std::vector<double> values() const;
};

// One block of rows; figure presets stack several panels in one table.
struct Panel {
    std::string label;
    std::vector<Range> ranges;
    std::map<std::string, double> fixed;
};

struct SweepSpec {
    Target target{Target::Custom};
    Model model{Model::Dicke};
    std::vector<Panel> panels;
    std::vector<std::string> quantities;  // empty: the model's default set
    dicke::DerivativeConvention convention{dicke::DerivativeConvention::TrackedResonance};
    std::string out_path;
    Format format{Format::Csv};
    bool timestamp{true};
    unsigned threads{0};  // 0: hardware concurrency
};

// Parameter names a range or fixed value may use for each model.
const std::vector<std::string>& parameter_names(Model m);
// Every quantity the model can evaluate, and its default selection.
const std::vector<std::string>& quantity_names(Model m);
const std::vector<std::string>& default_quantities(Model m);

// Throws InvalidSpec.
void validate(const SweepSpec& spec);

SweepSpec figure_preset(Target target);

// Quantities at a single point, in request order; nullopt where evaluation
// failed. `status` receives "ok" or the distinct error kinds joined by '|'.
std::vector<std::optional<double>> evaluate_point(Model model,
                                                  const std::map<std::string, double>& values,
                                                  const std::vector<std::string>& quantities,
                                                  dicke::DerivativeConvention convention,
                                                  std::string& status);

io::Table evaluate(const SweepSpec& spec);
nlohmann::ordered_json spec_to_json(const SweepSpec& spec);

// Evaluates and writes spec.out_path. Throws InvalidSpec or IoError.
io::Table run_sweep(const SweepSpec& spec);

}  // namespace usc::sweep
