// Sweep specification, evaluation and figure presets.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "usc/analytic_dicke.hpp"
#include "usc/analytic_rabi.hpp"
#include "usc/errors.hpp"
#include "usc/open_dynamics.hpp"
#include "usc/sweep.hpp"

using namespace usc;
using namespace usc::sweep;
using doctest::Approx;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("usc_sweep_test_" + name);
}

SweepSpec custom(Model m, std::vector<Range> ranges, std::map<std::string, double> fixed = {}) {
    SweepSpec s;
    s.model = m;
    s.panels.push_back({"", std::move(ranges), std::move(fixed)});
    return s;
}

double number(const io::Table& t, std::size_t row, const std::string& col) {
    return std::get<double>(t.rows[row][t.column(col)]);
}

}  // namespace

TEST_CASE("range parsing") {
    const auto r = Range::parse("g_over_gc:0:0.9:10");
    CHECK(r.name == "g_over_gc");
    CHECK(r.count == 10);
    CHECK_FALSE(r.log);
    const auto v = r.values();
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 0.9);
    CHECK(v[1] == Approx(0.1));

    const auto l = Range::parse("one_minus_g_over_gc:1e-4:1e-1:4:log");
    CHECK(l.log);
    const auto lv = l.values();
    CHECK(lv.front() == 1e-4);
    CHECK(lv[1] == Approx(1e-3));
    CHECK(lv.back() == 1e-1);

    CHECK_THROWS_AS(Range::parse("g:0:1"), InvalidSpec);
    CHECK_THROWS_AS(Range::parse("g:0:x:5"), InvalidSpec);
    CHECK_THROWS_AS(Range::parse("g:0:1:5:cubic"), InvalidSpec);
}

TEST_CASE("enum parsing") {
    CHECK(parse_target("fig2") == Target::Fig2);
    CHECK(parse_target("figs3") == Target::FigS3);
    CHECK(parse_model("rabi") == Model::Rabi);
    CHECK(parse_format("json") == Format::Json);
    CHECK(parse_convention("fixed") == dicke::DerivativeConvention::FixedPartner);
    CHECK_THROWS_AS(parse_target("fig9"), InvalidSpec);
    CHECK_THROWS_AS(parse_model("jaynes"), InvalidSpec);
    CHECK_THROWS_AS(figure_preset(Target::Custom), InvalidSpec);
}

TEST_CASE("spec validation") {
    CHECK_NOTHROW(validate(custom(Model::Dicke, {Range::parse("g:0:0.5:3")})));
    CHECK_THROWS_AS(validate(SweepSpec{}), InvalidSpec);
    // aliases of one parameter may not be combined
    CHECK_THROWS_AS(validate(custom(Model::Dicke, {Range::parse("g:0:0.5:3")}, {{"g_over_gc", 0.2}})), InvalidSpec);
    CHECK_THROWS_AS(validate(custom(Model::Rabi, {Range::parse("t:0:1:3"), Range::parse("omega_t:0:1:3")})), InvalidSpec);
    CHECK_THROWS_AS(validate(custom(Model::Dicke, {Range::parse("g:0:0.5:3"), Range::parse("g:0:0.5:3")})), InvalidSpec);
    // parameters of the other model
    CHECK_THROWS_AS(validate(custom(Model::Dicke, {Range::parse("omega_t:0:1:3")})), InvalidSpec);
    CHECK_THROWS_AS(validate(custom(Model::Rabi, {Range::parse("kappa:0.1:1:3")})), InvalidSpec);
    auto bad_q = custom(Model::Dicke, {Range::parse("g:0:0.5:3")});
    bad_q.quantities = {"snr_normal_mode"};
    CHECK_THROWS_AS(validate(bad_q), InvalidSpec);
    CHECK_THROWS_AS(validate(custom(Model::Dicke, {Range{"g", 0.5, 0.1, 3, false}})), InvalidSpec);
    CHECK_THROWS_AS(validate(custom(Model::Dicke, {Range{"g", 0.0, 0.1, 3, true}})), InvalidSpec);
    CHECK_THROWS_AS(validate(custom(Model::Dicke, {Range::parse("g:0:0.5:3")}, {{"kappa", NAN}})), InvalidSpec);
}

TEST_CASE("point evaluation matches the library") {
    std::string status;
    const auto v = evaluate_point(Model::Dicke, {{"g_over_gc", 0.99}, {"delta", 0.5}},
                                  {"snr_amplitude", "n_c", "omega_minus"},
                                  dicke::DerivativeConvention::TrackedResonance, status);
    CHECK(status == "ok");
    const auto p = dicke::DickeParams::resonant_at(1.0, 0.99);
    CHECK(*v[0] == open::snr_amplitude(p, {1.0, 1.0, 0.5, 1.0}));
    CHECK(*v[1] == dicke::virtual_mode_occupation(p).n_c);
    CHECK(*v[2] == dicke::normal_frequencies(p).omega_minus);

    const auto r = evaluate_point(Model::Rabi, {{"g_over_gc", 0.9}, {"omega_t", 2.0}},
                                  {"snr_normal_mode", "n_virtual"},
                                  dicke::DerivativeConvention::TrackedResonance, status);
    CHECK(status == "ok");
    const auto rp = rabi::RabiParams::from_ratio(1.0, 0.9);
    CHECK(*r[0] == rabi::strategy_normal_mode(rp, 1.0, 2.0).value);
    CHECK(*r[1] == rabi::rabi_effective(rp).n_virtual);
}

TEST_CASE("failures stay local to their grid point") {
    std::string status;
    const auto v = evaluate_point(Model::Dicke, {{"g_over_gc", 1.2}},
                                  {"coupling_ratio", "n_c", "ground_qfi"},
                                  dicke::DerivativeConvention::TrackedResonance, status);
    CHECK(status == "BeyondThreshold");
    CHECK(v[0].has_value());
    CHECK_FALSE(v[1].has_value());
    CHECK_FALSE(v[2].has_value());

    const auto nr = evaluate_point(Model::Dicke, {{"Omega", 2.0}, {"g", 0.5}}, {"xi_minus", "omega_minus"},
                                   dicke::DerivativeConvention::TrackedResonance, status);
    CHECK(status == "NotResonant");
    CHECK_FALSE(nr[0].has_value());
    CHECK(nr[1].has_value());

    auto spec = custom(Model::Dicke, {Range::parse("g_over_gc:0.5:1.5:3")});
    spec.quantities = {"n_c"};
    const auto t = evaluate(spec);
    REQUIRE(t.rows.size() == 3);
    CHECK(std::get<std::string>(t.rows[0][t.column("status")]) == "ok");
    CHECK(std::get<std::string>(t.rows[2][t.column("status")]) == "BeyondThreshold");
    CHECK(std::holds_alternative<std::monostate>(t.rows[2][t.column("n_c")]));
}

TEST_CASE("parallel evaluation is deterministic") {
    auto spec = custom(Model::Rabi, {Range::parse("g_over_gc:0:0.999:40"), Range::parse("t:0:5:20")});
    spec.threads = 1;
    const auto serial = evaluate(spec);
    spec.threads = 8;
    const auto parallel = evaluate(spec);
    REQUIRE(serial.rows.size() == 800);
    CHECK(serial.columns == parallel.columns);
    CHECK(serial.rows == parallel.rows);
}

TEST_CASE("figure preset for the driven amplitude SNR") {
    const auto spec = figure_preset(Target::Fig2);
    const auto t = evaluate(spec);
    CHECK(t.rows.size() == 41 * 19 + 41 * 31);
    bool found = false;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (std::get<std::string>(t.rows[i][0]) != "b") continue;
        CHECK(std::get<std::string>(t.rows[i][t.column("status")]) == "ok");
        if (number(t, i, "delta_over_kappa") == 0.5 && number(t, i, "one_minus_g_over_gc") == 0.01) {
            CHECK(number(t, i, "snr_amplitude") == Approx(816.08).epsilon(1e-12));
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("figure preset for the Rabi strategies stays within the oracle tolerance") {
    const auto t = evaluate(figure_preset(Target::FigS3));
    CHECK(t.rows.size() == 1600);
    for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(number(t, i, "oracle_deviation") <= 1e-6);
}

TEST_CASE("written output is reproducible") {
    auto spec = figure_preset(Target::FigS1);
    spec.timestamp = false;
    spec.out_path = scratch("a.csv").string();
    run_sweep(spec);
    const auto first = slurp(spec.out_path);
    run_sweep(spec);
    CHECK(slurp(spec.out_path) == first);

    std::istringstream in(first);
    const auto back = io::read_csv(in);
    const auto direct = evaluate(spec);
    CHECK(back.columns == direct.columns);
    CHECK(back.rows == direct.rows);

    spec.format = Format::Json;
    spec.out_path = scratch("a.json").string();
    run_sweep(spec);
    std::ifstream jin(spec.out_path);
    CHECK(io::read_json(jin).rows == direct.rows);

    spec.timestamp = true;
    spec.format = Format::Csv;
    spec.out_path = scratch("b.csv").string();
    run_sweep(spec);
    CHECK(slurp(spec.out_path).rfind("# generated ", 0) == 0);

    spec.out_path = (scratch("missing_dir") / "x.csv").string();
    CHECK_THROWS_AS(run_sweep(spec), IoError);
    spec.out_path.clear();
    CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);
}

TEST_CASE("spec echo") {
    const auto j = spec_to_json(figure_preset(Target::Fig2));
    CHECK(j["target"] == "fig2");
    CHECK(j["model"] == "dicke");
    CHECK(j["panels"].size() == 2);
}
