#include <doctest.h>

#include <cstdlib>
#include <random>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "pwmss/io.hpp"

using namespace pwmss;
namespace ts = testing_support;

namespace {

const char* kLclrConfig = R"({
  "circuit": {"kind": "lclr", "R": 1.0, "L": 100e-6, "C": 50e-6, "L1": 300e-6},
  "excitation": {"V_o": 100.0, "f": 60.0, "spwm": {"N": 11, "m": 0.9}},
  "output": {"grid": 64, "n_max": 128, "oracle": true}
})";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

} // namespace

TEST_CASE("config parsing extracts every field") {
    const RunConfig cfg = parse_config(kLclrConfig);
    REQUIRE(std::holds_alternative<Lclr>(cfg.circuit));
    const Lclr& load = std::get<Lclr>(cfg.circuit);
    CHECK(load.R == 1.0);
    CHECK(load.L == 100e-6);
    CHECK(load.C == 50e-6);
    CHECK(load.L1 == 300e-6);
    CHECK(cfg.amplitude == 100.0);
    CHECK(cfg.frequency == 60.0);
    REQUIRE(cfg.spwm);
    CHECK(cfg.spwm->pulses_per_half == 11);
    CHECK(cfg.spwm->modulation == 0.9);
    CHECK(cfg.grid == 64);
    CHECK(cfg.n_max == 128);
    CHECK(cfg.oracle);
    CHECK_FALSE(cfg.has_sweep);
}

TEST_CASE("config parsing rejects malformed documents") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"circuit": {"kind": "lr", "R": 1, "L": 1e-3}})"),
                    ConfigError); // no excitation
    CHECK_THROWS_AS(parse_config(R"({
        "circuit": {"kind": "xyz", "R": 1},
        "excitation": {"V_o": 1, "f": 60, "spwm": {"N": 1, "m": 0.5}}})"),
                    ConfigError); // unknown kind
    CHECK_THROWS_AS(parse_config(R"({
        "circuit": {"kind": "lr", "R": 1, "L": 1e-3, "bogus": 2},
        "excitation": {"V_o": 1, "f": 60, "spwm": {"N": 1, "m": 0.5}}})"),
                    ConfigError); // unknown field
    CHECK_THROWS_AS(parse_config(R"({
        "circuit": {"kind": "lr", "R": 1, "L": 1e-3},
        "excitation": {"V_o": 1, "f": 60}})"),
                    ConfigError); // no instants source
    CHECK_THROWS_AS(parse_config(R"({
        "circuit": {"kind": "lr", "R": 1, "L": 1e-3},
        "excitation": {"V_o": 1, "f": 60, "spwm": {"N": 1, "m": 0.5},
                       "instants": [1e-3, 2e-3]}})"),
                    ConfigError); // two instants sources
    CHECK_THROWS_AS(parse_config(R"({
        "circuit": {"kind": "lr", "R": 1, "L": 1e-3},
        "excitation": {"V_o": 1, "f": 60, "spwm": {"N": 1, "m": 0.5}},
        "output": {"grid": 1}})"),
                    ConfigError); // grid too small
}

TEST_CASE("explicit instants build the same train as the spwm source") {
    const PwmTrain generated = ts::bench_train();
    RunConfig cfg;
    cfg.circuit = Lclr{100e-6, 50e-6, 300e-6, 1.0};
    cfg.amplitude = 100.0;
    cfg.frequency = 60.0;
    cfg.instants = generated.instants();
    const PwmTrain rebuilt = build_train(cfg);
    REQUIRE(rebuilt.instants().size() == generated.instants().size());
    for (std::size_t k = 0; k < generated.instants().size(); ++k)
        CHECK(rebuilt.instants()[k] == generated.instants()[k]);
}

TEST_CASE("g17 formatting round-trips doubles exactly") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-300, 300);
    for (int k = 0; k < 5000; ++k) {
        const double x = std::ldexp(mantissa(rng), exponent(rng));
        CHECK(std::strtod(format_g17(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("instant listings re-ingest bit-identically") {
    const PwmTrain train = ts::bench_train();
    const std::vector<double> parsed = parse_instants_text(instants_listing(train));
    REQUIRE(parsed.size() == train.instants().size());
    for (std::size_t k = 0; k < parsed.size(); ++k)
        CHECK(parsed[k] == train.instants()[k]);
    CHECK_THROWS_AS(parse_instants_text("1e-3 banana"), ConfigError);
    CHECK(parse_instants_text("").empty());
}

TEST_CASE("waveform CSV carries the output column bit-identically") {
    const PwmTrain train = ts::bench_train();
    const CircuitSolution solution = solve_all(LoadCircuit(ts::bench_lclr()), train);
    const int grid = 48;
    const std::string csv = waveform_csv(solution, train, grid);

    std::istringstream lines(csv);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "t,v_s,output,i,i_1,v_C");
    int rows = 0;
    while (std::getline(lines, line)) {
        const auto fields = split_csv_line(line);
        REQUIRE(fields.size() == 6);
        const double t = rows * train.period() / grid;
        CHECK(fields[0] == format_g17(t));
        CHECK(fields[1] == format_g17(vs_at(train, t)));
        CHECK(fields[2] == format_g17(solution.output().value(t)));
        CHECK(fields[3] == format_g17(solution.i.value(t)));
        CHECK(fields[4] == format_g17(solution.i1->value(t)));
        CHECK(fields[5] == format_g17(solution.vc->value(t)));
        ++rows;
    }
    CHECK(rows == grid);

    // state columns absent for lower-order loads stay empty
    const CircuitSolution lr_solution = solve_all(LoadCircuit(ts::bench_lr()), train);
    const std::string lr_csv = waveform_csv(lr_solution, train, 4);
    std::istringstream lr_lines(lr_csv);
    std::getline(lr_lines, line); // header
    std::getline(lr_lines, line);
    const auto lr_fields = split_csv_line(line);
    REQUIRE(lr_fields.size() == 6);
    CHECK(lr_fields[4].empty());
    CHECK(lr_fields[5].empty());
    CHECK(lr_fields[2] == lr_fields[3]); // output is the current itself
}

TEST_CASE("sweep CSV layout") {
    SweepResult empty;
    CHECK(sweep_csv(empty) == "L_uH,C_uF,THD_percent,peak_ripple,status\n");

    SweepResult mixed;
    SweepRow good;
    good.inductance = 50e-6;
    good.capacitance = 5e-6;
    good.thd_percent = 1.5;
    good.peak_ripple = 2.0;
    good.ok = true;
    good.status = "ok";
    SweepRow bad;
    bad.inductance = 9.0;
    bad.capacitance = 2.0 / 9.0;
    bad.ok = false;
    bad.status = "characteristic roots not distinct";
    mixed.rows = {good, bad};
    const std::string csv = sweep_csv(mixed);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    auto fields = split_csv_line(line);
    CHECK(fields[0] == "50");
    CHECK(fields[1] == "5");
    CHECK(fields[2] == format_g17(1.5));
    CHECK(fields[4] == "ok");
    std::getline(lines, line);
    fields = split_csv_line(line);
    CHECK(fields[2].empty());
    CHECK(fields[3].empty());
    CHECK(fields[4] == "characteristic roots not distinct");
}

TEST_CASE("library output is deterministic across calls") {
    const PwmTrain train = ts::bench_train();
    const CircuitSolution first = solve_all(LoadCircuit(ts::bench_lclr()), train);
    const CircuitSolution second = solve_all(LoadCircuit(ts::bench_lclr()), ts::bench_train());
    CHECK(waveform_csv(first, train, 256) == waveform_csv(second, train, 256));
}
