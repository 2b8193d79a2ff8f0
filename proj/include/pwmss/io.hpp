#pragma once

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pwmss/errors.hpp"
#include "pwmss/load_circuit.hpp"
#include "pwmss/solver.hpp"
#include "pwmss/spectrum.hpp"
#include "pwmss/spwm.hpp"

namespace pwmss {

/// A fully described run: circuit, excitation (exactly one source of
/// switching instants), and output options.
struct RunConfig {
    LoadCircuit circuit;
    double amplitude = 0.0; // V_o, volts
    double frequency = 0.0; // hertz
    std::optional<SpwmSpec> spwm;
    std::optional<std::vector<double>> instants;
    std::optional<std::string> instants_file; // path, or "-" for stdin
    int grid = 2000;
    int n_max = 200;
    bool oracle = false;
    std::vector<std::pair<double, double>> sweep_pairs; // (L, C) in henries/farads
    bool has_sweep = false;
};

namespace detail {

inline double config_number(const nlohmann::json& obj, const char* key, const char* where) {
    if (!obj.contains(key))
        throw ConfigError(std::string(where) + " is missing required field '" + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(std::string(where) + "." + key + " must be a number");
    return v.get<double>();
}

inline int config_int(const nlohmann::json& obj, const char* key, const char* where, int lo,
                      int hi) {
    const double value = config_number(obj, key, where);
    if (!(value >= lo) || !(value <= hi) || value != static_cast<int>(value))
        throw ConfigError(std::string(where) + "." + key + " must be an integer in [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(value);
}

inline void reject_unknown_keys(const nlohmann::json& obj, const char* where,
                                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) { known = true; break; }
        if (!known)
            throw ConfigError(std::string("unknown field '") + item.key() + "' in " + where);
    }
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& err) {
        throw ConfigError(std::string("invalid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    detail::reject_unknown_keys(doc, "config", {"circuit", "excitation", "output", "sweep"});
    if (!doc.contains("circuit") || !doc.contains("excitation"))
        throw ConfigError("config requires 'circuit' and 'excitation' objects");

    RunConfig cfg;

    const auto& circuit = doc.at("circuit");
    if (!circuit.is_object() || !circuit.contains("kind") || !circuit.at("kind").is_string())
        throw ConfigError("circuit.kind must be 'lr', 'lrc' or 'lclr'");
    const std::string kind = circuit.at("kind").get<std::string>();
    if (kind == "lr") {
        detail::reject_unknown_keys(circuit, "circuit", {"kind", "R", "L"});
        cfg.circuit = Lr{detail::config_number(circuit, "R", "circuit"),
                         detail::config_number(circuit, "L", "circuit")};
    } else if (kind == "lrc") {
        detail::reject_unknown_keys(circuit, "circuit", {"kind", "L", "R", "C"});
        cfg.circuit = Lrc{detail::config_number(circuit, "L", "circuit"),
                          detail::config_number(circuit, "R", "circuit"),
                          detail::config_number(circuit, "C", "circuit")};
    } else if (kind == "lclr") {
        detail::reject_unknown_keys(circuit, "circuit", {"kind", "L", "C", "L1", "R"});
        cfg.circuit = Lclr{detail::config_number(circuit, "L", "circuit"),
                           detail::config_number(circuit, "C", "circuit"),
                           detail::config_number(circuit, "L1", "circuit"),
                           detail::config_number(circuit, "R", "circuit")};
    } else {
        throw ConfigError("circuit.kind must be 'lr', 'lrc' or 'lclr', got '" + kind + "'");
    }

    const auto& excitation = doc.at("excitation");
    if (!excitation.is_object()) throw ConfigError("excitation must be an object");
    detail::reject_unknown_keys(excitation, "excitation",
                                {"V_o", "f", "spwm", "instants", "instants_file"});
    cfg.amplitude = detail::config_number(excitation, "V_o", "excitation");
    cfg.frequency = detail::config_number(excitation, "f", "excitation");

    int sources = 0;
    if (excitation.contains("spwm")) {
        ++sources;
        const auto& spwm = excitation.at("spwm");
        if (!spwm.is_object()) throw ConfigError("excitation.spwm must be an object");
        detail::reject_unknown_keys(spwm, "excitation.spwm", {"N", "m"});
        SpwmSpec spec;
        spec.pulses_per_half = detail::config_int(spwm, "N", "excitation.spwm", 1, 1000000);
        spec.modulation = detail::config_number(spwm, "m", "excitation.spwm");
        spec.frequency = cfg.frequency;
        spec.amplitude = cfg.amplitude;
        cfg.spwm = spec;
    }
    if (excitation.contains("instants")) {
        ++sources;
        const auto& arr = excitation.at("instants");
        if (!arr.is_array()) throw ConfigError("excitation.instants must be an array of numbers");
        std::vector<double> instants;
        for (const auto& v : arr) {
            if (!v.is_number()) throw ConfigError("excitation.instants must hold numbers only");
            instants.push_back(v.get<double>());
        }
        cfg.instants = std::move(instants);
    }
    if (excitation.contains("instants_file")) {
        ++sources;
        const auto& v = excitation.at("instants_file");
        if (!v.is_string()) throw ConfigError("excitation.instants_file must be a string path");
        cfg.instants_file = v.get<std::string>();
    }
    if (sources != 1)
        throw ConfigError("excitation requires exactly one of spwm, instants, instants_file");

    if (doc.contains("output")) {
        const auto& output = doc.at("output");
        if (!output.is_object()) throw ConfigError("output must be an object");
        detail::reject_unknown_keys(output, "output", {"grid", "n_max", "oracle"});
        if (output.contains("grid"))
            cfg.grid = detail::config_int(output, "grid", "output", 2, 100000000);
        if (output.contains("n_max"))
            cfg.n_max = detail::config_int(output, "n_max", "output", 1, 10000000);
        if (output.contains("oracle")) {
            if (!output.at("oracle").is_boolean())
                throw ConfigError("output.oracle must be a boolean");
            cfg.oracle = output.at("oracle").get<bool>();
        }
    }

    if (doc.contains("sweep")) {
        const auto& sweep = doc.at("sweep");
        if (!sweep.is_object() || !sweep.contains("pairs") || !sweep.at("pairs").is_array())
            throw ConfigError("sweep requires a 'pairs' array of [L, C] entries");
        detail::reject_unknown_keys(sweep, "sweep", {"pairs"});
        for (const auto& pair : sweep.at("pairs")) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number())
                throw ConfigError("each sweep pair must be [L_henries, C_farads]");
            cfg.sweep_pairs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        cfg.has_sweep = true;
    }
    return cfg;
}

/// Whitespace-separated decimal instants, as printed by the spwm subcommand.
inline std::vector<double> parse_instants_text(const std::string& text) {
    std::istringstream in(text);
    std::vector<double> instants;
    double value = 0.0;
    while (in >> value) instants.push_back(value);
    if (!in.eof()) throw ConfigError("instants text contains a non-numeric token");
    return instants;
}

/// Builds the pulse train from whichever excitation source the config holds.
/// instants_file must already have been resolved into cfg.instants.
inline PwmTrain build_train(const RunConfig& cfg) {
    if (cfg.spwm) return generate(*cfg.spwm);
    if (cfg.instants)
        return make_pwm_train(cfg.amplitude, 1.0 / cfg.frequency, *cfg.instants);
    throw ConfigError("excitation instants were not resolved");
}

/// 17 significant digits: round-trips IEEE doubles exactly, so emitted CSVs
/// and instant listings are regression-diffable and re-ingestable bit for bit.
inline std::string format_g17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

inline std::string instants_listing(const PwmTrain& train) {
    std::string out;
    for (double t : train.instants()) {
        out += format_g17(t);
        out += '\n';
    }
    return out;
}

/// One row per grid point over [0, T); state columns not present for the
/// circuit kind are left empty.
inline std::string waveform_csv(const CircuitSolution& solution, const PwmTrain& train,
                                int grid) {
    if (grid < 2) throw ConfigError("waveform grid must be at least 2 points");
    const double period = train.period();
    std::string csv = "t,v_s,output,i,i_1,v_C\n";
    const PiecewiseExpSolution& output = solution.output();
    for (int g = 0; g < grid; ++g) {
        const double t = g * period / grid;
        csv += format_g17(t);
        csv += ',';
        csv += format_g17(vs_at(train, t));
        csv += ',';
        csv += format_g17(output.value(t));
        csv += ',';
        csv += format_g17(solution.i.value(t));
        csv += ',';
        if (solution.i1) csv += format_g17(solution.i1->value(t));
        csv += ',';
        if (solution.vc) csv += format_g17(solution.vc->value(t));
        csv += '\n';
    }
    return csv;
}

namespace detail {
inline std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}
} // namespace detail

/// Sweep rows with L and C in micro-units for readability; failed rows keep
/// their slot with empty metrics and the failure text in status.
inline std::string sweep_csv(const SweepResult& result) {
    std::string csv = "L_uH,C_uF,THD_percent,peak_ripple,status\n";
    for (const SweepRow& row : result.rows) {
        csv += format_g17(row.inductance * 1e6);
        csv += ',';
        csv += format_g17(row.capacitance * 1e6);
        csv += ',';
        if (row.ok) csv += format_g17(row.thd_percent);
        csv += ',';
        if (row.ok) csv += format_g17(row.peak_ripple);
        csv += ',';
        csv += row.ok ? "ok" : detail::csv_field(row.status);
        csv += '\n';
    }
    return csv;
}

} // namespace pwmss
