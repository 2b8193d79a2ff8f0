// Command-line front end: steady-state waveforms, SPWM instant generation,
// (L, C) THD sweeps, and closed-form-vs-integrator verification.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pwmss/io.hpp"
#include "pwmss/oracle.hpp"
#include "pwmss/roots.hpp"
#include "pwmss/solver.hpp"
#include "pwmss/spectrum.hpp"

namespace {

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pwmss::ConfigError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw pwmss::ConfigError("cannot write '" + path + "'");
    out << content;
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::optional<int> grid;
    std::optional<int> n_max;
    std::optional<double> modulation;
    bool oracle = false;
};

pwmss::RunConfig load_run_config(const CommonFlags& flags) {
    pwmss::RunConfig cfg = pwmss::parse_config(read_file(flags.config_path));
    if (flags.grid) cfg.grid = *flags.grid;
    if (flags.n_max) cfg.n_max = *flags.n_max;
    if (flags.oracle) cfg.oracle = true;
    if (flags.modulation) {
        if (!cfg.spwm)
            throw pwmss::ConfigError("--m overrides the modulation index and needs an "
                                     "spwm excitation in the config");
        cfg.spwm->modulation = *flags.modulation;
    }
    if (cfg.grid < 2) throw pwmss::ConfigError("grid must be at least 2");
    if (cfg.n_max < 1) throw pwmss::ConfigError("n_max must be positive");
    if (cfg.instants_file) {
        cfg.instants = pwmss::parse_instants_text(read_file(*cfg.instants_file));
        cfg.instants_file.reset();
    }
    return cfg;
}

const char* kind_name(pwmss::LoadKind kind) {
    switch (kind) {
    case pwmss::LoadKind::lr: return "lr";
    case pwmss::LoadKind::lrc: return "lrc";
    case pwmss::LoadKind::lclr: return "lclr";
    }
    return "?";
}

std::string describe_circuit(const pwmss::LoadCircuit& load) {
    using pwmss::format_g17;
    std::string line = kind_name(pwmss::kind_of(load));
    if (const auto* lr = std::get_if<pwmss::Lr>(&load)) {
        line += " R=" + format_g17(lr->R) + " L=" + format_g17(lr->L);
    } else if (const auto* lrc = std::get_if<pwmss::Lrc>(&load)) {
        line += " L=" + format_g17(lrc->L) + " R=" + format_g17(lrc->R) +
                " C=" + format_g17(lrc->C);
    } else if (const auto* lclr = std::get_if<pwmss::Lclr>(&load)) {
        line += " L=" + format_g17(lclr->L) + " C=" + format_g17(lclr->C) +
                " L1=" + format_g17(lclr->L1) + " R=" + format_g17(lclr->R);
    }
    return line;
}

// Solve, analyze, optionally cross-check against the RK4 integrator, then
// emit the CSV in one write and the summary on stdout.
int run_solve(const CommonFlags& flags, bool force_oracle) {
    using namespace pwmss;
    RunConfig cfg = load_run_config(flags);
    validate(cfg.circuit);
    const PwmTrain train = build_train(cfg);
    const RootSet roots = characteristic_roots(cfg.circuit);
    const CircuitSolution solution = solve_all(cfg.circuit, train);
    const PiecewiseExpSolution& output = solution.output();

    const HarmonicSpectrum spec = spectrum(output, cfg.n_max);
    std::optional<double> thd_percent;
    try {
        thd_percent = thd(spec);
    } catch (const ZeroFundamental&) {
        // zero excitation: leave THD unreported
    }
    double ripple = peak_ripple(output, spec);
    if (solution.kind == LoadKind::lrc) {
        // published output variable is v_C; report ripple of i_R = v_C / R
        ripple /= std::get<Lrc>(cfg.circuit).R;
    }

    std::optional<double> oracle_deviation;
    if (cfg.oracle || force_oracle) {
        const Trajectory traj = integrate(cfg.circuit, train);
        oracle_deviation = compare(output, traj);
    }

    if (!flags.out_path.empty())
        write_file(flags.out_path, waveform_csv(solution, train, cfg.grid));

    std::cout << "circuit: " << describe_circuit(cfg.circuit) << '\n';
    std::cout << "period_s: " << format_g17(train.period()) << '\n';
    std::cout << "pulses_per_half_period: " << train.pulse_count() << '\n';
    std::cout << "output: " << to_string(output.output_kind()) << '\n';
    std::cout << "roots:";
    for (const Complex& s : roots.roots())
        std::cout << " (" << format_g17(s.real()) << "," << format_g17(s.imag()) << ")";
    std::cout << '\n';
    if (roots.ill_conditioned())
        std::cout << "warning: root separation " << format_g17(roots.min_separation())
                  << " is close to degenerate; coefficients may lose precision\n";
    std::cout << "thd_percent: " << (thd_percent ? format_g17(*thd_percent) : "n/a") << '\n';
    std::cout << "peak_ripple_A: " << format_g17(ripple) << '\n';
    if (oracle_deviation)
        std::cout << "oracle_rel_deviation: " << format_g17(*oracle_deviation) << '\n';
    if (!flags.out_path.empty())
        std::cout << "csv: " << flags.out_path << '\n';
    return 0;
}

int run_spwm(int pulses, double modulation, double frequency, double amplitude) {
    pwmss::SpwmSpec spec;
    spec.pulses_per_half = pulses;
    spec.modulation = modulation;
    spec.frequency = frequency;
    spec.amplitude = amplitude;
    std::cout << pwmss::instants_listing(pwmss::generate(spec));
    return 0;
}

int run_sweep(const CommonFlags& flags) {
    using namespace pwmss;
    RunConfig cfg = load_run_config(flags);
    if (!cfg.has_sweep)
        throw ConfigError("sweep needs a 'sweep.pairs' array in the config");
    if (kind_of(cfg.circuit) != LoadKind::lclr)
        throw ConfigError("sweep is defined for the lclr circuit");
    if (!cfg.spwm)
        throw ConfigError("sweep needs an spwm excitation");
    const SweepResult result = sweep_lclr(std::get<Lclr>(cfg.circuit), *cfg.spwm,
                                          cfg.sweep_pairs, cfg.n_max);
    write_file(flags.out_path, sweep_csv(result));
    std::size_t succeeded = 0;
    for (const SweepRow& row : result.rows)
        if (row.ok) ++succeeded;
    std::cout << "rows: " << result.rows.size() << " ok: " << succeeded << '\n';
    std::cout << "csv: " << flags.out_path << '\n';
    return 0;
}

template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const pwmss::ConfigError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const pwmss::InvalidParameter& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const pwmss::NonMonotonicInstants& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const pwmss::OddInstantCount& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const pwmss::InstantOutOfRange& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const pwmss::RepeatedRoots& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    } catch (const pwmss::NotSettled& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 4;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form periodic steady state of PWM-driven LR / L-RC / L-C-LR loads"};
    app.require_subcommand(1);

    CommonFlags solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "solve one configuration, write a waveform CSV");
    solve->add_option("--config", solve_flags.config_path, "JSON run configuration")->required();
    solve->add_option("--out", solve_flags.out_path, "waveform CSV path")->required();
    solve->add_option("--grid", solve_flags.grid, "samples per period in the CSV");
    solve->add_option("--nmax", solve_flags.n_max, "highest harmonic for THD");
    solve->add_option("--m", solve_flags.modulation, "override SPWM modulation index");
    solve->add_flag("--oracle", solve_flags.oracle, "also report RK4 cross-check deviation");

    int spwm_pulses = 0;
    double spwm_modulation = 0.0, spwm_frequency = 0.0, spwm_amplitude = 100.0;
    CLI::App* spwm = app.add_subcommand("spwm", "print sinusoidal-PWM switching instants");
    spwm->add_option("--N", spwm_pulses, "pulses per half period")->required();
    spwm->add_option("--m", spwm_modulation, "modulation index in [0, 1]")->required();
    spwm->add_option("--f", spwm_frequency, "fundamental frequency, Hz")->required();
    spwm->add_option("--V", spwm_amplitude, "pulse amplitude, volts");

    CommonFlags sweep_flags;
    CLI::App* sweep = app.add_subcommand("sweep", "THD over (L, C) pairs, write a sweep CSV");
    sweep->add_option("--config", sweep_flags.config_path, "JSON run configuration")->required();
    sweep->add_option("--out", sweep_flags.out_path, "sweep CSV path")->required();
    sweep->add_option("--nmax", sweep_flags.n_max, "highest harmonic for THD");
    sweep->add_option("--m", sweep_flags.modulation, "override SPWM modulation index");

    CommonFlags verify_flags;
    CLI::App* verify = app.add_subcommand("verify", "solve plus RK4 cross-check report");
    verify->add_option("--config", verify_flags.config_path, "JSON run configuration")->required();
    verify->add_option("--out", verify_flags.out_path, "optional waveform CSV path");
    verify->add_option("--grid", verify_flags.grid, "samples per period in the CSV");
    verify->add_option("--nmax", verify_flags.n_max, "highest harmonic for THD");
    verify->add_option("--m", verify_flags.modulation, "override SPWM modulation index");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return guarded([&] { return run_solve(solve_flags, false); });
    if (spwm->parsed())
        return guarded(
            [&] { return run_spwm(spwm_pulses, spwm_modulation, spwm_frequency, spwm_amplitude); });
    if (sweep->parsed()) return guarded([&] { return run_sweep(sweep_flags); });
    if (verify->parsed())
        return guarded([&] { return run_solve(verify_flags, true); });
    return 1;
}
