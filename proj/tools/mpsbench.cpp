// mpsbench command-line front end.

#include "mpsbench/mpsbench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mpsbench;
using nlohmann::json;

namespace {

struct Outputs {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Outputs(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path, std::ios::binary);
        if (!file) fail(ErrorCode::IoFailure, "cannot write '" + path + "'");
        stream = &file;
    }
    std::ostream& operator*() { return *stream; }
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoFailure, "cannot write '" + path.string() + "'");
    out << text;
}

json solver_json(const SolverOptions& o) {
    return {{"step_divisor", o.step_divisor},
            {"warmup_records", o.warmup_records},
            {"periodicity_tol", o.periodicity_tol},
            {"scheme", o.scheme == IntegrationScheme::Exponential ? "exponential" : "rk4"}};
}

// "620 Hz,250 Oe[,phase_rad]"
Tone parse_tone_flag(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') parts.push_back(cur), cur.clear();
        else cur += c;
    }
    parts.push_back(cur);
    if (parts.size() < 2 || parts.size() > 3)
        fail(ErrorCode::ParseError, "tone '" + text + "' must look like \"620 Hz,250 Oe[,phase]\"");
    Tone t{parse_quantity(parts[0], Dimension::Frequency), parse_quantity(parts[1], Dimension::Field), 0.0};
    if (parts.size() == 3) t.phase = parse_quantity(parts[2], Dimension::Dimensionless);
    return t;
}

void write_plots(const SweepResult& result, const std::string& dir) {
    fs::create_directories(dir);
    const auto plots = render_plots(result);
    for (const auto& doc : plots.documents) write_text(fs::path(dir) / (doc.name + ".svg"), doc.content);
    for (const auto& w : plots.warnings) std::cerr << "warning: " << w << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual magnetic particle spectroscopy workbench"};
    app.require_subcommand(1);
    std::string catalog_path;
    app.add_option("--catalog", catalog_path, "Particle catalog JSON (default: $MPSBENCH_CATALOG or bundled)");

    auto catalog = [&] { return catalog_path.empty() ? load_default_catalog() : load_catalog(catalog_path); };

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate one drive and write the pickup-voltage spectrum CSV");
    std::string sim_config, sim_particle = "SHS30", sim_state = "unbound", sim_out, sim_mag_out;
    std::vector<std::string> sim_tones;
    int sim_divisor = 0;
    sim->add_option("config", sim_config, "Simulate config JSON");
    sim->add_option("--particle", sim_particle, "Particle name");
    sim->add_option("--state", sim_state, "unbound or bound");
    sim->add_option("--tone", sim_tones, "Tone as \"620 Hz,250 Oe\" (repeat for two tones)");
    sim->add_option("--step-divisor", sim_divisor, "Substeps per period of the fastest tone");
    sim->add_option("-o,--output", sim_out, "Spectrum CSV path (default stdout)");
    sim->add_option("--magnetization", sim_mag_out, "Also write m(t) CSV here");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a protocol or sweep config and write the result CSV");
    std::string sweep_target, sweep_out, sweep_plots, sweep_report;
    unsigned sweep_threads = 0;
    int sweep_divisor = 0;
    sweep->add_option("target", sweep_target, "SF-FREQ, DF-FREQ, SF-AMP, DF-AMP or a sweep config JSON")->required();
    sweep->add_option("-o,--output", sweep_out, "Result CSV path (default stdout)");
    sweep->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
    sweep->add_option("--step-divisor", sweep_divisor, "Substeps per period of the fastest tone");
    sweep->add_option("--plots", sweep_plots, "Directory for a3.svg, a5.svg, delta.svg");
    sweep->add_option("--report", sweep_report, "Trend report JSON path");

    // acmh
    auto* acmh = app.add_subcommand("acmh", "Reconstruct bound/unbound AC M-H loops and their metrics");
    std::string acmh_particle = "SHS30", acmh_freq = "130 Hz", acmh_amp = "250 Oe", acmh_prefix;
    acmh->add_option("--particle", acmh_particle, "Particle name");
    acmh->add_option("--frequency", acmh_freq, "Drive frequency");
    acmh->add_option("--amplitude", acmh_amp, "Drive amplitude");
    acmh->add_option("--loops", acmh_prefix, "Write <prefix>_unbound.csv and <prefix>_bound.csv");

    // circuit
    auto* circ = app.add_subcommand("circuit", "Drive-coil current sweep and resonance summary");
    std::string c_coil = "primary", c_r, c_l, c_cp, c_cr, c_v = "12 V", c_fmin, c_fmax, c_out;
    std::size_t c_points = 400;
    bool c_ideal = false, c_winding = false;
    circ->add_option("--coil", c_coil, "primary or secondary preset");
    circ->add_option("--resistance", c_r, "Override coil resistance");
    circ->add_option("--inductance", c_l, "Override coil inductance");
    circ->add_option("--parasitic", c_cp, "Override parasitic capacitance");
    circ->add_flag("--ideal", c_ideal, "Drop the parasitic capacitance");
    circ->add_flag("--winding", c_winding, "Report the R-L branch current instead of the source current");
    circ->add_option("--capacitor", c_cr, "Series resonant capacitor");
    circ->add_option("--voltage", c_v, "Source amplitude");
    circ->add_option("--f-min", c_fmin, "Sweep start (default seed/10 or 100 Hz)");
    circ->add_option("--f-max", c_fmax, "Sweep end (default seed*10 or 100 kHz)");
    circ->add_option("--points", c_points, "Log-spaced sweep points");
    circ->add_option("-o,--output", c_out, "Current CSV path (default: no CSV)");

    // report
    auto* rep = app.add_subcommand("report", "Trend report (and optional plots) from a result CSV");
    std::string rep_in, rep_out, rep_plots;
    rep->add_option("result", rep_in, "Result CSV from `sweep`")->required();
    rep->add_option("-o,--output", rep_out, "Report JSON path (default stdout)");
    rep->add_option("--plots", rep_plots, "Directory for SVG plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*sim) {
            SimulateConfig cfg;
            if (!sim_config.empty()) {
                cfg = parse_simulate_config(load_json(sim_config));
            } else {
                if (sim_tones.empty()) fail(ErrorCode::InvalidArgument, "give a config file or at least one --tone");
                cfg.particle = sim_particle;
                cfg.state = parse_binding(sim_state);
                std::vector<Tone> tones;
                for (const auto& t : sim_tones) tones.push_back(parse_tone_flag(t));
                cfg.excitation = make_excitation(tones);
                cfg.excitation.validate();
            }
            if (sim_divisor > 0) cfg.solver.step_divisor = sim_divisor;
            const auto cat = catalog();
            const auto field = build_waveform(cfg.excitation);
            const auto mag = simulate_magnetization(cat.particle(cfg.particle), cat.environment, cfg.state, field, cfg.solver);
            const auto spec = spectrum(induced_voltage(mag, cfg.pickup));
            Outputs out(sim_out);
            write_spectrum_csv(*out, spec);
            if (!sim_mag_out.empty()) {
                std::ofstream m(sim_mag_out, std::ios::binary);
                if (!m) fail(ErrorCode::IoFailure, "cannot write '" + sim_mag_out + "'");
                m << "t_s,h_oe,m\n";
                const auto offset = field.samples.size() - mag.samples.size();
                for (std::size_t n = 0; n < mag.samples.size(); ++n)
                    m << format_scientific(static_cast<double>(n) / mag.sample_rate) << ','
                      << format_scientific(si_to_oersted(field.samples[offset + n])) << ','
                      << format_scientific(mag.samples[n]) << '\n';
            }
        } else if (*sweep) {
            SweepPlan plan;
            SolverOptions opts;
            const auto& names = protocol_names();
            if (std::find(names.begin(), names.end(), sweep_target) != names.end()) {
                plan = protocol_catalog(sweep_target);
            } else if (fs::exists(sweep_target)) {
                auto cfg = parse_sweep_config(load_json(sweep_target));
                plan = std::move(cfg.plan);
                opts = cfg.solver;
            } else {
                fail(ErrorCode::UnknownProtocol, "'" + sweep_target + "' is neither a protocol name nor a config file");
            }
            if (sweep_divisor > 0) opts.step_divisor = sweep_divisor;
            const auto cat = catalog();
            const auto result = run_sweep(plan, cat, opts, sweep_threads);
            {
                Outputs out(sweep_out);
                write_sweep_csv(*out, result);
            }
            if (!sweep_out.empty() && sweep_out != "-") {
                const json meta{{"plan", result.plan_name},
                                {"catalog_version", result.catalog_version},
                                {"solver", solver_json(result.solver)},
                                {"grid_points", plan.grid.size()},
                                {"particles", plan.particles}};
                write_text(sweep_out + ".meta.json", meta.dump(2) + "\n");
            }
            if (!sweep_plots.empty()) write_plots(result, sweep_plots);
            if (!sweep_report.empty()) write_text(sweep_report, to_json(trend_report(result, &cat)).dump(2) + "\n");
        } else if (*acmh) {
            const auto cat = catalog();
            const auto& model = cat.particle(acmh_particle);
            const auto cfg = make_excitation(
                {Tone{parse_quantity(acmh_freq, Dimension::Frequency), parse_quantity(acmh_amp, Dimension::Field), 0.0}});
            const auto field = build_waveform(cfg);
            const SolverOptions opts;
            const PickupSpec pickup;
            const auto v_u = induced_voltage(
                simulate_magnetization(model, cat.environment, BindingState::Unbound, field, opts), pickup);
            const auto v_b = induced_voltage(
                simulate_magnetization(model, cat.environment, BindingState::Bound, field, opts), pickup);
            const auto h = tail_records(field, 1);
            const auto last_u = tail_records(v_u, 1);
            const auto last_b = tail_records(v_b, 1);
            const auto [loop_u, loop_b] = reconstruct_ac_mh_pair(h, last_u, last_b);
            if (!acmh_prefix.empty()) {
                std::ofstream fu(acmh_prefix + "_unbound.csv", std::ios::binary), fb(acmh_prefix + "_bound.csv", std::ios::binary);
                if (!fu || !fb) fail(ErrorCode::IoFailure, "cannot write loop CSVs with prefix '" + acmh_prefix + "'");
                write_loop_csv(fu, loop_u);
                write_loop_csv(fb, loop_b);
            }
            const json out{{"particle", acmh_particle},
                           {"frequency_hz", cfg.low_tone().frequency},
                           {"amplitude_oe", si_to_oersted(cfg.low_tone().amplitude)},
                           {"unbound", to_json(loop_metrics(loop_u))},
                           {"bound", to_json(loop_metrics(loop_b))}};
            std::cout << out.dump(2) << '\n';
        } else if (*circ) {
            CoilSpec coil = coil_by_name(c_coil);
            if (!c_r.empty()) coil.resistance = parse_quantity(c_r, Dimension::Resistance);
            if (!c_l.empty()) coil.inductance = parse_quantity(c_l, Dimension::Inductance);
            if (!c_cp.empty()) coil.parasitic_capacitance = parse_quantity(c_cp, Dimension::Capacitance);
            if (c_ideal) coil = coil.ideal();
            coil.validate();
            DriveSpec drive{parse_quantity(c_v, Dimension::Voltage), std::nullopt};
            if (!c_cr.empty()) drive.resonant_capacitor = parse_quantity(c_cr, Dimension::Capacitance);
            drive.validate();
            const auto probe = c_winding ? CurrentProbe::Winding : CurrentProbe::Terminal;

            json summary{{"coil",
                          {{"name", coil.name},
                           {"resistance_ohm", coil.resistance},
                           {"inductance_h", coil.inductance},
                           {"parasitic_capacitance_f", coil.parasitic_capacitance}}},
                         {"source_voltage_v", drive.source_voltage},
                         {"current_probe", c_winding ? "winding" : "terminal"}};
            double f_lo = 100.0, f_hi = 100e3;
            if (drive.resonant_capacitor) {
                const auto res = resonant_frequency(coil, drive, probe);
                summary["resonant_capacitor_f"] = *drive.resonant_capacitor;
                summary["resonance"] = {{"frequency_hz", res.frequency},
                                        {"analytic_seed_hz", res.analytic_seed},
                                        {"peak_current_a", res.peak_current},
                                        {"dc_limit_current_a", drive.source_voltage / coil.resistance}};
                f_lo = res.analytic_seed / 10.0;
                f_hi = res.analytic_seed * 10.0;
            }
            if (!c_fmin.empty()) f_lo = parse_quantity(c_fmin, Dimension::Frequency);
            if (!c_fmax.empty()) f_hi = parse_quantity(c_fmax, Dimension::Frequency);
            if (!c_out.empty()) {
                const auto grid = log_grid(f_lo, f_hi, c_points);
                std::ofstream out(c_out, std::ios::binary);
                if (!out) fail(ErrorCode::IoFailure, "cannot write '" + c_out + "'");
                out << "f_hz,i_amp\n";
                for (const auto& p : current_magnitude_sweep(coil, drive, grid, probe))
                    out << format_scientific(p.frequency) << ',' << format_scientific(p.current) << '\n';
            }
            std::cout << summary.dump(2) << '\n';
        } else if (*rep) {
            std::ifstream in(rep_in);
            if (!in) fail(ErrorCode::IoFailure, "cannot open '" + rep_in + "'");
            const auto result = read_sweep_csv(in, fs::path(rep_in).stem().string());
            std::optional<Catalog> cat;
            try {
                cat = catalog();
            } catch (const Error& e) {
                std::cerr << "warning: no catalog, per-micromole amplitudes omitted (" << e.what() << ")\n";
            }
            const auto report = trend_report(result, cat ? &*cat : nullptr);
            Outputs out(rep_out);
            *out << to_json(report).dump(2) << '\n';
            if (!rep_plots.empty()) write_plots(result, rep_plots);
        }
    } catch (const Error& e) {
        std::cerr << json{{"error", {{"code", to_string(e.code())}, {"message", e.detail()}}}}.dump() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}.dump() << '\n';
        return 1;
    }
    return 0;
}
