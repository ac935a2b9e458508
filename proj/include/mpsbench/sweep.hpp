#pragma once

// Protocol catalog and sweep execution: every (particle, grid point) pair is
// simulated in both binding states and reduced to harmonic amplitudes and
// percent drops. Grid points are independent and may run on worker threads;
// rows are always assembled in (particle, grid index) order.

#include "mpsbench/analysis.hpp"
#include "mpsbench/catalog.hpp"
#include "mpsbench/dynamics.hpp"
#include "mpsbench/error.hpp"
#include "mpsbench/excitation.hpp"
#include "mpsbench/readout.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace mpsbench {

inline constexpr const char* kDefaultParticles[] = {"SHS30", "SuperMag50"};

struct SweepPlan {
    std::string name;
    std::vector<std::string> particles{kDefaultParticles[0], kDefaultParticles[1]};
    HarmonicMode mode = HarmonicMode::SingleFrequency;
    std::vector<ExcitationConfig> grid;
    std::vector<int> harmonics{3, 5};
    SidebandCombination combine = SidebandCombination::Mean;
    PickupSpec pickup;

    void validate() const {
        require(!grid.empty(), "sweep plan '" + name + "' has an empty grid");
        require(!particles.empty(), "sweep plan '" + name + "' names no particles");
        require(!harmonics.empty(), "sweep plan '" + name + "' requests no harmonics");
        for (int k : harmonics) HarmonicIndex{mode, k}.validate();
        for (const auto& point : grid) {
            point.validate();
            if (mode == HarmonicMode::DualFrequency) require(point.is_dual(), "dual-frequency plan needs two tones");
        }
        pickup.validate();
    }
};

// Axis values of a protocol; empty vectors mean "tone absent" for the high tone.
struct ProtocolGrid {
    std::vector<double> f_low_hz;
    std::vector<double> a_low_oe;
    std::vector<double> f_high_hz;
    std::vector<double> a_high_oe;
};

inline const std::vector<std::string>& protocol_names() {
    static const std::vector<std::string> names{"SF-FREQ", "DF-FREQ", "SF-AMP", "DF-AMP"};
    return names;
}

inline ProtocolGrid default_protocol_grid(const std::string& name) {
    if (name == "SF-FREQ") return {{50, 130, 285, 620, 1380}, {250}, {}, {}};
    if (name == "DF-FREQ")
        return {{50}, {250}, {1000, 3000, 5000, 8000, 11000, 14000, 18000, 22000, 27000}, {25}};
    if (name == "SF-AMP") return {{620}, {31.25, 62.5, 125, 250}, {}, {}};
    if (name == "DF-AMP") return {{50}, {31.25, 62.5, 125, 250}, {5000}, {2.78, 8.33, 16.67, 25}};
    fail(ErrorCode::UnknownProtocol, "unknown protocol '" + name + "' (expected SF-FREQ, DF-FREQ, SF-AMP or DF-AMP)");
}

inline ExcitationConfig make_excitation(std::vector<Tone> tones, double preferred_rate = kDefaultSampleRate,
                                        int n_records = 4) {
    ExcitationConfig cfg;
    cfg.tones = std::move(tones);
    cfg.sample_rate = admissible_sample_rate(cfg.tones, preferred_rate);
    cfg.n_records = n_records;
    return cfg;
}

// Grid order: f_L, A_L, f_H, A_H with the last axis varying fastest.
inline SweepPlan build_plan(const std::string& name, const ProtocolGrid& axes) {
    require(!axes.f_low_hz.empty() && !axes.a_low_oe.empty(), "protocol grid needs f_L and A_L values");
    const bool dual = !axes.f_high_hz.empty();
    require(dual == !axes.a_high_oe.empty(), "f_H and A_H must both be given or both be absent");
    SweepPlan plan;
    plan.name = name;
    plan.mode = dual ? HarmonicMode::DualFrequency : HarmonicMode::SingleFrequency;
    for (double fl : axes.f_low_hz)
        for (double al : axes.a_low_oe) {
            if (!dual) {
                plan.grid.push_back(make_excitation({Tone::oersted(fl, al)}));
                continue;
            }
            for (double fh : axes.f_high_hz)
                for (double ah : axes.a_high_oe)
                    plan.grid.push_back(make_excitation({Tone::oersted(fl, al), Tone::oersted(fh, ah)}));
        }
    plan.validate();
    return plan;
}

inline SweepPlan protocol_catalog(const std::string& name) { return build_plan(name, default_protocol_grid(name)); }

struct SweepRow {
    std::string particle;
    std::size_t grid_index = 0;
    ExcitationConfig excitation;
    std::vector<double> amplitude_unbound; // aligned with SweepResult::harmonics
    std::vector<double> amplitude_bound;
    std::vector<double> delta_percent;     // NaN where undefined
    std::string flag;                      // empty, or the error code that made a delta undefined
};

struct SweepResult {
    std::string plan_name;
    std::string catalog_version;
    SolverOptions solver;
    HarmonicMode mode = HarmonicMode::SingleFrequency;
    std::vector<int> harmonics{3, 5};
    std::vector<SweepRow> rows;

    std::optional<std::size_t> harmonic_slot(int order) const {
        const auto it = std::find(harmonics.begin(), harmonics.end(), order);
        if (it == harmonics.end()) return std::nullopt;
        return static_cast<std::size_t>(it - harmonics.begin());
    }
};

// Harmonic amplitudes of the pickup voltage for one particle/state/drive.
inline std::vector<double> harmonic_amplitudes(const ParticleModel& model, const Environment& env, BindingState state,
                                               const ExcitationConfig& excitation, const SweepPlan& plan,
                                               const SolverOptions& opts) {
    const auto field = build_waveform(excitation);
    const auto mag = simulate_magnetization(model, env, state, field, opts);
    const auto volts = induced_voltage(mag, plan.pickup);
    const auto spec = spectrum(volts);
    std::vector<double> out;
    for (int k : plan.harmonics) out.push_back(harmonic_amplitude(spec, excitation, {plan.mode, k}, plan.combine));
    return out;
}

inline std::string describe(const ExcitationConfig& cfg) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cfg.tones.size(); ++i) {
        if (i) os << " + ";
        os << cfg.tones[i].frequency << " Hz @ " << si_to_oersted(cfg.tones[i].amplitude) << " Oe";
    }
    return os.str();
}

inline SweepRow run_point(const SweepPlan& plan, const Catalog& catalog, const SolverOptions& opts,
                          const std::string& particle, std::size_t grid_index) {
    const auto& excitation = plan.grid[grid_index];
    SweepRow row;
    row.particle = particle;
    row.grid_index = grid_index;
    row.excitation = excitation;
    try {
        const auto& model = catalog.particle(particle);
        row.amplitude_unbound =
            harmonic_amplitudes(model, catalog.environment, BindingState::Unbound, excitation, plan, opts);
        row.amplitude_bound = harmonic_amplitudes(model, catalog.environment, BindingState::Bound, excitation, plan, opts);
    } catch (const Error& e) {
        fail(e.code(), "plan " + plan.name + ", particle " + particle + ", grid point " + std::to_string(grid_index) +
                           " (" + describe(excitation) + "): " + e.detail());
    }
    for (std::size_t h = 0; h < plan.harmonics.size(); ++h) {
        try {
            row.delta_percent.push_back(percent_drop(row.amplitude_unbound[h], row.amplitude_bound[h]));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroReference) throw;
            row.delta_percent.push_back(std::numeric_limits<double>::quiet_NaN());
            row.flag = std::string(to_string(e.code()));
        }
    }
    return row;
}

// threads == 0 uses the hardware concurrency.
inline SweepResult run_sweep(const SweepPlan& plan, const Catalog& catalog, const SolverOptions& opts = {},
                             unsigned threads = 0) {
    plan.validate();
    opts.validate();
    for (const auto& p : plan.particles) (void)catalog.particle(p);

    const std::size_t n_points = plan.grid.size();
    const std::size_t n_tasks = plan.particles.size() * n_points;
    std::vector<SweepRow> rows(n_tasks);
    std::vector<std::exception_ptr> errors(n_tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < n_tasks; task = next++) {
            try {
                rows[task] = run_point(plan, catalog, opts, plan.particles[task / n_points], task % n_points);
            } catch (...) {
                errors[task] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_tasks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    SweepResult result;
    result.plan_name = plan.name;
    result.catalog_version = catalog.version;
    result.solver = opts;
    result.mode = plan.mode;
    result.harmonics = plan.harmonics;
    result.rows = std::move(rows);
    return result;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kSweepCsvHeader = "particle,state,f_l_hz,a_l_oe,f_h_hz,a_h_oe,a3,a5,delta3_pct,delta5_pct";

namespace detail {

inline std::string csv_number(double v) { return std::isfinite(v) ? format_scientific(v) : std::string(); }

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline double parse_cell(const std::string& cell) {
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "bad numeric cell '" + cell + "'");
    }
}

} // namespace detail

// One line per (particle, grid point, state); the delta columns carry the
// pair's percent drop on both state lines. Absent tones and undefined deltas
// are empty cells.
inline void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << kSweepCsvHeader << '\n';
    const auto slot3 = result.harmonic_slot(3);
    const auto slot5 = result.harmonic_slot(5);
    auto pick = [](const std::vector<double>& v, std::optional<std::size_t> slot) {
        return slot && *slot < v.size() ? detail::csv_number(v[*slot]) : std::string();
    };
    for (const auto& row : result.rows) {
        const auto& cfg = row.excitation;
        const Tone& low = cfg.low_tone();
        std::string f_h, a_h;
        if (cfg.is_dual()) {
            f_h = detail::csv_number(cfg.high_tone().frequency);
            a_h = detail::csv_number(si_to_oersted(cfg.high_tone().amplitude));
        }
        for (const auto state : {BindingState::Unbound, BindingState::Bound}) {
            const auto& amps = state == BindingState::Unbound ? row.amplitude_unbound : row.amplitude_bound;
            os << row.particle << ',' << to_string(state) << ',' << detail::csv_number(low.frequency) << ','
               << detail::csv_number(si_to_oersted(low.amplitude)) << ',' << f_h << ',' << a_h << ','
               << pick(amps, slot3) << ',' << pick(amps, slot5) << ',' << pick(row.delta_percent, slot3) << ','
               << pick(row.delta_percent, slot5) << '\n';
        }
    }
}

inline void export_csv(const SweepResult& result, const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary);
    if (!out) fail(ErrorCode::IoFailure, "cannot write '" + destination.string() + "'");
    write_sweep_csv(out, result);
    out.flush();
    if (!out) fail(ErrorCode::IoFailure, "write to '" + destination.string() + "' failed");
}

// Inverse of write_sweep_csv. Sample rates are re-derived, solver metadata is
// not part of the file.
inline SweepResult read_sweep_csv(std::istream& is, const std::string& plan_name = "csv") {
    std::string line;
    if (!std::getline(is, line)) fail(ErrorCode::ParseError, "empty sweep CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepCsvHeader) fail(ErrorCode::ParseError, "unexpected sweep CSV header '" + line + "'");

    SweepResult result;
    result.plan_name = plan_name;
    result.harmonics = {3, 5};
    std::vector<std::size_t> per_particle_index;
    std::vector<std::string> seen_particles;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != 10)
            fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 10 cells, got " +
                                            std::to_string(cells.size()));
        const auto state = parse_binding(cells[1]);
        std::vector<Tone> tones{Tone::oersted(detail::parse_cell(cells[2]), detail::parse_cell(cells[3]))};
        if (!cells[4].empty()) tones.push_back(Tone::oersted(detail::parse_cell(cells[4]), detail::parse_cell(cells[5])));
        const std::vector<double> amps{detail::parse_cell(cells[6]), detail::parse_cell(cells[7])};
        const std::vector<double> deltas{detail::parse_cell(cells[8]), detail::parse_cell(cells[9])};

        if (state == BindingState::Unbound) {
            auto pos = std::find(seen_particles.begin(), seen_particles.end(), cells[0]);
            if (pos == seen_particles.end()) {
                seen_particles.push_back(cells[0]);
                per_particle_index.push_back(0);
                pos = seen_particles.end() - 1;
            }
            SweepRow row;
            row.particle = cells[0];
            row.grid_index = per_particle_index[static_cast<std::size_t>(pos - seen_particles.begin())]++;
            row.excitation.tones = tones;
            row.excitation.sample_rate = admissible_sample_rate(tones);
            row.amplitude_unbound = amps;
            row.delta_percent = deltas;
            if (std::isnan(deltas[0]) || std::isnan(deltas[1])) row.flag = "ZeroReference";
            result.rows.push_back(std::move(row));
        } else {
            if (result.rows.empty() || result.rows.back().particle != cells[0] ||
                !result.rows.back().amplitude_bound.empty())
                fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bound row without its unbound row");
            result.rows.back().amplitude_bound = amps;
        }
    }
    for (const auto& row : result.rows)
        if (row.amplitude_bound.empty()) fail(ErrorCode::ParseError, "unbound row for " + row.particle + " has no bound row");
    if (!result.rows.empty() && result.rows.front().excitation.is_dual()) result.mode = HarmonicMode::DualFrequency;
    return result;
}

} // namespace mpsbench
