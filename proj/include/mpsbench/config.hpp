#pragma once

// JSON run configurations. Scalars are bare SI numbers or unit-suffixed
// strings ("250 Oe", "620 Hz", "100 kHz").
//
//   simulate: {"particle", "state", "excitation", "solver"?, "pickup"?}
//   sweep:    {"name"?, "protocol"?, "grid"?, "particles"?, "harmonics"?,
//              "sideband"?, "solver"?, "pickup"?}
//
// A sweep config starts from the named protocol's grid (if any) and replaces
// whichever axes "grid" lists: {"f_l": [...], "a_l": [...], "f_h": [...], "a_h": [...]}.

#include "mpsbench/catalog.hpp"
#include "mpsbench/dynamics.hpp"
#include "mpsbench/error.hpp"
#include "mpsbench/excitation.hpp"
#include "mpsbench/physics.hpp"
#include "mpsbench/readout.hpp"
#include "mpsbench/sweep.hpp"
#include "mpsbench/units.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace mpsbench {

inline nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

inline double json_scalar(const nlohmann::json& v, Dimension dim) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_quantity(v.get<std::string>(), dim);
    fail(ErrorCode::ParseError, "expected a number or unit string, got " + v.dump());
}

inline std::vector<double> json_scalar_list(const nlohmann::json& node, const std::string& key, Dimension dim) {
    if (!node.contains(key)) return {};
    const auto& v = node.at(key);
    if (!v.is_array()) return {json_scalar(v, dim)};
    std::vector<double> out;
    for (const auto& item : v) out.push_back(json_scalar(item, dim));
    return out;
}

inline Tone parse_tone(const nlohmann::json& node) {
    Tone t;
    t.frequency = json_quantity(node, "frequency", Dimension::Frequency);
    t.amplitude = json_quantity(node, "amplitude", Dimension::Field);
    t.phase = node.value("phase", 0.0);
    return t;
}

inline ExcitationConfig parse_excitation(const nlohmann::json& node) {
    if (!node.contains("tones") || !node.at("tones").is_array())
        fail(ErrorCode::ParseError, "excitation needs a 'tones' array");
    std::vector<Tone> tones;
    for (const auto& t : node.at("tones")) tones.push_back(parse_tone(t));
    ExcitationConfig cfg;
    cfg.tones = tones;
    cfg.n_records = node.value("records", 4);
    cfg.sample_rate = node.contains("sample_rate") ? json_quantity(node, "sample_rate", Dimension::Frequency)
                                                   : admissible_sample_rate(cfg.tones);
    cfg.validate();
    return cfg;
}

inline IntegrationScheme parse_scheme(const std::string& s) {
    if (s == "exponential") return IntegrationScheme::Exponential;
    if (s == "rk4") return IntegrationScheme::RungeKutta4;
    fail(ErrorCode::ParseError, "unknown scheme '" + s + "' (expected exponential or rk4)");
}

inline SolverOptions parse_solver(const nlohmann::json& node) {
    SolverOptions o;
    if (node.is_null()) return o;
    o.step_divisor = node.value("step_divisor", o.step_divisor);
    o.warmup_records = node.value("warmup_records", o.warmup_records);
    o.periodicity_tol = node.value("periodicity_tol", o.periodicity_tol);
    if (node.contains("scheme")) o.scheme = parse_scheme(node.at("scheme").get<std::string>());
    o.validate();
    return o;
}

inline PickupSpec parse_pickup(const nlohmann::json& node) {
    PickupSpec p;
    if (node.is_null()) return p;
    p.turns = node.value("turns", p.turns);
    p.effective_area = json_quantity_or(node, "effective_area", Dimension::Area, p.effective_area);
    p.coupling = node.value("coupling", p.coupling);
    p.validate();
    return p;
}

inline SidebandCombination parse_sideband(const std::string& s) {
    if (s == "mean") return SidebandCombination::Mean;
    if (s == "sum") return SidebandCombination::Sum;
    if (s == "upper") return SidebandCombination::Upper;
    if (s == "lower") return SidebandCombination::Lower;
    fail(ErrorCode::ParseError, "unknown sideband combination '" + s + "'");
}

struct SimulateConfig {
    std::string particle;
    BindingState state = BindingState::Unbound;
    ExcitationConfig excitation;
    SolverOptions solver;
    PickupSpec pickup;
};

inline SimulateConfig parse_simulate_config(const nlohmann::json& doc) {
    SimulateConfig c;
    try {
        c.particle = doc.at("particle").get<std::string>();
        c.state = parse_binding(doc.value("state", std::string("unbound")));
        c.excitation = parse_excitation(doc.at("excitation"));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("simulate config: ") + e.what());
    }
    c.solver = parse_solver(doc.value("solver", nlohmann::json()));
    c.pickup = parse_pickup(doc.value("pickup", nlohmann::json()));
    return c;
}

struct SweepConfig {
    SweepPlan plan;
    SolverOptions solver;
};

inline SweepConfig parse_sweep_config(const nlohmann::json& doc) {
    ProtocolGrid grid;
    std::string name = doc.value("name", std::string("custom"));
    if (doc.contains("protocol")) {
        const auto protocol = doc.at("protocol").get<std::string>();
        grid = default_protocol_grid(protocol);
        if (!doc.contains("name")) name = protocol;
    }
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        if (g.contains("f_l")) grid.f_low_hz = json_scalar_list(g, "f_l", Dimension::Frequency);
        if (g.contains("f_h")) grid.f_high_hz = json_scalar_list(g, "f_h", Dimension::Frequency);
        // Axis values are stored in Oe; convert SI inputs.
        auto to_oe = [](std::vector<double> v) {
            for (auto& x : v) x = si_to_oersted(x);
            return v;
        };
        if (g.contains("a_l")) grid.a_low_oe = to_oe(json_scalar_list(g, "a_l", Dimension::Field));
        if (g.contains("a_h")) grid.a_high_oe = to_oe(json_scalar_list(g, "a_h", Dimension::Field));
    }
    SweepConfig c;
    c.plan = build_plan(name, grid);
    if (doc.contains("particles")) c.plan.particles = doc.at("particles").get<std::vector<std::string>>();
    if (doc.contains("harmonics")) c.plan.harmonics = doc.at("harmonics").get<std::vector<int>>();
    if (doc.contains("sideband")) c.plan.combine = parse_sideband(doc.at("sideband").get<std::string>());
    c.plan.pickup = parse_pickup(doc.value("pickup", nlohmann::json()));
    c.solver = parse_solver(doc.value("solver", nlohmann::json()));
    c.plan.validate();
    return c;
}

} // namespace mpsbench
