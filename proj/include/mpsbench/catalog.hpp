#pragma once

// Versioned parameter catalog: particle species, their vial amounts and the
// default environment. Values in the JSON document are either bare SI numbers
// or unit-suffixed strings ("63.8 emu/g", "25 nm").

#include "mpsbench/error.hpp"
#include "mpsbench/physics.hpp"
#include "mpsbench/units.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#ifndef MPSBENCH_DEFAULT_CATALOG
#define MPSBENCH_DEFAULT_CATALOG "data/catalog.json"
#endif

namespace mpsbench {

inline constexpr const char* kCatalogEnvVar = "MPSBENCH_CATALOG";

struct VialAmounts {
    double weight_amount = 0.0; // kg
    double molar_amount = 0.0;  // mol
};

struct Catalog {
    std::string version;
    Environment environment;
    std::map<std::string, ParticleModel> particles;
    std::map<std::string, VialAmounts> vials;
    // DC coercivity as reported for a species; informational only, the
    // anhysteretic equilibrium cannot reproduce it.
    std::map<std::string, double> dc_coercivity;

    const ParticleModel& particle(const std::string& name) const {
        const auto it = particles.find(name);
        if (it == particles.end()) fail(ErrorCode::UnknownParticle, "particle '" + name + "' not in catalog");
        return it->second;
    }

    SampleSpec sample(const std::string& name, BindingState binding) const {
        const auto it = vials.find(name);
        if (it == vials.end()) fail(ErrorCode::UnknownParticle, "no vial amounts for '" + name + "'");
        SampleSpec spec{particle(name), it->second.weight_amount, it->second.molar_amount, binding};
        spec.validate();
        return spec;
    }

    std::vector<std::string> particle_names() const {
        std::vector<std::string> names;
        for (const auto& [name, _] : particles) names.push_back(name);
        return names;
    }
};

// Reads a scalar that may be a bare SI number or a unit-suffixed string.
inline double json_quantity(const nlohmann::json& node, const std::string& key, Dimension dim) {
    if (!node.contains(key)) fail(ErrorCode::ParseError, "missing field '" + key + "'");
    const auto& v = node.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_quantity(v.get<std::string>(), dim);
    fail(ErrorCode::ParseError, "field '" + key + "' must be a number or a unit string");
}

inline double json_quantity_or(const nlohmann::json& node, const std::string& key, Dimension dim, double fallback) {
    return node.contains(key) ? json_quantity(node, key, dim) : fallback;
}

inline Catalog parse_catalog(const nlohmann::json& doc) {
    Catalog cat;
    cat.version = doc.value("version", std::string("unversioned"));
    if (doc.contains("environment")) {
        const auto& env = doc.at("environment");
        cat.environment.temperature = json_quantity_or(env, "temperature", Dimension::Temperature, 300.0);
        cat.environment.viscosity = json_quantity_or(env, "viscosity", Dimension::Viscosity, 1.0e-3);
    }
    cat.environment.validate();

    if (!doc.contains("particles") || !doc.at("particles").is_object())
        fail(ErrorCode::ParseError, "catalog needs a 'particles' object");
    for (const auto& [name, node] : doc.at("particles").items()) {
        ParticleModel p;
        p.name = name;
        p.d_core = json_quantity(node, "d_core", Dimension::Length);
        p.d_hydro = json_quantity(node, "d_hydro", Dimension::Length);
        p.m_sat = json_quantity(node, "m_sat", Dimension::SpecificMoment);
        p.density = json_quantity(node, "density", Dimension::Density);
        p.anisotropy_K = json_quantity(node, "anisotropy_K", Dimension::EnergyDensity);
        p.tau0 = json_quantity(node, "tau0", Dimension::Time);
        p.validate();
        cat.particles.emplace(name, p);
        if (node.contains("dc_coercivity"))
            cat.dc_coercivity[name] = json_quantity(node, "dc_coercivity", Dimension::Field);
        if (node.contains("vial")) {
            const auto& vial = node.at("vial");
            VialAmounts amounts{json_quantity(vial, "weight_amount", Dimension::Mass),
                                json_quantity(vial, "molar_amount", Dimension::Amount)};
            require(amounts.weight_amount > 0.0 && amounts.molar_amount > 0.0, name + ": vial amounts must be positive");
            cat.vials.emplace(name, amounts);
        }
    }
    return cat;
}

inline std::filesystem::path default_catalog_path() {
    if (const char* env = std::getenv(kCatalogEnvVar); env != nullptr && *env != '\0') return env;
    return MPSBENCH_DEFAULT_CATALOG;
}

inline Catalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoFailure, "cannot open catalog '" + path.string() + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, "catalog '" + path.string() + "': " + e.what());
    }
    return parse_catalog(doc);
}

inline Catalog load_default_catalog() { return load_catalog(default_catalog_path()); }

} // namespace mpsbench
