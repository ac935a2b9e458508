#pragma once

// Particle/environment parameters, the Langevin equilibrium and the Brownian /
// Neel relaxation times. Everything here is SI and side-effect free.

#include "mpsbench/error.hpp"
#include "mpsbench/units.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace mpsbench {

struct ParticleModel {
    std::string name;
    double d_core = 0.0;       // m
    double d_hydro = 0.0;      // m
    double m_sat = 0.0;        // A·m²/kg (== emu/g)
    double density = 0.0;      // kg/m³
    double anisotropy_K = 0.0; // J/m³
    double tau0 = 0.0;         // s

    double core_volume() const noexcept { return std::numbers::pi / 6.0 * d_core * d_core * d_core; }
    double hydro_volume() const noexcept { return std::numbers::pi / 6.0 * d_hydro * d_hydro * d_hydro; }
    // Magnetic moment of one particle, A·m².
    double moment() const noexcept { return m_sat * density * core_volume(); }
    // Mass of one mole of particles (magnetic core only), kg/mol.
    double molar_mass_per_particle() const noexcept { return density * core_volume() * kAvogadro; }

    void validate() const {
        require(d_core > 0.0 && d_core <= d_hydro, name + ": need 0 < d_core <= d_hydro");
        require(m_sat > 0.0, name + ": m_sat must be positive");
        require(density > 0.0, name + ": density must be positive");
        require(anisotropy_K >= 0.0, name + ": anisotropy_K must be non-negative");
        require(tau0 > 0.0, name + ": tau0 must be positive");
    }
};

struct Environment {
    double temperature = 300.0; // K
    double viscosity = 1.0e-3;  // Pa·s

    double thermal_energy() const noexcept { return kBoltzmann * temperature; }

    void validate() const {
        require(temperature > 0.0, "temperature must be positive");
        require(viscosity > 0.0, "viscosity must be positive");
    }
};

enum class BindingState { Unbound, Bound };

constexpr std::string_view to_string(BindingState b) noexcept {
    return b == BindingState::Unbound ? "unbound" : "bound";
}

inline BindingState parse_binding(std::string_view text) {
    if (text == "unbound" || text == "Unbound") return BindingState::Unbound;
    if (text == "bound" || text == "Bound") return BindingState::Bound;
    fail(ErrorCode::ParseError, "binding state must be 'unbound' or 'bound', got '" + std::string(text) + "'");
}

struct SampleSpec {
    ParticleModel particle;
    double weight_amount = 0.0; // kg
    double molar_amount = 0.0;  // mol
    BindingState binding = BindingState::Unbound;

    void validate() const {
        particle.validate();
        require(weight_amount > 0.0, "weight_amount must be positive");
        require(molar_amount > 0.0, "molar_amount must be positive");
    }
};

// Below these |x| the closed forms lose digits to cancellation.
inline constexpr double kLangevinSeriesThreshold = 1.0;
inline constexpr double kLangevinDerivativeSeriesThreshold = 0.1;

// L(x) = coth(x) - 1/x, evaluated on |x| and re-signed so oddness is exact.
// Small |x| uses Lambert's continued fraction x/(3 + x^2/(5 + x^2/(7 + ...))).
inline double langevin(double xi) noexcept {
    const double a = std::abs(xi);
    double value;
    if (a < kLangevinSeriesThreshold) {
        const double x2 = a * a;
        double tail = 31.0;
        for (int k = 29; k >= 3; k -= 2) tail = static_cast<double>(k) + x2 / tail;
        value = a / tail;
    } else {
        value = 1.0 / std::tanh(a) - 1.0 / a;
    }
    return std::signbit(xi) ? -value : value;
}

inline double langevin_derivative(double xi) noexcept {
    const double a = std::abs(xi);
    if (a < kLangevinDerivativeSeriesThreshold) {
        const double x2 = a * a;
        return 1.0 / 3.0 + x2 * (-1.0 / 15.0 + x2 * (2.0 / 189.0 + x2 * (-1.0 / 675.0 + x2 * (2.0 / 10395.0))));
    }
    const double s = std::sinh(a);
    return 1.0 / (a * a) - 1.0 / (s * s);
}

// tau_B = 3 eta V_h / (k_B T)
inline double brownian_time(const ParticleModel& model, const Environment& env) {
    return 3.0 * env.viscosity * model.hydro_volume() / env.thermal_energy();
}

struct NeelTime {
    double tau;   // s
    double sigma; // barrier height K V / (k_B T)
};

inline constexpr double kMaxNeelExponent = 700.0;

inline double neel_exponent(const ParticleModel& model, const Environment& env) {
    return model.anisotropy_K * model.core_volume() / env.thermal_energy();
}

// Throws OverflowExponent when the barrier is so high that the channel is
// effectively blocked; callers treat that as tau_N = infinity.
inline NeelTime neel_time(const ParticleModel& model, const Environment& env) {
    const double sigma = neel_exponent(model, env);
    if (sigma > kMaxNeelExponent)
        fail(ErrorCode::OverflowExponent, model.name + ": Neel exponent " + std::to_string(sigma) + " exceeds " +
                                              std::to_string(kMaxNeelExponent));
    return {model.tau0 * std::exp(sigma), sigma};
}

inline double effective_time(double tau_brown, double tau_neel, BindingState binding) {
    require(tau_brown > 0.0, "tau_B must be positive");
    require(tau_neel > 0.0, "tau_N must be positive or infinite");
    if (binding == BindingState::Bound) return tau_neel;
    if (std::isinf(tau_neel)) return tau_brown;
    return 1.0 / (1.0 / tau_brown + 1.0 / tau_neel);
}

// Combined relaxation time of a particle in the given state; a blocked Neel
// channel yields +inf for bound particles.
inline double relaxation_time(const ParticleModel& model, const Environment& env, BindingState binding) {
    double tau_neel = std::numeric_limits<double>::infinity();
    try {
        tau_neel = neel_time(model, env).tau;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::OverflowExponent) throw;
    }
    return effective_time(brownian_time(model, env), tau_neel, binding);
}

// Langevin argument per unit field, 1/(A/m).
inline double langevin_scale(const ParticleModel& model, const Environment& env) noexcept {
    return kMu0 * model.moment() / env.thermal_energy();
}

inline double equilibrium_magnetization(const ParticleModel& model, const Environment& env, double field) noexcept {
    return model.m_sat * langevin(langevin_scale(model, env) * field);
}

struct MHPoint {
    double field;         // A/m
    double magnetization; // A·m²/kg
};

inline std::vector<MHPoint> static_mh_curve(const ParticleModel& model, const Environment& env,
                                             std::span<const double> h_grid) {
    std::vector<MHPoint> curve;
    curve.reserve(h_grid.size());
    for (double h : h_grid) {
        require(std::isfinite(h), "field grid must be finite");
        curve.push_back({h, equilibrium_magnetization(model, env, h)});
    }
    return curve;
}

} // namespace mpsbench
