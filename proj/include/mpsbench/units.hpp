#pragma once

// Physical constants and the unit-suffixed scalar syntax used by catalog and
// config files ("250 Oe", "620 Hz", "63.8 emu/g"). Internally everything is SI.

#include "mpsbench/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace mpsbench {

inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;   // T·m/A
inline constexpr double kAvogadro = 6.02214076e23;          // 1/mol
inline constexpr double kOerstedToAm = 1000.0 / (4.0 * std::numbers::pi);

constexpr double oersted_to_si(double oersted) noexcept { return oersted * kOerstedToAm; }
constexpr double si_to_oersted(double a_per_m) noexcept { return a_per_m / kOerstedToAm; }

enum class Dimension {
    Dimensionless,
    Length,
    Area,
    Time,
    Frequency,
    Temperature,
    Viscosity,
    Density,
    EnergyDensity,
    SpecificMoment,
    Field,
    Mass,
    Amount,
    Voltage,
    Current,
    Resistance,
    Inductance,
    Capacitance,
};

constexpr std::string_view to_string(Dimension d) noexcept {
    switch (d) {
    case Dimension::Dimensionless: return "dimensionless";
    case Dimension::Length: return "length";
    case Dimension::Area: return "area";
    case Dimension::Time: return "time";
    case Dimension::Frequency: return "frequency";
    case Dimension::Temperature: return "temperature";
    case Dimension::Viscosity: return "viscosity";
    case Dimension::Density: return "density";
    case Dimension::EnergyDensity: return "energy density";
    case Dimension::SpecificMoment: return "specific magnetization";
    case Dimension::Field: return "magnetic field";
    case Dimension::Mass: return "mass";
    case Dimension::Amount: return "amount of substance";
    case Dimension::Voltage: return "voltage";
    case Dimension::Current: return "current";
    case Dimension::Resistance: return "resistance";
    case Dimension::Inductance: return "inductance";
    case Dimension::Capacitance: return "capacitance";
    }
    return "unknown";
}

namespace detail {

struct UnitEntry {
    std::string_view symbol;
    Dimension dimension;
    double to_si;
};

// clang-format off
inline constexpr std::array kUnits = {
    UnitEntry{"m", Dimension::Length, 1.0},
    UnitEntry{"cm", Dimension::Length, 1e-2},
    UnitEntry{"mm", Dimension::Length, 1e-3},
    UnitEntry{"um", Dimension::Length, 1e-6},
    UnitEntry{"nm", Dimension::Length, 1e-9},
    UnitEntry{"m^2", Dimension::Area, 1.0},
    UnitEntry{"cm^2", Dimension::Area, 1e-4},
    UnitEntry{"mm^2", Dimension::Area, 1e-6},
    UnitEntry{"s", Dimension::Time, 1.0},
    UnitEntry{"ms", Dimension::Time, 1e-3},
    UnitEntry{"us", Dimension::Time, 1e-6},
    UnitEntry{"ns", Dimension::Time, 1e-9},
    UnitEntry{"Hz", Dimension::Frequency, 1.0},
    UnitEntry{"kHz", Dimension::Frequency, 1e3},
    UnitEntry{"MHz", Dimension::Frequency, 1e6},
    UnitEntry{"ksp/s", Dimension::Frequency, 1e3},
    UnitEntry{"K", Dimension::Temperature, 1.0},
    UnitEntry{"Pa*s", Dimension::Viscosity, 1.0},
    UnitEntry{"Pa.s", Dimension::Viscosity, 1.0},
    UnitEntry{"mPa*s", Dimension::Viscosity, 1e-3},
    UnitEntry{"mPa.s", Dimension::Viscosity, 1e-3},
    UnitEntry{"cP", Dimension::Viscosity, 1e-3},
    UnitEntry{"kg/m^3", Dimension::Density, 1.0},
    UnitEntry{"g/cm^3", Dimension::Density, 1e3},
    UnitEntry{"J/m^3", Dimension::EnergyDensity, 1.0},
    UnitEntry{"kJ/m^3", Dimension::EnergyDensity, 1e3},
    UnitEntry{"erg/cm^3", Dimension::EnergyDensity, 0.1},
    UnitEntry{"A*m^2/kg", Dimension::SpecificMoment, 1.0},
    UnitEntry{"Am^2/kg", Dimension::SpecificMoment, 1.0},
    UnitEntry{"emu/g", Dimension::SpecificMoment, 1.0},
    UnitEntry{"A/m", Dimension::Field, 1.0},
    UnitEntry{"kA/m", Dimension::Field, 1e3},
    UnitEntry{"Oe", Dimension::Field, kOerstedToAm},
    UnitEntry{"kOe", Dimension::Field, 1e3 * kOerstedToAm},
    UnitEntry{"kg", Dimension::Mass, 1.0},
    UnitEntry{"g", Dimension::Mass, 1e-3},
    UnitEntry{"mg", Dimension::Mass, 1e-6},
    UnitEntry{"ug", Dimension::Mass, 1e-9},
    UnitEntry{"mol", Dimension::Amount, 1.0},
    UnitEntry{"mmol", Dimension::Amount, 1e-3},
    UnitEntry{"umol", Dimension::Amount, 1e-6},
    UnitEntry{"nmol", Dimension::Amount, 1e-9},
    UnitEntry{"pmol", Dimension::Amount, 1e-12},
    UnitEntry{"fmol", Dimension::Amount, 1e-15},
    UnitEntry{"fmole", Dimension::Amount, 1e-15},
    UnitEntry{"V", Dimension::Voltage, 1.0},
    UnitEntry{"mV", Dimension::Voltage, 1e-3},
    UnitEntry{"A", Dimension::Current, 1.0},
    UnitEntry{"mA", Dimension::Current, 1e-3},
    UnitEntry{"Ohm", Dimension::Resistance, 1.0},
    UnitEntry{"kOhm", Dimension::Resistance, 1e3},
    UnitEntry{"H", Dimension::Inductance, 1.0},
    UnitEntry{"mH", Dimension::Inductance, 1e-3},
    UnitEntry{"uH", Dimension::Inductance, 1e-6},
    UnitEntry{"F", Dimension::Capacitance, 1.0},
    UnitEntry{"uF", Dimension::Capacitance, 1e-6},
    UnitEntry{"nF", Dimension::Capacitance, 1e-9},
    UnitEntry{"pF", Dimension::Capacitance, 1e-12},
};
// clang-format on

inline std::string normalize_unit(std::string_view unit) {
    std::string out;
    out.reserve(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i) {
        const auto c = static_cast<unsigned char>(unit[i]);
        // UTF-8 micro sign (C2 B5) and Greek mu (CE BC) both map to 'u'.
        if (c == 0xC2 && i + 1 < unit.size() && static_cast<unsigned char>(unit[i + 1]) == 0xB5) {
            out.push_back('u');
            ++i;
        } else if (c == 0xCE && i + 1 < unit.size() && static_cast<unsigned char>(unit[i + 1]) == 0xBC) {
            out.push_back('u');
            ++i;
        } else if (c == 0xCE && i + 1 < unit.size() && static_cast<unsigned char>(unit[i + 1]) == 0xA9) {
            out += "Ohm";
            ++i;
        } else if (c == 0xC2 && i + 1 < unit.size() && static_cast<unsigned char>(unit[i + 1]) == 0xB7) {
            out.push_back('*');
            ++i;
        } else if (c != ' ') {
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

} // namespace detail

// Parses "<number>[ <unit>]". A bare number is taken as already SI.
inline double parse_quantity(std::string_view text, Dimension expected) {
    const auto s = detail::trim(text);
    double value = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first)
        fail(ErrorCode::UnitError, "cannot parse number in '" + std::string(text) + "'");
    const auto unit = detail::normalize_unit(detail::trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr))));
    if (unit.empty()) return value;
    for (const auto& entry : detail::kUnits) {
        if (entry.symbol == unit) {
            if (entry.dimension != expected)
                fail(ErrorCode::UnitError, "unit '" + unit + "' is a " + std::string(to_string(entry.dimension)) +
                                               ", expected " + std::string(to_string(expected)));
            return value * entry.to_si;
        }
    }
    fail(ErrorCode::UnitError, "unknown unit '" + unit + "' in '" + std::string(text) + "'");
}

} // namespace mpsbench
