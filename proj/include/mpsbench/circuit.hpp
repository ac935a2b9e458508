#pragma once

// AC analysis of a drive coil fed through an optional series resonant
// capacitor C_R. The coil is a series R-L branch with its parasitic
// capacitance C_p in parallel; the source is ideal (zero output impedance).

#include "mpsbench/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mpsbench {

struct CoilSpec {
    std::string name;
    double resistance = 0.0;            // Ohm
    double inductance = 0.0;            // H
    double parasitic_capacitance = 0.0; // F, 0 for the ideal coil

    void validate() const {
        require(resistance > 0.0, "coil resistance must be positive");
        require(inductance > 0.0, "coil inductance must be positive");
        require(parasitic_capacitance >= 0.0, "parasitic capacitance must be non-negative");
    }

    CoilSpec ideal() const {
        CoilSpec c = *this;
        c.parasitic_capacitance = 0.0;
        return c;
    }
};

// Measured low-frequency (primary) and high-frequency (secondary) drive coils.
inline CoilSpec primary_coil() { return {"primary", 7.923, 14.94e-3, 1.36e-9}; }
inline CoilSpec secondary_coil() { return {"secondary", 7.878, 694.7e-6, 1.36e-12}; }

inline CoilSpec coil_by_name(const std::string& name) {
    if (name == "primary") return primary_coil();
    if (name == "secondary") return secondary_coil();
    fail(ErrorCode::InvalidArgument, "unknown coil '" + name + "' (expected primary or secondary)");
}

struct DriveSpec {
    double source_voltage = 0.0;               // V amplitude
    std::optional<double> resonant_capacitor;  // F

    void validate() const {
        require(source_voltage > 0.0, "source voltage must be positive");
        require(!resonant_capacitor || *resonant_capacitor > 0.0, "resonant capacitor must be positive");
    }
};

inline std::complex<double> impedance(const CoilSpec& coil, const DriveSpec& drive, double frequency) {
    require(frequency > 0.0, "frequency must be positive");
    const double w = 2.0 * std::numbers::pi * frequency;
    const std::complex<double> j(0.0, 1.0);
    const std::complex<double> z_rl = coil.resistance + j * w * coil.inductance;
    // (R + jwL) || 1/(jwC_p), written so C_p = 0 reduces to R + jwL.
    const std::complex<double> z_coil = z_rl / (1.0 + j * w * coil.parasitic_capacitance * z_rl);
    if (!drive.resonant_capacitor) return z_coil;
    return z_coil + 1.0 / (j * w * *drive.resonant_capacitor);
}

// Terminal: current delivered by the source, V/|Z|. Winding: current in the
// R-L branch alone, i.e. the part that magnetizes; the two differ only
// through the parasitic capacitance.
enum class CurrentProbe { Terminal, Winding };

inline double current_magnitude(const CoilSpec& coil, const DriveSpec& drive, double frequency,
                                CurrentProbe probe = CurrentProbe::Terminal) {
    const std::complex<double> i_total = drive.source_voltage / impedance(coil, drive, frequency);
    if (probe == CurrentProbe::Terminal || coil.parasitic_capacitance == 0.0) return std::abs(i_total);
    const double w = 2.0 * std::numbers::pi * frequency;
    const std::complex<double> j(0.0, 1.0);
    const std::complex<double> z_rl = coil.resistance + j * w * coil.inductance;
    // Current divider between the R-L branch and C_p.
    return std::abs(i_total / (1.0 + j * w * coil.parasitic_capacitance * z_rl));
}

struct CurrentPoint {
    double frequency; // Hz
    double current;   // A amplitude
};

inline std::vector<CurrentPoint> current_magnitude_sweep(const CoilSpec& coil, const DriveSpec& drive,
                                                         std::span<const double> f_grid,
                                                         CurrentProbe probe = CurrentProbe::Terminal) {
    coil.validate();
    drive.validate();
    for (std::size_t i = 1; i < f_grid.size(); ++i) require(f_grid[i] > f_grid[i - 1], "frequency grid must ascend");
    std::vector<CurrentPoint> out;
    out.reserve(f_grid.size());
    for (double f : f_grid) out.push_back({f, current_magnitude(coil, drive, f, probe)});
    return out;
}

inline std::vector<double> log_grid(double f_min, double f_max, std::size_t points) {
    require(f_min > 0.0 && f_max > f_min && points >= 2, "log grid needs 0 < f_min < f_max and >= 2 points");
    std::vector<double> grid(points);
    const double ratio = std::log(f_max / f_min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = f_min * std::exp(ratio * static_cast<double>(i));
    grid.back() = f_max;
    return grid;
}

struct Resonance {
    double frequency;     // Hz, numerical argmax of |I|
    double analytic_seed; // Hz, 1/(2 pi sqrt(L C_R))
    double peak_current;  // A
};

// Argmax of |I(f)|: a coarse log scan around the series-resonance seed
// followed by golden-section refinement in log-frequency.
inline Resonance resonant_frequency(const CoilSpec& coil, const DriveSpec& drive,
                                    CurrentProbe probe = CurrentProbe::Terminal) {
    coil.validate();
    drive.validate();
    if (!drive.resonant_capacitor) fail(ErrorCode::NoResonance, "no series resonant capacitor configured");
    const double seed = 1.0 / (2.0 * std::numbers::pi * std::sqrt(coil.inductance * *drive.resonant_capacitor));

    double lo = seed / 4.0, hi = seed * 4.0;
    if (coil.parasitic_capacitance > 0.0) {
        // Stay below the coil's self-resonance, where |I| has a minimum.
        const double self = 1.0 / (2.0 * std::numbers::pi * std::sqrt(coil.inductance * coil.parasitic_capacitance));
        hi = std::min(hi, 0.99 * self);
    }
    require(hi > lo, "series resonance lies above the coil self-resonance");

    auto current_at_log = [&](double x) { return current_magnitude(coil, drive, std::exp(x), probe); };
    const auto grid = log_grid(lo, hi, 401);
    std::size_t best = 0;
    double best_i = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double c = current_magnitude(coil, drive, grid[i], probe);
        if (c > best_i) best_i = c, best = i;
    }
    double a = std::log(grid[best == 0 ? 0 : best - 1]);
    double b = std::log(grid[std::min(best + 1, grid.size() - 1)]);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = current_at_log(c), fd = current_at_log(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        if (fc > fd) {
            b = d, d = c, fd = fc;
            c = b - inv_phi * (b - a), fc = current_at_log(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + inv_phi * (b - a), fd = current_at_log(d);
        }
    }
    const double f_peak = std::exp(0.5 * (a + b));
    return {f_peak, seed, current_magnitude(coil, drive, f_peak, probe)};
}

// C_R that puts the series resonance of the (ideal) coil at f_target.
inline double design_resonant_capacitor(const CoilSpec& coil, double f_target) {
    require(f_target > 0.0, "target frequency must be positive");
    require(coil.inductance > 0.0, "coil inductance must be positive");
    const double w = 2.0 * std::numbers::pi * f_target;
    return 1.0 / (w * w * coil.inductance);
}

} // namespace mpsbench
