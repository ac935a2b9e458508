#pragma once

// Pickup-coil voltage and harmonic spectra. Spectra are one-sided amplitude
// spectra of whole base periods with a rectangular window, so every tone and
// every mixing product of the configured drive falls exactly on a bin.

#include "mpsbench/dynamics.hpp"
#include "mpsbench/error.hpp"
#include "mpsbench/excitation.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

namespace mpsbench {

struct PickupSpec {
    int turns = 1;
    double effective_area = 1e-4; // m², informational; geometry is folded into coupling
    double coupling = 1.0;        // flux per unit of sample magnetization

    void validate() const {
        require(turns >= 1, "pickup turns must be >= 1");
        require(effective_area > 0.0, "pickup effective_area must be positive");
        require(coupling > 0.0, "pickup coupling must be positive");
    }
};

struct VoltageSeries {
    std::vector<double> samples; // V
    double sample_rate = 0.0;
    std::int64_t base_period_samples = 0;

    std::size_t size() const noexcept { return samples.size(); }
};

// e(t) = -N * coupling * dm/dt, with a five-point central difference that
// wraps periodically over the (whole-period) record.
inline VoltageSeries induced_voltage(const MagSeries& mag, const PickupSpec& pickup) {
    pickup.validate();
    const auto len = static_cast<std::int64_t>(mag.samples.size());
    require(len >= 5, "magnetization series too short to differentiate");
    VoltageSeries out;
    out.sample_rate = mag.sample_rate;
    out.base_period_samples = mag.base_period_samples;
    out.samples.resize(mag.samples.size());
    const double gain = -static_cast<double>(pickup.turns) * pickup.coupling * mag.sample_rate / 12.0;
    auto at = [&](std::int64_t i) { return mag.samples[static_cast<std::size_t>(((i % len) + len) % len)]; };
    for (std::int64_t n = 0; n < len; ++n) {
        const double d = at(n - 2) - 8.0 * at(n - 1) + 8.0 * at(n + 1) - at(n + 2);
        out.samples[static_cast<std::size_t>(n)] = gain * d;
    }
    return out;
}

struct HarmonicSpectrum {
    double bin_width = 0.0;          // Hz
    std::vector<double> amplitudes;  // one-sided
    std::vector<double> phases;      // rad
    std::size_t record_length = 0;

    std::size_t bins() const noexcept { return amplitudes.size(); }
    double frequency(std::size_t bin) const noexcept { return bin_width * static_cast<double>(bin); }

    // Bin holding `hz`; OffBinTarget if it is not an exact bin in range.
    std::size_t bin_of(double hz) const {
        const double k = hz / bin_width;
        const double r = std::round(k);
        if (!(hz > 0.0) || std::abs(k - r) > 1e-9 * std::max(1.0, k) || r >= static_cast<double>(bins()))
            fail(ErrorCode::OffBinTarget, std::to_string(hz) + " Hz is not an analysis bin (width " +
                                              std::to_string(bin_width) + " Hz)");
        return static_cast<std::size_t>(r);
    }
    double amplitude_at(double hz) const { return amplitudes[bin_of(hz)]; }
    double phase_at(double hz) const { return phases[bin_of(hz)]; }

    // Mean-square of the record reconstructed from the spectrum (Parseval):
    // DC and Nyquist bins count with weight 1, the rest with 1/2.
    double mean_square() const noexcept {
        double acc = 0.0;
        for (std::size_t k = 0; k < amplitudes.size(); ++k) {
            const bool edge = k == 0 || (record_length % 2 == 0 && k == record_length / 2);
            acc += edge ? amplitudes[k] * amplitudes[k] : 0.5 * amplitudes[k] * amplitudes[k];
        }
        return acc;
    }
};

enum class Window { Rectangular };

namespace detail {

// FFTW planning is not thread-safe; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

} // namespace detail

template <UniformSeries S>
HarmonicSpectrum spectrum(const S& series, Window = Window::Rectangular) {
    const auto len = series.samples.size();
    const auto period = series.base_period_samples;
    if (period <= 0 || len == 0 || len % static_cast<std::size_t>(period) != 0)
        fail(ErrorCode::BadRecordLength, "record of " + std::to_string(len) + " samples is not a whole number of " +
                                             std::to_string(period) + "-sample base periods");

    const auto n_out = len / 2 + 1;
    std::unique_ptr<double, detail::FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * len)));
    std::unique_ptr<fftw_complex, detail::FftwFree> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_out)));
    if (!in || !out) fail(ErrorCode::InvalidArgument, "FFT buffer allocation failed");

    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(len), in.get(), out.get(), FFTW_ESTIMATE);
    }
    std::copy(series.samples.begin(), series.samples.end(), in.get());
    fftw_execute(plan);
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    HarmonicSpectrum spec;
    spec.bin_width = series.sample_rate / static_cast<double>(len);
    spec.record_length = len;
    spec.amplitudes.resize(n_out);
    spec.phases.resize(n_out);
    const double scale = 1.0 / static_cast<double>(len);
    for (std::size_t k = 0; k < n_out; ++k) {
        const std::complex<double> x(out.get()[k][0], out.get()[k][1]);
        const bool edge = k == 0 || (len % 2 == 0 && k == len / 2);
        spec.amplitudes[k] = std::abs(x) * (edge ? scale : 2.0 * scale);
        spec.phases[k] = std::arg(x);
    }
    return spec;
}

enum class HarmonicMode { SingleFrequency, DualFrequency };

struct HarmonicIndex {
    HarmonicMode mode = HarmonicMode::SingleFrequency;
    int order = 3;

    void validate() const { require(order >= 3 && order % 2 == 1, "harmonic order must be odd and >= 3"); }
};

// How the two mixing sidebands f_H +- (k-1) f_L are combined into one number.
enum class SidebandCombination { Mean, Sum, Upper, Lower };

// Single-frequency: amplitude at k f_L. Dual-frequency: sidebands at
// f_H +- (k-1) f_L, combined per `combine` (mean by default).
inline double harmonic_amplitude(const HarmonicSpectrum& spec, const ExcitationConfig& excitation,
                                 const HarmonicIndex& index, SidebandCombination combine = SidebandCombination::Mean) {
    index.validate();
    require(!excitation.tones.empty(), "excitation has no tones");
    const double f_low = excitation.low_tone().frequency;
    if (index.mode == HarmonicMode::SingleFrequency) return spec.amplitude_at(index.order * f_low);

    require(excitation.is_dual(), "dual-frequency harmonic needs a two-tone excitation");
    const double f_high = excitation.high_tone().frequency;
    const double offset = (index.order - 1) * f_low;
    const double upper = spec.amplitude_at(f_high + offset);
    const double lower = spec.amplitude_at(f_high - offset);
    switch (combine) {
    case SidebandCombination::Mean: return 0.5 * (upper + lower);
    case SidebandCombination::Sum: return upper + lower;
    case SidebandCombination::Upper: return upper;
    case SidebandCombination::Lower: return lower;
    }
    return 0.5 * (upper + lower);
}

// Sideband amplitude at f_H +- 2 f_L for m = H - alpha H^3 under a sin(w_L t) + b sin(w_H t).
inline double intermod_oracle(double a, double b, double alpha) {
    require(a >= 0.0 && b >= 0.0 && alpha >= 0.0, "intermod_oracle arguments must be non-negative");
    return 3.0 * alpha * a * a * b / 4.0;
}

inline std::string format_scientific(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

inline void write_spectrum_csv(std::ostream& os, const HarmonicSpectrum& spec) {
    os << "frequency_hz,amplitude,phase_rad\n";
    for (std::size_t k = 0; k < spec.bins(); ++k)
        os << format_scientific(spec.frequency(k)) << ',' << format_scientific(spec.amplitudes[k]) << ','
           << format_scientific(spec.phases[k]) << '\n';
}

} // namespace mpsbench
