#pragma once

// Applied-field synthesis. Tone frequencies and the sample rate are integral in
// Hz, so every configuration has a common base period that holds an exact
// integer number of samples and of cycles of each tone (leakage-free FFT).

#include "mpsbench/error.hpp"
#include "mpsbench/units.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace mpsbench {

struct Tone {
    double frequency = 0.0; // Hz
    double amplitude = 0.0; // A/m
    double phase = 0.0;     // rad

    static Tone oersted(double frequency_hz, double amplitude_oe, double phase = 0.0) {
        return {frequency_hz, oersted_to_si(amplitude_oe), phase};
    }
};

inline constexpr double kDefaultSampleRate = 100e3;
inline constexpr double kMinSamplesPerCycle = 20.0;

// Integral value of a frequency given in Hz; IncommensurateTones otherwise.
inline std::int64_t integral_hz(double frequency) {
    const double r = std::round(frequency);
    if (!(frequency > 0.0) || r < 1.0 || std::abs(frequency - r) > 1e-9 * std::max(1.0, frequency))
        fail(ErrorCode::IncommensurateTones,
             "frequency " + std::to_string(frequency) + " Hz is not a positive integer number of Hz");
    return static_cast<std::int64_t>(r);
}

inline std::int64_t base_frequency(std::span<const Tone> tones) {
    if (tones.empty()) fail(ErrorCode::InvalidArgument, "at least one tone required");
    std::int64_t g = 0;
    for (const auto& t : tones) g = std::gcd(g, integral_hz(t.frequency));
    return g;
}

// Samples in one common base period: sample_rate / gcd(tone frequencies).
inline std::int64_t record_length(std::span<const Tone> tones, double sample_rate) {
    const auto f_base = base_frequency(tones);
    const auto fs = integral_hz(sample_rate);
    if (fs % f_base != 0)
        fail(ErrorCode::IncommensurateTones, "sample rate " + std::to_string(fs) +
                                                 " Hz is not a multiple of the base frequency " +
                                                 std::to_string(f_base) + " Hz");
    return fs / f_base;
}

// Smallest admissible rate >= preferred that satisfies the samples-per-cycle
// rule and is a multiple of the base frequency.
inline double admissible_sample_rate(std::span<const Tone> tones, double preferred = kDefaultSampleRate) {
    const auto f_base = base_frequency(tones);
    double f_max = 0.0;
    for (const auto& t : tones) f_max = std::max(f_max, t.frequency);
    const double floor_rate = std::max(preferred, kMinSamplesPerCycle * f_max);
    const auto lo = static_cast<std::int64_t>(std::ceil(floor_rate - 1e-9));
    return static_cast<double>(((lo + f_base - 1) / f_base) * f_base);
}

struct ExcitationConfig {
    std::vector<Tone> tones;
    double sample_rate = kDefaultSampleRate;
    int n_records = 4;

    double max_frequency() const {
        double f = 0.0;
        for (const auto& t : tones) f = std::max(f, t.frequency);
        return f;
    }
    // Lowest-frequency tone (f_L).
    const Tone& low_tone() const {
        return *std::min_element(tones.begin(), tones.end(),
                                 [](const Tone& a, const Tone& b) { return a.frequency < b.frequency; });
    }
    // Highest-frequency tone (f_H); only meaningful for dual-tone drives.
    const Tone& high_tone() const {
        return *std::max_element(tones.begin(), tones.end(),
                                 [](const Tone& a, const Tone& b) { return a.frequency < b.frequency; });
    }
    bool is_dual() const noexcept { return tones.size() == 2; }

    std::int64_t base_period_samples() const { return record_length(tones, sample_rate); }

    void validate() const {
        require(!tones.empty() && tones.size() <= 2, "excitation needs one or two tones");
        for (const auto& t : tones) {
            require(t.frequency > 0.0, "tone frequency must be positive");
            require(t.amplitude >= 0.0, "tone amplitude must be non-negative");
        }
        require(n_records >= 1, "n_records must be at least 1");
        require(sample_rate >= kMinSamplesPerCycle * max_frequency(),
                "sample rate must be at least 20x the highest tone frequency");
        (void)record_length(tones, sample_rate);
    }
};

// Uniformly sampled signal whose length is a whole number of base periods.
template <typename T>
concept UniformSeries = requires(const T& s) {
    { s.samples } -> std::convertible_to<std::vector<double>>;
    { s.sample_rate } -> std::convertible_to<double>;
    { s.base_period_samples } -> std::convertible_to<std::int64_t>;
};

struct FieldSeries {
    // One sinusoidal component, kept so the field can be evaluated exactly
    // between samples. Amplitude is signed (negated() flips it).
    struct Component {
        std::int64_t frequency_hz;
        double amplitude;
        double phase;
    };

    std::vector<double> samples; // A/m
    double sample_rate = 0.0;
    std::int64_t base_period_samples = 0;
    std::vector<Component> components;

    std::size_t size() const noexcept { return samples.size(); }

    // Field at time (n + fraction) / sample_rate, fraction in [0, 1].
    double value_at(std::int64_t n, double fraction) const {
        if (!components.empty()) {
            const auto fs = static_cast<std::int64_t>(std::llround(sample_rate));
            double h = 0.0;
            for (const auto& c : components) {
                // Cycle count reduced modulo one before scaling by 2*pi.
                const double cycles =
                    (static_cast<double>((c.frequency_hz * n) % fs) + static_cast<double>(c.frequency_hz) * fraction) /
                    static_cast<double>(fs);
                h += c.amplitude * std::sin(2.0 * std::numbers::pi * cycles + c.phase);
            }
            return h;
        }
        return interpolate(n, fraction);
    }

    FieldSeries negated() const {
        FieldSeries out = *this;
        for (auto& v : out.samples) v = -v;
        for (auto& c : out.components) c.amplitude = -c.amplitude;
        return out;
    }

  private:
    // Periodic Catmull-Rom interpolation for series built from raw samples.
    double interpolate(std::int64_t n, double t) const {
        const auto len = static_cast<std::int64_t>(samples.size());
        auto at = [&](std::int64_t i) { return samples[static_cast<std::size_t>(((i % len) + len) % len)]; };
        const double p0 = at(n - 1), p1 = at(n), p2 = at(n + 1), p3 = at(n + 2);
        return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
    }
};

// H(t_n) = sum_i A_i sin(2 pi f_i t_n + phi_i), t_n = n / sample_rate.
inline FieldSeries build_waveform(const ExcitationConfig& config) {
    config.validate();
    FieldSeries series;
    series.sample_rate = config.sample_rate;
    series.base_period_samples = config.base_period_samples();
    for (const auto& t : config.tones) series.components.push_back({integral_hz(t.frequency), t.amplitude, t.phase});
    const auto total = series.base_period_samples * config.n_records;
    series.samples.resize(static_cast<std::size_t>(total));
    for (std::int64_t n = 0; n < total; ++n) series.samples[static_cast<std::size_t>(n)] = series.value_at(n, 0.0);
    return series;
}

// Last `records` base periods of a series.
template <UniformSeries S>
S tail_records(const S& series, std::int64_t records) {
    const auto p = series.base_period_samples;
    const auto have = static_cast<std::int64_t>(series.samples.size()) / p;
    require(records >= 1 && records <= have, "requested more records than the series holds");
    S out = series;
    out.samples.assign(series.samples.end() - records * p, series.samples.end());
    return out;
}

} // namespace mpsbench
