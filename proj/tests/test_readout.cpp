#include "mpsbench/analysis.hpp"
#include "mpsbench/catalog.hpp"
#include "mpsbench/dynamics.hpp"
#include "mpsbench/readout.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace mpsbench;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MagSeries sine_mag(double amplitude, double f, double fs, int periods = 1) {
    MagSeries m;
    m.sample_rate = fs;
    m.base_period_samples = static_cast<std::int64_t>(fs / f);
    m.samples.resize(static_cast<std::size_t>(m.base_period_samples * periods));
    for (std::size_t n = 0; n < m.samples.size(); ++n)
        m.samples[n] = amplitude * std::sin(kTwoPi * f * static_cast<double>(n) / fs);
    return m;
}

} // namespace

TEST(InducedVoltage, ConstantGivesZero) {
    MagSeries m;
    m.sample_rate = 1000.0;
    m.base_period_samples = 10;
    m.samples.assign(10, 3.5);
    for (double v : induced_voltage(m, {}).samples) EXPECT_EQ(v, 0.0);
}

TEST(InducedVoltage, SineAmplitudeAt100SamplesPerPeriod) {
    const double M = 2.0, f = 1000.0;
    const auto m = sine_mag(M, f, 100e3);
    PickupSpec pickup{3, 1e-4, 0.5};
    const auto v = induced_voltage(m, pickup);
    const double want = pickup.turns * pickup.coupling * M * kTwoPi * f;
    const double got = spectrum(v).amplitude_at(f);
    EXPECT_NEAR(got, want, 1e-4 * want);
    // Sign: e = -N c dm/dt, so at t=0 (dm/dt max) the voltage is at its minimum.
    EXPECT_LT(v.samples[0], 0.0);
}

TEST(InducedVoltage, LinearInTurns) {
    const auto m = sine_mag(1.0, 500.0, 50e3);
    const auto v1 = induced_voltage(m, {1, 1e-4, 1.0});
    const auto v2 = induced_voltage(m, {2, 1e-4, 1.0});
    for (std::size_t i = 0; i < v1.samples.size(); ++i) EXPECT_EQ(v2.samples[i], 2.0 * v1.samples[i]);
}

TEST(Spectrum, UnitSineAndLinearity) {
    const auto s = sine_mag(1.0, 1000.0, 100e3, 3);
    const auto spec = spectrum(s);
    EXPECT_DOUBLE_EQ(spec.bin_width, 100e3 / 300.0);
    EXPECT_NEAR(spec.amplitude_at(1000.0), 1.0, 1e-12);
    for (std::size_t k = 0; k < spec.bins(); ++k)
        if (spec.frequency(k) != 1000.0) {
            EXPECT_LT(spec.amplitudes[k], 1e-10);
        }

    auto two = s;
    for (std::size_t n = 0; n < two.samples.size(); ++n)
        two.samples[n] += std::sin(kTwoPi * 3000.0 * static_cast<double>(n) / 100e3);
    const auto spec2 = spectrum(two);
    EXPECT_NEAR(spec2.amplitude_at(1000.0), 1.0, 1e-12);
    EXPECT_NEAR(spec2.amplitude_at(3000.0), 1.0, 1e-12);
}

TEST(Spectrum, SquareWaveSeries) {
    // sign(sin) sampled off the zero crossings: odd harmonics 4/(pi k).
    MagSeries sq;
    sq.sample_rate = 1e6;
    sq.base_period_samples = 100000;
    sq.samples.resize(100000);
    for (std::size_t n = 0; n < sq.samples.size(); ++n) {
        const double x = std::sin(kTwoPi * (static_cast<double>(n) + 0.5) / 100000.0);
        sq.samples[n] = x > 0 ? 1.0 : -1.0;
    }
    const auto spec = spectrum(sq);
    const double a1 = spec.amplitude_at(10.0);
    EXPECT_NEAR(spec.amplitude_at(30.0) / a1, 1.0 / 3.0, 1e-6);
    EXPECT_NEAR(spec.amplitude_at(50.0) / a1, 1.0 / 5.0, 1e-6);
    EXPECT_NEAR(a1, 4.0 / std::numbers::pi, 1e-6);
}

TEST(Spectrum, RejectsPartialRecordsAndOffBinTargets) {
    auto s = sine_mag(1.0, 1000.0, 100e3, 2);
    s.samples.pop_back();
    try {
        spectrum(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadRecordLength);
    }
    const auto spec = spectrum(sine_mag(1.0, 1000.0, 100e3, 1));
    try {
        spec.amplitude_at(1500.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OffBinTarget);
    }
}

TEST(Spectrum, ParsevalOnRandomRecords) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int len : {8, 9, 100, 1001, 4096}) {
        VoltageSeries v;
        v.sample_rate = 1.0;
        v.base_period_samples = len;
        v.samples.resize(static_cast<std::size_t>(len));
        double ms = 0.0;
        for (auto& x : v.samples) x = g(rng) + 0.3, ms += x * x;
        ms /= len;
        EXPECT_NEAR(spectrum(v).mean_square(), ms, 1e-12 * ms) << len;
    }
}

TEST(Harmonics, PureToneHasNoThirdHarmonic) {
    const ExcitationConfig cfg{{{1000.0, 1.0, 0.0}}, 100e3, 1};
    const auto spec = spectrum(build_waveform(cfg));
    EXPECT_LT(harmonic_amplitude(spec, cfg, {HarmonicMode::SingleFrequency, 3}), 1e-10);
}

TEST(Harmonics, CubicSingleToneAndEvenBins) {
    const double a = 2.0, alpha = 0.05;
    const ExcitationConfig cfg{{{500.0, a, 0.0}}, 100e3, 3};
    const auto field = build_waveform(cfg);
    MagSeries m{{}, field.sample_rate, field.base_period_samples};
    for (double h : field.samples) m.samples.push_back(h - alpha * h * h * h);
    const auto spec = spectrum(m);
    EXPECT_NEAR(harmonic_amplitude(spec, cfg, {HarmonicMode::SingleFrequency, 3}), alpha * a * a * a / 4.0, 1e-12);
    const double fundamental = spec.amplitude_at(500.0);
    for (int k : {2, 4, 6}) EXPECT_LT(spec.amplitude_at(500.0 * k), 1e-10 * fundamental);
}

TEST(Harmonics, LangevinMapHasNoEvenHarmonics) {
    const ExcitationConfig cfg{{Tone::oersted(620.0, 250.0)}, admissible_sample_rate(std::vector<Tone>{{620.0, 1.0, 0.0}}), 1};
    const auto field = build_waveform(cfg);
    MagSeries m{{}, field.sample_rate, field.base_period_samples};
    for (double h : field.samples) m.samples.push_back(langevin(8e-4 * h));
    const auto spec = spectrum(m);
    const double fundamental = spec.amplitude_at(620.0);
    for (int k : {2, 4, 6, 8}) EXPECT_LT(spec.amplitude_at(620.0 * k), 1e-10 * fundamental);
}

TEST(Harmonics, IntermodSidebandsAndCombination) {
    const double a = 1.5, b = 0.4, alpha = 0.03;
    EXPECT_EQ(intermod_oracle(0.0, b, alpha), 0.0);
    EXPECT_EQ(intermod_oracle(1.0, 1.0, 1.0), 0.75);
    EXPECT_EQ(intermod_oracle(2.0 * a, b, alpha), 4.0 * intermod_oracle(a, b, alpha));

    const ExcitationConfig cfg{{{50.0, a, 0.0}, {5000.0, b, 0.0}}, 100e3, 2};
    const auto field = build_waveform(cfg);
    MagSeries m{{}, field.sample_rate, field.base_period_samples};
    for (double h : field.samples) m.samples.push_back(h - alpha * h * h * h);
    const auto spec = spectrum(m);
    const double want = intermod_oracle(a, b, alpha);
    EXPECT_NEAR(spec.amplitude_at(4900.0), want, 1e-12);
    EXPECT_NEAR(spec.amplitude_at(5100.0), want, 1e-12);
    const HarmonicIndex third{HarmonicMode::DualFrequency, 3};
    EXPECT_NEAR(harmonic_amplitude(spec, cfg, third), want, 1e-12);
    EXPECT_NEAR(harmonic_amplitude(spec, cfg, third, SidebandCombination::Sum), 2.0 * want, 1e-12);
    EXPECT_NEAR(harmonic_amplitude(spec, cfg, third, SidebandCombination::Upper), want, 1e-12);
    EXPECT_THROW((HarmonicIndex{HarmonicMode::SingleFrequency, 4}.validate()), Error);
}

TEST(Harmonics, HomogeneousInCoupling) {
    const auto cat = load_default_catalog();
    const ExcitationConfig cfg{{Tone::oersted(50.0, 250.0)}, 100e3, 4};
    const auto m = simulate_magnetization(cat.particle("SHS30"), cat.environment, BindingState::Unbound,
                                          build_waveform(cfg));
    const auto s1 = spectrum(induced_voltage(m, {1, 1e-4, 1.0}));
    const auto s2 = spectrum(induced_voltage(m, {1, 1e-4, 2.5}));
    const HarmonicIndex idx{HarmonicMode::SingleFrequency, 5};
    EXPECT_NEAR(harmonic_amplitude(s2, cfg, idx), 2.5 * harmonic_amplitude(s1, cfg, idx),
                1e-12 * harmonic_amplitude(s2, cfg, idx));
}

TEST(Harmonics, SpectrumCsv) {
    const auto spec = spectrum(sine_mag(1.0, 1000.0, 8000.0, 1));
    std::ostringstream os;
    write_spectrum_csv(os, spec);
    const auto text = os.str();
    EXPECT_EQ(text.rfind("frequency_hz,amplitude,phase_rad\n", 0), 0u);
    EXPECT_NE(text.find("1.00000000000000000e+03,"), std::string::npos);
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), spec.bins() + 1);
}
