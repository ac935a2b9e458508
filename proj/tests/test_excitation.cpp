#include "mpsbench/excitation.hpp"
#include "mpsbench/readout.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace mpsbench;

TEST(RecordLength, GcdOfTones) {
    const std::vector<Tone> single{{50.0, 1.0, 0.0}};
    EXPECT_EQ(record_length(single, 100e3), 2000);
    const std::vector<Tone> dual{{50.0, 1.0, 0.0}, {5000.0, 1.0, 0.0}};
    EXPECT_EQ(record_length(dual, 100e3), 2000);
    const std::vector<Tone> coprime{{50.0, 1.0, 0.0}, {5001.0, 1.0, 0.0}};
    EXPECT_EQ(record_length(coprime, 100e3), 100000);
}

TEST(RecordLength, Incommensurate) {
    const std::vector<Tone> fractional{{50.5, 1.0, 0.0}};
    try {
        record_length(fractional, 100e3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IncommensurateTones);
    }
    // 100 kHz is not a multiple of 620 Hz.
    const std::vector<Tone> odd{{620.0, 1.0, 0.0}};
    EXPECT_THROW(record_length(odd, 100e3), Error);
}

TEST(SampleRate, AdmissibleRate) {
    const std::vector<Tone> t620{{620.0, 1.0, 0.0}};
    const double fs = admissible_sample_rate(t620);
    EXPECT_GE(fs, 100e3);
    EXPECT_EQ(std::fmod(fs, 620.0), 0.0);
    EXPECT_LT(fs, 100e3 + 620.0);

    const std::vector<Tone> fast{{50.0, 1.0, 0.0}, {27000.0, 1.0, 0.0}};
    const double fs_fast = admissible_sample_rate(fast);
    EXPECT_GE(fs_fast, 20.0 * 27000.0);
    EXPECT_EQ(std::fmod(fs_fast, 50.0), 0.0);
    ExcitationConfig cfg{fast, fs_fast, 4};
    EXPECT_NO_THROW(cfg.validate());
    cfg.sample_rate = 100e3;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(Waveform, ExactSamples) {
    const double a = 7.0;
    const ExcitationConfig cfg{{{50.0, a, 0.0}}, 100e3, 1};
    const auto h = build_waveform(cfg);
    ASSERT_EQ(h.samples.size(), 2000u);
    EXPECT_EQ(h.samples[500], a);
    EXPECT_EQ(h.samples[0], 0.0);
    EXPECT_NEAR(h.samples[1500], -a, 1e-15 * a);
    for (double v : h.samples) EXPECT_LE(std::abs(v), a);
}

TEST(Waveform, TwoToneBoundAndZeroMean) {
    const double al = oersted_to_si(250.0), ah = oersted_to_si(25.0);
    const ExcitationConfig cfg{{Tone::oersted(50.0, 250.0), Tone::oersted(5000.0, 25.0)}, 100e3, 3};
    const auto h = build_waveform(cfg);
    EXPECT_EQ(h.samples.size(), 3u * 2000u);
    double sum = 0.0, peak = 0.0;
    for (double v : h.samples) sum += v, peak = std::max(peak, std::abs(v));
    EXPECT_LE(peak, al + ah);
    EXPECT_LT(std::abs(sum / static_cast<double>(h.samples.size())), 1e-12 * (al + ah));
}

TEST(Waveform, OnlyToneBinsCarryEnergy) {
    const ExcitationConfig cfg{{Tone::oersted(50.0, 250.0), Tone::oersted(5000.0, 25.0)}, 100e3, 2};
    const auto spec = spectrum(build_waveform(cfg));
    const double full = oersted_to_si(250.0);
    EXPECT_NEAR(spec.amplitude_at(50.0), full, 1e-12 * full);
    EXPECT_NEAR(spec.amplitude_at(5000.0), oersted_to_si(25.0), 1e-12 * full);
    for (std::size_t k = 0; k < spec.bins(); ++k) {
        const double f = spec.frequency(k);
        if (f == 50.0 || f == 5000.0) continue;
        EXPECT_LT(spec.amplitudes[k], 1e-10 * full) << f;
    }
}

TEST(Waveform, ValueAtMatchesSamplesAndInterpolates) {
    const ExcitationConfig cfg{{{130.0, 3.0, 0.4}}, admissible_sample_rate(std::vector<Tone>{{130.0, 3.0, 0.4}}), 2};
    const auto h = build_waveform(cfg);
    for (std::int64_t n : {0, 17, 500, 1539}) {
        EXPECT_EQ(h.value_at(n, 0.0), h.samples[static_cast<std::size_t>(n)]);
        const double t = (static_cast<double>(n) + 0.25) / cfg.sample_rate;
        EXPECT_NEAR(h.value_at(n, 0.25), 3.0 * std::sin(2.0 * std::numbers::pi * 130.0 * t + 0.4), 1e-12);
    }
    // Raw-sample series fall back to interpolation.
    FieldSeries raw = h;
    raw.components.clear();
    const double t = (100.5) / cfg.sample_rate;
    EXPECT_NEAR(raw.value_at(100, 0.5), 3.0 * std::sin(2.0 * std::numbers::pi * 130.0 * t + 0.4), 1e-6);
}

TEST(Waveform, NegationIsExact) {
    const ExcitationConfig cfg{{Tone::oersted(620.0, 250.0)}, admissible_sample_rate(std::vector<Tone>{{620.0, 1.0, 0.0}}), 1};
    const auto h = build_waveform(cfg);
    const auto neg = h.negated();
    for (std::size_t n = 0; n < h.samples.size(); ++n) EXPECT_EQ(neg.samples[n], -h.samples[n]);
    EXPECT_EQ(neg.value_at(3, 0.7), -h.value_at(3, 0.7));
}

TEST(Waveform, TailRecords) {
    const ExcitationConfig cfg{{{50.0, 1.0, 0.0}}, 100e3, 4};
    const auto h = build_waveform(cfg);
    const auto tail = tail_records(h, 1);
    ASSERT_EQ(tail.samples.size(), 2000u);
    EXPECT_EQ(tail.samples[0], h.samples[6000]);
    EXPECT_THROW(tail_records(h, 5), Error);
}
