#pragma once

#include "mpsbench/error.hpp"
#include "mpsbench/excitation.hpp"
#include "mpsbench/readout.hpp"
#include "mpsbench/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

namespace mpsbench {

// Percent drop of a harmonic from the unbound to the bound state,
// (A_unbound - A_bound) / A_unbound * 100.
inline double percent_drop(double amplitude_unbound, double amplitude_bound) {
    if (amplitude_unbound == 0.0) fail(ErrorCode::ZeroReference, "unbound reference amplitude is zero");
    require(amplitude_unbound > 0.0, "unbound reference amplitude must be positive");
    return (amplitude_unbound - amplitude_bound) / amplitude_unbound * 100.0;
}

struct DeltaResult {
    int harmonic_order = 3;
    double amplitude_unbound = 0.0;
    double amplitude_bound = 0.0;
    double delta_percent = 0.0;
};

inline DeltaResult delta_result(int order, double amplitude_unbound, double amplitude_bound) {
    return {order, amplitude_unbound, amplitude_bound, percent_drop(amplitude_unbound, amplitude_bound)};
}

struct LoopPoint {
    double field;     // A/m
    double magnetization; // normalized
};

// One base period of (H, m) in time order; the segment last -> first closes it.
struct MHLoop {
    std::vector<LoopPoint> points;

    std::size_t size() const noexcept { return points.size(); }
    double peak() const noexcept {
        double p = 0.0;
        for (const auto& pt : points) p = std::max(p, std::abs(pt.magnetization));
        return p;
    }
};

struct LoopMetrics {
    double coercive_field = 0.0; // A/m
    double remanence = 0.0;      // normalized
    double area = 0.0;           // A/m x normalized m
};

// Back-integrates the pickup voltage: cumulative trapezoid of -e, mean removed.
inline std::vector<double> integrate_voltage(const VoltageSeries& voltage) {
    const auto len = voltage.samples.size();
    require(len >= 2, "voltage record too short");
    const double dt = 1.0 / voltage.sample_rate;
    std::vector<double> m(len, 0.0);
    for (std::size_t n = 1; n < len; ++n)
        m[n] = m[n - 1] - 0.5 * dt * (voltage.samples[n - 1] + voltage.samples[n]);
    double mean = 0.0;
    for (double v : m) mean += v;
    mean /= static_cast<double>(len);
    for (double& v : m) v -= mean;
    return m;
}

namespace detail {

inline void check_pairing(const FieldSeries& field, const VoltageSeries& voltage) {
    if (field.samples.size() != voltage.samples.size() || field.sample_rate != voltage.sample_rate)
        fail(ErrorCode::PeriodMismatch, "field (" + std::to_string(field.samples.size()) + " samples @ " +
                                            std::to_string(field.sample_rate) + " Hz) and voltage (" +
                                            std::to_string(voltage.samples.size()) + " samples @ " +
                                            std::to_string(voltage.sample_rate) + " Hz) do not cover the same period");
}

inline MHLoop make_loop(const FieldSeries& field, const std::vector<double>& m, double norm) {
    if (!(norm > 0.0)) fail(ErrorCode::DegenerateLoop, "reconstructed magnetization is identically zero");
    MHLoop loop;
    loop.points.reserve(m.size());
    for (std::size_t n = 0; n < m.size(); ++n) loop.points.push_back({field.samples[n], m[n] / norm});
    return loop;
}

inline double max_abs(const std::vector<double>& v) {
    double p = 0.0;
    for (double x : v) p = std::max(p, std::abs(x));
    return p;
}

} // namespace detail

// AC M-H loop from one steady-state period of field and pickup voltage,
// normalized to max |m| = 1.
inline MHLoop reconstruct_ac_mh(const FieldSeries& field, const VoltageSeries& voltage) {
    detail::check_pairing(field, voltage);
    const auto m = integrate_voltage(voltage);
    return detail::make_loop(field, m, detail::max_abs(m));
}

// Bound/unbound pair sharing one normalization: the reference (unbound)
// loop peaks at 1, the other loop is scaled by the same factor.
inline std::pair<MHLoop, MHLoop> reconstruct_ac_mh_pair(const FieldSeries& field, const VoltageSeries& reference,
                                                        const VoltageSeries& other) {
    detail::check_pairing(field, reference);
    detail::check_pairing(field, other);
    const auto m_ref = integrate_voltage(reference);
    const auto m_other = integrate_voltage(other);
    const double norm = detail::max_abs(m_ref);
    return {detail::make_loop(field, m_ref, norm), detail::make_loop(field, m_other, norm)};
}

namespace detail {

struct Crossings {
    std::optional<double> rising;
    std::optional<double> falling;
};

// First upward and first downward zero crossing of `key` in time order,
// reporting the linearly interpolated `value` at each.
template <typename Key, typename Value>
Crossings zero_crossings(const std::vector<LoopPoint>& pts, Key key, Value value) {
    Crossings c;
    const auto len = pts.size();
    for (std::size_t i = 0; i < len && (!c.rising || !c.falling); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % len];
        const double ka = key(a), kb = key(b);
        const bool up = ka < 0.0 && kb >= 0.0;
        const bool down = ka > 0.0 && kb <= 0.0;
        if (!up && !down) continue;
        const double t = ka / (ka - kb);
        const double v = value(a) + t * (value(b) - value(a));
        if (up && !c.rising) c.rising = v;
        if (down && !c.falling) c.falling = v;
    }
    return c;
}

} // namespace detail

inline LoopMetrics loop_metrics(const MHLoop& loop) {
    require(loop.size() >= 3, "loop needs at least three points");
    const auto& pts = loop.points;
    auto field = [](const LoopPoint& p) { return p.field; };
    auto mag = [](const LoopPoint& p) { return p.magnetization; };

    const auto m_cross = detail::zero_crossings(pts, mag, field);
    if (!m_cross.rising || !m_cross.falling)
        fail(ErrorCode::NoZeroCrossing, "magnetization never changes sign over the period");
    const auto h_cross = detail::zero_crossings(pts, field, mag);
    if (!h_cross.rising || !h_cross.falling) fail(ErrorCode::NoZeroCrossing, "field never changes sign over the period");

    LoopMetrics out;
    out.coercive_field = 0.5 * (std::abs(*m_cross.rising) + std::abs(*m_cross.falling));
    out.remanence = 0.5 * (std::abs(*h_cross.rising) + std::abs(*h_cross.falling));
    double twice_area = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % pts.size()];
        twice_area += a.field * b.magnetization - b.field * a.magnetization;
    }
    out.area = 0.5 * std::abs(twice_area);
    return out;
}

// Harmonic amplitude per micromole of particles.
inline double per_mole_amplitude(double amplitude, double molar_amount) {
    if (!(molar_amount > 0.0)) fail(ErrorCode::ZeroMoles, "molar amount must be positive");
    return amplitude / (molar_amount * 1e6);
}

inline void write_loop_csv(std::ostream& os, const MHLoop& loop) {
    os << "h_oe,m_normalized\n";
    for (const auto& p : loop.points)
        os << format_scientific(si_to_oersted(p.field)) << ',' << format_scientific(p.magnetization) << '\n';
}

inline nlohmann::json to_json(const LoopMetrics& m) {
    return {{"coercive_field_a_per_m", m.coercive_field},
            {"coercive_field_oe", si_to_oersted(m.coercive_field)},
            {"remanence", m.remanence},
            {"area", m.area}};
}

} // namespace mpsbench
