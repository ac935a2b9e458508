#pragma once

// Trend report over a sweep result: per-series argmax, monotonicity along each
// swept axis, particle ordering of the percent drop, and per-micromole bound
// amplitudes. Measured reference combinations are attached for comparison
// only; nothing here asserts them.

#include "mpsbench/analysis.hpp"
#include "mpsbench/catalog.hpp"
#include "mpsbench/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mpsbench {

enum class Axis { FLow, ALow, FHigh, AHigh };

inline constexpr std::array kAllAxes{Axis::FLow, Axis::ALow, Axis::FHigh, Axis::AHigh};

inline const char* axis_key(Axis a) {
    switch (a) {
    case Axis::FLow: return "f_l_hz";
    case Axis::ALow: return "a_l_oe";
    case Axis::FHigh: return "f_h_hz";
    case Axis::AHigh: return "a_h_oe";
    }
    return "?";
}

inline const char* axis_label(Axis a) {
    switch (a) {
    case Axis::FLow: return "f_L (Hz)";
    case Axis::ALow: return "A_L (Oe)";
    case Axis::FHigh: return "f_H (Hz)";
    case Axis::AHigh: return "A_H (Oe)";
    }
    return "?";
}

// Axis coordinate of a drive in report units (Hz, Oe); NaN if the tone is absent.
inline double axis_value(const ExcitationConfig& cfg, Axis a) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    switch (a) {
    case Axis::FLow: return cfg.low_tone().frequency;
    case Axis::ALow: return si_to_oersted(cfg.low_tone().amplitude);
    case Axis::FHigh: return cfg.is_dual() ? cfg.high_tone().frequency : nan;
    case Axis::AHigh: return cfg.is_dual() ? si_to_oersted(cfg.high_tone().amplitude) : nan;
    }
    return nan;
}

// Axes along which the grid takes more than one value, in f_L, A_L, f_H, A_H order.
inline std::vector<Axis> swept_axes(const SweepResult& result) {
    std::vector<Axis> out;
    for (Axis a : kAllAxes) {
        std::vector<double> seen;
        for (const auto& row : result.rows) {
            const double v = axis_value(row.excitation, a);
            if (std::isfinite(v) && std::find(seen.begin(), seen.end(), v) == seen.end()) seen.push_back(v);
        }
        if (seen.size() > 1) out.push_back(a);
    }
    return out;
}

enum class Trend { Increasing, Decreasing, Flat, NonMonotone, Undetermined };

inline const char* to_string(Trend t) {
    switch (t) {
    case Trend::Increasing: return "increasing";
    case Trend::Decreasing: return "decreasing";
    case Trend::Flat: return "flat";
    case Trend::NonMonotone: return "non-monotone";
    case Trend::Undetermined: return "undetermined";
    }
    return "?";
}

inline constexpr double kTrendRelativeTolerance = 1e-6;

// Direction of `values` ordered by ascending `xs`. Steps smaller than
// rel_tol * max|value| count as no change; NaN entries are skipped.
inline Trend classify_trend(std::vector<double> xs, std::vector<double> values,
                            double rel_tol = kTrendRelativeTolerance) {
    require(xs.size() == values.size(), "classify_trend needs matching x and value counts");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (std::isfinite(values[i])) pts.emplace_back(xs[i], values[i]);
    if (pts.size() < 2) return Trend::Undetermined;
    std::sort(pts.begin(), pts.end());
    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, std::abs(p.second));
    const double tol = rel_tol * scale;
    bool up = false, down = false, level = false;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = pts[i].second - pts[i - 1].second;
        if (d > tol) up = true;
        else if (d < -tol) down = true;
        else level = true;
    }
    if (!up && !down) return Trend::Flat;
    if (up && down) return Trend::NonMonotone;
    if (level) return Trend::NonMonotone;
    return up ? Trend::Increasing : Trend::Decreasing;
}

enum class Quantity { AmplitudeUnbound, AmplitudeBound, Delta };

inline const char* to_string(Quantity q) {
    switch (q) {
    case Quantity::AmplitudeUnbound: return "amplitude_unbound";
    case Quantity::AmplitudeBound: return "amplitude_bound";
    case Quantity::Delta: return "delta_pct";
    }
    return "?";
}

inline double row_value(const SweepRow& row, Quantity q, std::size_t slot) {
    const auto& v = q == Quantity::AmplitudeUnbound ? row.amplitude_unbound
                    : q == Quantity::AmplitudeBound ? row.amplitude_bound
                                                    : row.delta_percent;
    return slot < v.size() ? v[slot] : std::numeric_limits<double>::quiet_NaN();
}

struct ArgmaxEntry {
    std::string particle;
    BindingState state = BindingState::Unbound;
    int harmonic = 3;
    std::size_t grid_index = 0;
    std::map<std::string, double> coordinates;
    double amplitude = 0.0;
};

struct MonotonicityEntry {
    std::string particle;
    Quantity quantity = Quantity::Delta;
    int harmonic = 3;
    Axis axis = Axis::FLow;
    std::map<std::string, double> fixed; // other swept axes held at these values
    Trend trend = Trend::Undetermined;
};

struct DeltaOrderingEntry {
    std::size_t grid_index = 0;
    int harmonic = 3;
    std::map<std::string, double> coordinates;
    std::vector<std::pair<std::string, double>> ranking; // descending delta
};

struct ReferenceExpectation {
    std::string particle;
    BindingState state = BindingState::Unbound;
    int harmonic = 3;
    double a_l_oe = 0.0;
    double a_h_oe = 0.0;
    std::optional<bool> simulated_agrees; // set when the result covers that grid
};

struct PerMoleEntry {
    std::string particle;
    int harmonic = 3;
    std::size_t grid_index = 0;
    double amplitude_per_umol = 0.0;
};

struct TrendReport {
    std::string plan_name;
    std::vector<Axis> axes;
    std::vector<ArgmaxEntry> argmax;
    std::vector<MonotonicityEntry> monotonicity;
    std::vector<DeltaOrderingEntry> delta_ordering;
    std::vector<ReferenceExpectation> reference;
    std::vector<PerMoleEntry> per_mole_bound;
    std::vector<std::string> notes;
};

// Measured combinations (A_L, A_H) giving the largest sideband amplitude in
// the two-tone amplitude sweep.
inline std::vector<ReferenceExpectation> measured_amplitude_argmax() {
    using B = BindingState;
    return {
        {"SHS30", B::Unbound, 3, 125.0, 25.0, std::nullopt},   {"SHS30", B::Unbound, 5, 125.0, 25.0, std::nullopt},
        {"SHS30", B::Bound, 3, 250.0, 25.0, std::nullopt},     {"SHS30", B::Bound, 5, 250.0, 25.0, std::nullopt},
        {"SuperMag50", B::Unbound, 3, 62.5, 25.0, std::nullopt}, {"SuperMag50", B::Unbound, 5, 125.0, 25.0, std::nullopt},
        {"SuperMag50", B::Bound, 3, 62.5, 25.0, std::nullopt}, {"SuperMag50", B::Bound, 5, 125.0, 25.0, std::nullopt},
    };
}

namespace detail {

inline std::vector<std::string> particles_in_order(const SweepResult& result) {
    std::vector<std::string> names;
    for (const auto& row : result.rows)
        if (std::find(names.begin(), names.end(), row.particle) == names.end()) names.push_back(row.particle);
    return names;
}

inline std::map<std::string, double> coordinates(const ExcitationConfig& cfg, const std::vector<Axis>& axes) {
    std::map<std::string, double> out;
    for (Axis a : axes) out[axis_key(a)] = axis_value(cfg, a);
    return out;
}

inline bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

} // namespace detail

inline TrendReport trend_report(const SweepResult& result, const Catalog* catalog = nullptr) {
    require(!result.rows.empty(), "trend_report needs a non-empty result");
    TrendReport rep;
    rep.plan_name = result.plan_name;
    rep.axes = swept_axes(result);
    const auto particles = detail::particles_in_order(result);

    for (const auto& particle : particles) {
        std::vector<const SweepRow*> rows;
        for (const auto& r : result.rows)
            if (r.particle == particle) rows.push_back(&r);

        for (std::size_t slot = 0; slot < result.harmonics.size(); ++slot) {
            const int k = result.harmonics[slot];
            for (const auto state : {BindingState::Unbound, BindingState::Bound}) {
                const auto q = state == BindingState::Unbound ? Quantity::AmplitudeUnbound : Quantity::AmplitudeBound;
                const SweepRow* best = nullptr;
                for (const auto* r : rows) {
                    const double v = row_value(*r, q, slot);
                    if (std::isfinite(v) && (!best || v > row_value(*best, q, slot))) best = r;
                }
                if (!best) continue;
                rep.argmax.push_back({particle, state, k, best->grid_index,
                                      detail::coordinates(best->excitation, rep.axes), row_value(*best, q, slot)});
            }

            for (const auto q : {Quantity::AmplitudeUnbound, Quantity::AmplitudeBound, Quantity::Delta}) {
                for (Axis axis : rep.axes) {
                    // Group rows by their coordinates on the other swept axes.
                    std::map<std::map<std::string, double>, std::pair<std::vector<double>, std::vector<double>>> lines;
                    for (const auto* r : rows) {
                        std::map<std::string, double> key;
                        for (Axis other : rep.axes)
                            if (other != axis) key[axis_key(other)] = axis_value(r->excitation, other);
                        auto& line = lines[key];
                        line.first.push_back(axis_value(r->excitation, axis));
                        line.second.push_back(row_value(*r, q, slot));
                    }
                    for (const auto& [fixed, line] : lines)
                        rep.monotonicity.push_back({particle, q, k, axis, fixed, classify_trend(line.first, line.second)});
                }
            }
        }
    }

    // Percent-drop ranking across particles at each grid point.
    if (particles.size() > 1) {
        std::map<std::size_t, std::vector<const SweepRow*>> by_point;
        for (const auto& r : result.rows) by_point[r.grid_index].push_back(&r);
        for (const auto& [index, rows] : by_point) {
            for (std::size_t slot = 0; slot < result.harmonics.size(); ++slot) {
                DeltaOrderingEntry e;
                e.grid_index = index;
                e.harmonic = result.harmonics[slot];
                e.coordinates = detail::coordinates(rows.front()->excitation, rep.axes);
                for (const auto* r : rows) e.ranking.emplace_back(r->particle, row_value(*r, Quantity::Delta, slot));
                std::stable_sort(e.ranking.begin(), e.ranking.end(),
                                 [](const auto& a, const auto& b) { return a.second > b.second; });
                rep.delta_ordering.push_back(std::move(e));
            }
        }
    }

    // Reference combinations apply to the two-tone amplitude grid only.
    const bool amplitude_grid = result.mode == HarmonicMode::DualFrequency && rep.axes.size() == 2 &&
                                rep.axes[0] == Axis::ALow && rep.axes[1] == Axis::AHigh;
    if (amplitude_grid) {
        rep.reference = measured_amplitude_argmax();
        for (auto& ref : rep.reference) {
            for (const auto& a : rep.argmax) {
                if (a.particle != ref.particle || a.state != ref.state || a.harmonic != ref.harmonic) continue;
                ref.simulated_agrees = detail::near(a.coordinates.at("a_l_oe"), ref.a_l_oe) &&
                                       detail::near(a.coordinates.at("a_h_oe"), ref.a_h_oe);
            }
        }
    }

    if (catalog) {
        for (const auto& r : result.rows) {
            const auto vial = catalog->vials.find(r.particle);
            if (vial == catalog->vials.end()) continue;
            for (std::size_t slot = 0; slot < result.harmonics.size(); ++slot) {
                const double a = row_value(r, Quantity::AmplitudeBound, slot);
                if (!std::isfinite(a)) continue;
                rep.per_mole_bound.push_back(
                    {r.particle, result.harmonics[slot], r.grid_index, per_mole_amplitude(a, vial->second.molar_amount)});
            }
        }
    }

    for (const auto& r : result.rows)
        if (!r.flag.empty())
            rep.notes.push_back(r.particle + " grid point " + std::to_string(r.grid_index) + " flagged " + r.flag);
    return rep;
}

inline nlohmann::json to_json(const TrendReport& rep) {
    using nlohmann::json;
    json out;
    out["plan"] = rep.plan_name;
    out["swept_axes"] = json::array();
    for (Axis a : rep.axes) out["swept_axes"].push_back(axis_key(a));

    out["argmax"] = json::array();
    for (const auto& a : rep.argmax)
        out["argmax"].push_back({{"particle", a.particle},
                                 {"state", to_string(a.state)},
                                 {"harmonic", a.harmonic},
                                 {"grid_index", a.grid_index},
                                 {"coordinates", a.coordinates},
                                 {"amplitude", a.amplitude}});

    out["monotonicity"] = json::array();
    for (const auto& m : rep.monotonicity)
        out["monotonicity"].push_back({{"particle", m.particle},
                                       {"quantity", to_string(m.quantity)},
                                       {"harmonic", m.harmonic},
                                       {"axis", axis_key(m.axis)},
                                       {"fixed", m.fixed},
                                       {"verdict", to_string(m.trend)}});

    out["delta_ordering"] = json::array();
    for (const auto& d : rep.delta_ordering) {
        json ranking = json::array();
        for (const auto& [p, v] : d.ranking) ranking.push_back({{"particle", p}, {"delta_pct", v}});
        out["delta_ordering"].push_back(
            {{"grid_index", d.grid_index}, {"harmonic", d.harmonic}, {"coordinates", d.coordinates}, {"ranking", ranking}});
    }

    out["reference_expectations"] = json::array();
    for (const auto& r : rep.reference) {
        json e{{"particle", r.particle},
               {"state", to_string(r.state)},
               {"harmonic", r.harmonic},
               {"a_l_oe", r.a_l_oe},
               {"a_h_oe", r.a_h_oe},
               {"asserted", false}};
        e["simulated_agrees"] = r.simulated_agrees ? json(*r.simulated_agrees) : json(nullptr);
        out["reference_expectations"].push_back(e);
    }

    out["per_umol_bound"] = json::array();
    for (const auto& p : rep.per_mole_bound)
        out["per_umol_bound"].push_back({{"particle", p.particle},
                                         {"harmonic", p.harmonic},
                                         {"grid_index", p.grid_index},
                                         {"amplitude_per_umol", p.amplitude_per_umol}});
    out["notes"] = rep.notes;
    return out;
}

} // namespace mpsbench
