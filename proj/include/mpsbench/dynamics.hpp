#pragma once

// Debye relaxation toward a field-dependent equilibrium,
//
//     dm/dt = (m_eq(H(t)) - m) / tau,
//
// integrated with a fixed step that lands exactly on the field's sample grid.
// Because the forcing m_eq(H(t)) is known in advance the equation is linear in
// m, so the default scheme integrates the relaxation factor exactly and only
// interpolates the forcing (cubic, four nodes per step). That keeps it stable
// and fourth order for any tau, including tau far below the sample spacing.
// Classical RK4 is kept for cross-checks in the non-stiff regime.

#include "mpsbench/error.hpp"
#include "mpsbench/excitation.hpp"
#include "mpsbench/physics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace mpsbench {

enum class IntegrationScheme { Exponential, RungeKutta4 };

struct SolverOptions {
    int step_divisor = 200;     // substeps per period of the fastest tone
    int warmup_records = 2;     // leading base periods discarded
    double periodicity_tol = 1e-4;
    IntegrationScheme scheme = IntegrationScheme::Exponential;

    void validate() const {
        require(step_divisor >= 10, "step_divisor must be >= 10");
        require(warmup_records >= 1, "warmup_records must be >= 1");
        require(periodicity_tol > 0.0, "periodicity_tol must be positive");
    }
};

struct MagSeries {
    std::vector<double> samples; // A·m²/kg (or whatever unit the equilibrium returns)
    double sample_rate = 0.0;
    std::int64_t base_period_samples = 0;

    std::size_t size() const noexcept { return samples.size(); }
};

struct DebyeResponse {
    double gain;
    double phase_lag; // rad
};

inline DebyeResponse debye_linear_response(double chi0, double tau, double omega) {
    require(tau >= 0.0, "tau must be non-negative");
    require(omega > 0.0, "omega must be positive");
    const double wt = omega * tau;
    return {chi0 / std::sqrt(1.0 + wt * wt), std::atan(wt)};
}

// Relative RMS difference between the last two base periods.
template <UniformSeries S>
double steady_state_residual(const S& series) {
    const auto p = static_cast<std::size_t>(series.base_period_samples);
    require(p > 0 && series.samples.size() >= 2 * p, "steady_state_residual needs at least two records");
    const auto last = series.samples.end() - static_cast<std::ptrdiff_t>(p);
    const auto prev = last - static_cast<std::ptrdiff_t>(p);
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        const double a = prev[static_cast<std::ptrdiff_t>(i)];
        const double b = last[static_cast<std::ptrdiff_t>(i)];
        diff += (b - a) * (b - a);
        ref += b * b;
    }
    if (diff == 0.0) return 0.0;
    if (ref == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(diff / ref);
}

namespace detail {

// Coefficients c[i][k] of the Lagrange basis polynomial l_i(v) = sum_k c[i][k] v^k
// on the nodes v = 0, 1/3, 2/3, 1.
inline const std::array<std::array<double, 4>, 4>& cubic_lagrange_coefficients() {
    static const auto table = [] {
        std::array<std::array<double, 4>, 4> c{};
        constexpr std::array<double, 4> nodes{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
        for (std::size_t i = 0; i < 4; ++i) {
            std::array<double, 4> poly{1.0, 0.0, 0.0, 0.0};
            double denom = 1.0;
            for (std::size_t j = 0; j < 4; ++j) {
                if (j == i) continue;
                std::array<double, 4> next{};
                for (std::size_t k = 0; k < 4; ++k) {
                    if (k + 1 < 4) next[k + 1] += poly[k];
                    next[k] -= nodes[j] * poly[k];
                }
                poly = next;
                denom *= nodes[i] - nodes[j];
            }
            for (std::size_t k = 0; k < 4; ++k) c[i][k] = poly[k] / denom;
        }
        return c;
    }();
    return table;
}

// I_k(z) = integral_0^1 z exp(-z v) v^k dv for k = 0..3.
inline std::array<double, 4> exponential_moments(double z) {
    std::array<double, 4> moments{};
    if (z <= 1.0) {
        for (int k = 0; k < 4; ++k) {
            double sum = 0.0, term = 1.0; // term = (-z)^n / n!
            for (int n = 0; n < 60; ++n) {
                const double contrib = term / static_cast<double>(n + k + 1);
                sum += contrib;
                if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
                term *= -z / static_cast<double>(n + 1);
            }
            moments[static_cast<std::size_t>(k)] = z * sum;
        }
    } else {
        const double e = std::exp(-z);
        moments[0] = -std::expm1(-z);
        for (int k = 1; k < 4; ++k)
            moments[static_cast<std::size_t>(k)] = static_cast<double>(k) / z * moments[static_cast<std::size_t>(k - 1)] - e;
    }
    return moments;
}

struct ExponentialWeights {
    double decay;               // exp(-h / tau)
    std::array<double, 4> w{}; // weights for forcing at u = 1, 2/3, 1/3, 0 of the step
};

inline ExponentialWeights exponential_weights(double z) {
    ExponentialWeights out;
    out.decay = std::exp(-z);
    const auto moments = exponential_moments(z);
    const auto& c = cubic_lagrange_coefficients();
    for (std::size_t i = 0; i < 4; ++i) {
        double w = 0.0;
        for (std::size_t k = 0; k < 4; ++k) w += c[i][k] * moments[k];
        out.w[i] = w;
    }
    return out;
}

inline double fastest_frequency(const FieldSeries& field) {
    double f = 0.0;
    for (const auto& c : field.components) f = std::max(f, static_cast<double>(c.frequency_hz));
    return f > 0.0 ? f : field.sample_rate / kMinSamplesPerCycle;
}

} // namespace detail

// Generic relaxation run. `equilibrium` maps field (A/m) to the equilibrium
// value; tau may be 0 (instantaneous) or +inf (frozen at m_eq(H(0))).
// Output holds the records after warm-up, clamped to +-bound.
template <typename Equilibrium>
MagSeries simulate_relaxation(Equilibrium&& equilibrium, double tau, const FieldSeries& field, const SolverOptions& opts,
                              double bound = std::numeric_limits<double>::infinity()) {
    opts.validate();
    require(tau >= 0.0, "relaxation time must be non-negative");
    const auto period = field.base_period_samples;
    require(period > 0 && field.samples.size() % static_cast<std::size_t>(period) == 0,
            "field length must be a whole number of base periods");
    const auto n_total = static_cast<std::int64_t>(field.samples.size());
    const auto n_records = n_total / period;
    require(n_records > opts.warmup_records, "need more records than warm-up records");

    const double dt = 1.0 / field.sample_rate;
    double h_max = 1.0 / (static_cast<double>(opts.step_divisor) * detail::fastest_frequency(field));
    if (opts.scheme == IntegrationScheme::RungeKutta4 && std::isfinite(tau) && tau > 0.0)
        h_max = std::min(h_max, tau / static_cast<double>(opts.step_divisor));
    const auto substeps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(dt / h_max - 1e-12)));
    require(static_cast<double>(substeps) * static_cast<double>(n_total) < 4e9,
            "step count too large for this scheme; use the exponential scheme");
    const double h = dt / static_cast<double>(substeps);
    const double inv_sub = 1.0 / static_cast<double>(substeps);

    std::vector<double> m(static_cast<std::size_t>(n_total));
    if (tau == 0.0) {
        for (std::int64_t n = 0; n < n_total; ++n) m[static_cast<std::size_t>(n)] = equilibrium(field.value_at(n, 0.0));
    } else if (std::isinf(tau)) {
        std::fill(m.begin(), m.end(), equilibrium(field.value_at(0, 0.0)));
    } else if (opts.scheme == IntegrationScheme::Exponential) {
        const auto weights = detail::exponential_weights(h / tau);
        double state = equilibrium(field.value_at(0, 0.0));
        double f_start = state;
        for (std::int64_t n = 0; n < n_total; ++n) {
            m[static_cast<std::size_t>(n)] = state;
            for (std::int64_t s = 0; s < substeps; ++s) {
                const double base = static_cast<double>(s);
                const double f1 = equilibrium(field.value_at(n, (base + 1.0 / 3.0) * inv_sub));
                const double f2 = equilibrium(field.value_at(n, (base + 2.0 / 3.0) * inv_sub));
                const double f_end = equilibrium(field.value_at(n, (base + 1.0) * inv_sub));
                state = weights.decay * state + weights.w[0] * f_end + weights.w[1] * f2 + weights.w[2] * f1 +
                        weights.w[3] * f_start;
                f_start = f_end;
            }
        }
    } else {
        const double inv_tau = 1.0 / tau;
        double state = equilibrium(field.value_at(0, 0.0));
        double f_start = state;
        for (std::int64_t n = 0; n < n_total; ++n) {
            m[static_cast<std::size_t>(n)] = state;
            for (std::int64_t s = 0; s < substeps; ++s) {
                const double base = static_cast<double>(s);
                const double f_mid = equilibrium(field.value_at(n, (base + 0.5) * inv_sub));
                const double f_end = equilibrium(field.value_at(n, (base + 1.0) * inv_sub));
                const double k1 = (f_start - state) * inv_tau;
                const double k2 = (f_mid - (state + 0.5 * h * k1)) * inv_tau;
                const double k3 = (f_mid - (state + 0.5 * h * k2)) * inv_tau;
                const double k4 = (f_end - (state + h * k3)) * inv_tau;
                state += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                f_start = f_end;
            }
        }
    }

    MagSeries out;
    out.sample_rate = field.sample_rate;
    out.base_period_samples = period;
    out.samples.assign(m.begin() + opts.warmup_records * period, m.end());
    if (std::isfinite(bound))
        for (auto& v : out.samples) v = std::clamp(v, -bound, bound);

    if (n_records - opts.warmup_records >= 2) {
        const double residual = steady_state_residual(out);
        if (residual > opts.periodicity_tol)
            fail(ErrorCode::NonPeriodicSteadyState, "last two records differ by " + std::to_string(residual) +
                                                         " (relative RMS); increase warmup_records");
    }
    return out;
}

inline MagSeries simulate_magnetization(const ParticleModel& model, const Environment& env, BindingState binding,
                                        const FieldSeries& field, const SolverOptions& opts = {}) {
    model.validate();
    env.validate();
    const double tau = relaxation_time(model, env, binding);
    const double scale = langevin_scale(model, env);
    const double m_sat = model.m_sat;
    return simulate_relaxation([=](double h) { return m_sat * langevin(scale * h); }, tau, field, opts, m_sat);
}

} // namespace mpsbench
