/*
 * Copyright (C) 2026 renewal-sis contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "renewal_sis/solver.hpp"
#include "renewal_sis/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace rsis
{

namespace
{

constexpr double clamp_tol       = 1e-12;
constexpr double stage_tol       = 1e-9;
constexpr double newton_tol      = 1e-12;
constexpr int newton_max_iter    = 50;
constexpr double dde_compat_tol  = 1e-6;
constexpr double roundoff_diff   = 1e-13;

double infection_pressure(double x)
{
    return x * (1.0 - x);
}

// Nonzero weights with delay index j >= 1.
struct DelayTail {
    std::vector<int> lag;
    std::vector<double> weight;

    explicit DelayTail(const std::vector<double>& w)
    {
        for (std::size_t j = 1; j < w.size(); ++j) {
            if (w[j] != 0.0) {
                lag.push_back(static_cast<int>(j));
                weight.push_back(w[j]);
            }
        }
    }

    // sum_j w_j g[idx - j]
    double apply(const std::vector<double>& g, std::size_t idx) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < lag.size(); ++i) {
            s += weight[i] * g[idx - lag[i]];
        }
        return s;
    }
};

std::size_t step_count(double horizon, int n)
{
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ConfigError(fmt::format("horizon T must be > 0, got {}", horizon));
    }
    if (n < 8) {
        throw ConfigError(fmt::format("steps per unit N must be >= 8, got {}", n));
    }
    return static_cast<std::size_t>(std::ceil(horizon * n - 1e-9));
}

// Maps x into [0,1] when it is within tol of the boundary; counts the adjustment.
double bounded(double x, double tol, int& clamps, double t)
{
    if (!std::isfinite(x)) {
        throw NumericError(fmt::format("non-finite value at t = {}", t));
    }
    if (x < 0.0 || x > 1.0) {
        if (x < -tol || x > 1.0 + tol) {
            throw NumericError(fmt::format("value {} left [0,1] at t = {}", x, t));
        }
        ++clamps;
        return std::clamp(x, 0.0, 1.0);
    }
    return x;
}

} // namespace

std::string_view to_string(SolverId id)
{
    return id == SolverId::renewal ? "renewal" : "dde";
}

Trajectory::Trajectory(ModelParams params, History history, SolverId solver, std::vector<double> values,
                       int clamp_events)
    : m_params(std::move(params))
    , m_history(std::move(history))
    , m_solver(solver)
    , m_values(std::move(values))
    , m_clamp_events(clamp_events)
{
}

double Trajectory::value_at(double t) const
{
    if (t < 0.0) {
        return m_history.value(t);
    }
    const double x = t * steps_per_unit();
    const auto last = static_cast<double>(m_values.size() - 1);
    if (x > last + 1e-9) {
        throw ConfigError(fmt::format("time {} beyond horizon {}", t, horizon()));
    }
    const auto k = static_cast<std::size_t>(std::clamp(std::floor(x), 0.0, std::max(0.0, last - 1.0)));
    if (k + 1 >= m_values.size()) {
        return m_values.back();
    }
    const double frac = std::clamp(x - static_cast<double>(k), 0.0, 1.0);
    return (1.0 - frac) * m_values[k] + frac * m_values[k + 1];
}

double default_horizon(double r0)
{
    return 50.0 / std::max(std::abs(r0 - 1.0), 0.05);
}

Trajectory solve_renewal(const ModelParams& params, const History& history, double horizon, int n)
{
    const std::size_t steps = step_count(horizon, n);
    History hist            = history.at_resolution(params, n);

    const DelayWeights weights = delay_weights(params, n);
    const DelayTail tail(weights.riemann);
    const double beta = params.beta();
    const double a0   = beta * weights.riemann[0];

    // combined buffer: index i <-> time (i - n)/n
    std::vector<double> y(hist.samples().begin(), hist.samples().end());
    y.reserve(y.size() + steps);
    std::vector<double> g(y.size());
    std::transform(y.begin(), y.end(), g.begin(), infection_pressure);
    g.reserve(y.capacity());

    int clamps = 0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const std::size_t idx = static_cast<std::size_t>(n) + k;
        const double t        = static_cast<double>(k) / n;
        const double b        = beta * tail.apply(g, idx);

        auto residual = [&](double x) {
            return x - a0 * infection_pressure(x) - b;
        };
        double x       = y[idx - 1];
        double f       = residual(x);
        bool converged = std::abs(f) == 0.0;
        for (int it = 0; it < newton_max_iter && !converged; ++it) {
            const double slope = 1.0 - a0 * (1.0 - 2.0 * x);
            const double dx    = -f / slope;
            double damping     = 1.0;
            double xn          = x + dx;
            double fn          = residual(xn);
            while (std::abs(fn) > std::abs(f) && damping > 1e-6) {
                damping *= 0.5;
                xn = x + damping * dx;
                fn = residual(xn);
            }
            converged = std::abs(xn - x) < newton_tol || fn == 0.0;
            x         = xn;
            f         = fn;
        }
        if (!converged) {
            throw NumericError(fmt::format("Newton iteration did not converge at t = {}", t));
        }
        x = bounded(x, clamp_tol, clamps, t);
        y.push_back(x);
        g.push_back(infection_pressure(x));
    }

    std::vector<double> values(y.begin() + n, y.end());
    return Trajectory(params, std::move(hist), SolverId::renewal, std::move(values), clamps);
}

Trajectory solve_dde(const ModelParams& params, const History& history, double horizon, int n)
{
    const std::size_t steps = step_count(horizon, n);
    History hist            = history.at_resolution(params, n);
    if (!(hist.compat_residual() < dde_compat_tol)) {
        throw ConfigError(fmt::format(
            "history violates psi(0) = G(psi) by {} (limit {}); project it before using the dde solver",
            hist.compat_residual(), dde_compat_tol));
    }

    const DelayWeights weights = delay_weights(params, n);
    const DelayTail tail(weights.stieltjes);
    const double beta = params.beta();
    const double mu   = params.mu();
    const double v0   = weights.stieltjes[0];
    const double dt   = 1.0 / n;

    auto rhs = [&](double now, double delayed) {
        return beta * infection_pressure(now) * (1.0 + v0) + beta * delayed - mu * now;
    };

    std::vector<double> y(hist.samples().begin(), hist.samples().end());
    y.reserve(y.size() + steps);
    std::vector<double> g(y.size());
    std::transform(y.begin(), y.end(), g.begin(), infection_pressure);
    g.reserve(y.capacity());

    int clamps = 0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const std::size_t idx = static_cast<std::size_t>(n) + k - 1;
        const double t        = static_cast<double>(k) / n;
        const double k1       = rhs(y[idx], tail.apply(g, idx));
        const double stage    = y[idx] + dt * k1;
        if (!std::isfinite(stage) || stage < -stage_tol || stage > 1.0 + stage_tol) {
            throw NumericError(fmt::format("predictor stage {} left [0,1] at t = {}", stage, t));
        }
        // lags j >= 1 from idx + 1 only touch known values
        const double k2 = rhs(stage, tail.apply(g, idx + 1));

        const double x = bounded(y[idx] + 0.5 * dt * (k1 + k2), stage_tol, clamps, t);
        y.push_back(x);
        g.push_back(infection_pressure(x));
    }

    std::vector<double> values(y.begin() + n, y.end());
    return Trajectory(params, std::move(hist), SolverId::dde, std::move(values), clamps);
}

Trajectory solve(SolverId id, const ModelParams& params, const History& history, double horizon, int n)
{
    return id == SolverId::renewal ? solve_renewal(params, history, horizon, n)
                                   : solve_dde(params, history, horizon, n);
}

double max_difference(const Trajectory& a, const Trajectory& b, double t_from)
{
    const Trajectory& coarse = a.steps_per_unit() <= b.steps_per_unit() ? a : b;
    const Trajectory& fine   = a.steps_per_unit() <= b.steps_per_unit() ? b : a;
    const int nc             = coarse.steps_per_unit();
    const int nf             = fine.steps_per_unit();
    if (nf % nc != 0) {
        throw ConfigError(fmt::format("grids with {} and {} steps per unit are not nested", nc, nf));
    }
    const std::size_t ratio = static_cast<std::size_t>(nf / nc);
    double diff             = 0.0;
    for (std::size_t k = 0; k < coarse.values().size(); ++k) {
        const std::size_t kf = k * ratio;
        if (kf >= fine.values().size()) {
            break;
        }
        if (coarse.time(k) < t_from - 1e-12) {
            continue;
        }
        diff = std::max(diff, std::abs(coarse.values()[k] - fine.values()[kf]));
    }
    return diff;
}

RefinementReport refine_and_order(const ModelParams& params, const History& history, double horizon, int n,
                                  SolverId solver)
{
    const Trajectory coarse = solve(solver, params, history, horizon, n);
    const Trajectory mid    = solve(solver, params, history, horizon, 2 * n);
    const Trajectory fine   = solve(solver, params, history, horizon, 4 * n);

    RefinementReport report{solver, n, {max_difference(coarse, mid), max_difference(mid, fine)}, 0.0, std::nullopt};
    report.max_diff = std::max(report.diffs[0], report.diffs[1]);
    if (report.diffs[0] > roundoff_diff && report.diffs[1] > 0.0) {
        report.empirical_order = std::log2(report.diffs[0] / report.diffs[1]);
    }
    return report;
}

std::vector<Crossing> crossing_times(std::span<const double> values, double t0, double dt, double level)
{
    std::vector<Crossing> out;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        const double lo = values[k];
        const double hi = values[k + 1];
        const bool up   = lo < level && hi >= level;
        const bool down = lo >= level && hi < level;
        if (!up && !down) {
            continue;
        }
        const double frac = (level - lo) / (hi - lo);
        out.push_back({t0 + (static_cast<double>(k) + frac) * dt, up ? Crossing::Direction::up : Crossing::Direction::down});
    }
    return out;
}

std::vector<Crossing> crossing_times(const Trajectory& trajectory, double level)
{
    return crossing_times(trajectory.values(), 0.0, trajectory.dt(), level);
}

} // namespace rsis
