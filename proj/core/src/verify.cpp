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
#include "renewal_sis/verify.hpp"
#include "renewal_sis/error.hpp"
#include "renewal_sis/spectral.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace rsis
{

namespace
{

constexpr double threshold_slack   = 1e-12;
constexpr double majorant_tol      = 1e-4;
constexpr double extinction_level  = 1e-3;
constexpr double trapping_tol      = 1e-6;
constexpr double derivative_band   = 1e-3;
constexpr double derivative_slack  = 1e-3;
constexpr double convergence_tol   = 1e-4;

void require(bool ok, std::string_view what)
{
    if (!ok) {
        throw ConfigError(std::string(what));
    }
}

} // namespace

std::string_view to_string(TheoremId id)
{
    switch (id) {
    case TheoremId::gas1:
        return "gas1";
    case TheoremId::las:
        return "LAS";
    case TheoremId::persistence:
        return "persistence";
    case TheoremId::inv1:
        return "inv1";
    case TheoremId::inv2:
        return "inv2";
    case TheoremId::ga1:
        return "ga1";
    case TheoremId::ga2:
        return "ga2";
    case TheoremId::gas:
        return "gas";
    }
    return "unknown";
}

std::string_view to_string(Regime regime)
{
    switch (regime) {
    case Regime::extinction:
        return "R0<=1";
    case Regime::low:
        return "1<R0<=2";
    case Regime::high:
        return "R0>2";
    }
    return "unknown";
}

Regime regime_of(double r0)
{
    if (r0 <= 1.0 + threshold_slack) {
        return Regime::extinction;
    }
    if (r0 <= 2.0 + threshold_slack) {
        return Regime::low;
    }
    return Regime::high;
}

std::vector<double> dfe_majorant(double r0, int count)
{
    if (count < 0) {
        throw ConfigError(fmt::format("majorant length must be >= 0, got {}", count));
    }
    std::vector<double> m(static_cast<std::size_t>(count) + 1);
    m[0] = 0.25;
    for (int i = 1; i <= count; ++i) {
        m[i] = r0 * m[i - 1] * (1.0 - m[i - 1]);
    }
    return m;
}

double verification_horizon(double r0)
{
    // slow transients near R0 = 1; oscillatory decay for large R0
    return std::max(default_horizon(r0), 200.0);
}

TheoremVerdict check_gas1(const ModelParams& params, const Trajectory& trajectory)
{
    require(regime_of(params.r0()) == Regime::extinction, "gas1 check needs R0 <= 1");
    TheoremVerdict v{TheoremId::gas1};
    v.tolerances = {{"majorant_slack", majorant_tol}, {"terminal_level", extinction_level}};

    const auto& values   = trajectory.values();
    const double horizon = trajectory.horizon();
    const auto majorant  = dfe_majorant(params.r0(), static_cast<int>(std::floor(horizon)) + 1);

    v.pass = true;
    double worst_margin = -1.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double t     = trajectory.time(k);
        const double bound = majorant[static_cast<std::size_t>(std::floor(t + 1e-12))];
        const double margin = values[k] - bound;
        if (margin > worst_margin) {
            worst_margin = margin;
        }
        if (margin > majorant_tol && v.pass) {
            v.pass              = false;
            v.witness["time"]   = t;
            v.witness["value"]  = values[k];
            v.witness["bound"]  = bound;
        }
    }
    v.witness["max_excess_over_majorant"] = worst_margin;
    v.witness["terminal_value"]           = values.back();

    const bool at_threshold = std::abs(params.r0() - 1.0) <= threshold_slack;
    if (!at_threshold && !(values.back() < extinction_level)) {
        v.pass = false;
        v.summary = fmt::format("I(T) = {:.3e} did not fall below {}", values.back(), extinction_level);
    }
    else if (!v.pass) {
        v.summary = fmt::format("I({}) = {:.6g} exceeds majorant {:.6g}", v.witness["time"], v.witness["value"],
                                v.witness["bound"]);
    }
    else {
        v.summary = at_threshold ? "majorant bound holds (R0 = 1: terminal decay not asserted)"
                                 : "majorant bound holds and I(T) decayed";
    }
    return v;
}

TheoremVerdict check_gas1(const ModelParams& params, const History& history, double horizon, int n)
{
    require(regime_of(params.r0()) == Regime::extinction, "gas1 check needs R0 <= 1");
    return check_gas1(params, solve_renewal(params, history, horizon, n));
}

TheoremVerdict check_inv1(const ModelParams& params, const Trajectory& trajectory)
{
    require(regime_of(params.r0()) == Regime::low, "inv1 check needs 1 < R0 <= 2");
    TheoremVerdict v{TheoremId::inv1};
    v.tolerances       = {{"slack", trapping_tol}};
    const auto& values = trajectory.values();
    const auto it      = std::max_element(values.begin(), values.end());
    const auto k       = static_cast<std::size_t>(it - values.begin());
    v.witness["max_value"] = *it;
    v.witness["time"]      = trajectory.time(k);
    v.pass                 = *it <= 0.5 + trapping_tol;
    v.summary = v.pass ? fmt::format("I(t) <= 1/2 for t >= 0 (max {:.6g})", *it)
                       : fmt::format("I({}) = {:.9g} exceeds 1/2", trajectory.time(k), *it);
    return v;
}

TheoremVerdict check_inv2(const ModelParams& params, const Trajectory& trajectory)
{
    require(regime_of(params.r0()) == Regime::high, "inv2 check needs R0 > 2");
    TheoremVerdict v{TheoremId::inv2};
    v.tolerances = {{"return_slack", trapping_tol}, {"derivative_band", derivative_band},
                    {"derivative_slack", derivative_slack}};

    const auto& values     = trajectory.values();
    const auto crossings   = crossing_times(trajectory, 0.5);
    std::size_t ups        = 0;
    std::optional<double> first_up;
    for (const auto& c : crossings) {
        if (c.direction == Crossing::Direction::up) {
            ++ups;
            if (!first_up) {
                first_up = c.time;
            }
        }
    }
    v.witness["up_crossings"] = static_cast<double>(ups);
    v.pass                    = true;

    // never returns below 1/2 once above it
    std::optional<std::size_t> start;
    if (first_up) {
        v.witness["first_up_crossing"] = *first_up;
        start = static_cast<std::size_t>(std::ceil(*first_up * trajectory.steps_per_unit() - 1e-9));
    }
    else if (values.front() >= 0.5) {
        start = 0;
    }
    std::size_t downs_after = 0;
    for (const auto& c : crossings) {
        if (first_up && c.direction == Crossing::Direction::down && c.time > *first_up) {
            ++downs_after;
        }
    }
    v.witness["down_crossings_after_first_up"] = static_cast<double>(downs_after);
    if (start) {
        double min_after = 1.0;
        std::size_t at   = *start;
        for (std::size_t k = *start; k < values.size(); ++k) {
            if (values[k] < min_after) {
                min_after = values[k];
                at        = k;
            }
        }
        v.witness["min_after_crossing"] = min_after;
        if (min_after < 0.5 - trapping_tol) {
            v.pass             = false;
            v.witness["time"]  = trajectory.time(at);
            v.witness["value"] = min_after;
            v.summary = fmt::format("returned below 1/2: I({}) = {:.9g}", trajectory.time(at), min_after);
        }
    }

    if (params.mu() > 0.0) {
        const double bound = 0.5 * params.mu() * (0.5 * params.r0() - 1.0);
        v.witness["derivative_bound"] = bound;
        double min_slope              = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            if (std::abs(values[k] - 0.5) >= derivative_band) {
                continue;
            }
            const double slope = (values[k + 1] - values[k]) / trajectory.dt();
            min_slope          = std::min(min_slope, slope);
            if (slope < bound - derivative_slack && v.pass) {
                v.pass                  = false;
                v.witness["time"]       = trajectory.time(k);
                v.witness["slope"]      = slope;
                v.summary = fmt::format("slope {:.6g} at t = {} below {:.6g}", slope, trajectory.time(k), bound);
            }
        }
        if (std::isfinite(min_slope)) {
            v.witness["min_slope_near_half"] = min_slope;
        }
    }
    if (v.pass) {
        v.summary = first_up ? fmt::format("crossed 1/2 at t = {:.6g} and stayed above", *first_up)
                             : std::string("no crossing of 1/2");
    }
    return v;
}

TheoremVerdict check_persistence(const ModelParams& params, const Trajectory& trajectory, double tail_fraction)
{
    require(regime_of(params.r0()) != Regime::extinction, "persistence check needs R0 > 1");
    require(trajectory.history().positive(), "persistence check needs a positive history");
    require(tail_fraction > 0.0 && tail_fraction < 1.0, "tail fraction must lie in (0,1)");
    TheoremVerdict v{TheoremId::persistence};
    const double eq    = *endemic_equilibrium(params);
    const double delta = 0.5 * std::min(eq, 0.01);
    v.tolerances       = {{"delta", delta}, {"tail_fraction", tail_fraction}};

    const auto& values = trajectory.values();
    const auto first   = static_cast<std::size_t>(std::floor((1.0 - tail_fraction) * (values.size() - 1)));
    const auto it      = std::min_element(values.begin() + static_cast<std::ptrdiff_t>(first), values.end());
    const auto k       = static_cast<std::size_t>(it - values.begin());
    v.witness["tail_min"] = *it;
    v.witness["time"]     = trajectory.time(k);
    v.pass                = *it > delta;
    v.summary = v.pass ? fmt::format("tail minimum {:.6g} > delta {:.3g}", *it, delta)
                       : fmt::format("tail minimum {:.6g} at t = {} not above delta {:.3g}", *it, trajectory.time(k),
                                     delta);
    return v;
}

TheoremVerdict check_convergence(const ModelParams& params, const Trajectory& trajectory)
{
    const Regime regime = regime_of(params.r0());
    require(regime != Regime::extinction, "convergence check needs R0 > 1");
    require(trajectory.history().positive(), "convergence check needs a positive history");
    TheoremVerdict v{regime == Regime::low ? TheoremId::ga1 : TheoremId::ga2};
    v.tolerances = {{"window", convergence_tol}};

    const double eq    = *endemic_equilibrium(params);
    const auto& values = trajectory.values();
    const int n        = trajectory.steps_per_unit();

    std::size_t first_good = 0;
    for (std::size_t k = values.size(); k-- > 0;) {
        if (std::abs(values[k] - eq) >= convergence_tol) {
            first_good = k + 1;
            break;
        }
    }
    // last unit interval
    const std::size_t tail_start = values.size() > static_cast<std::size_t>(n) ? values.size() - 1 - n : 0;
    const auto [lo, hi] = std::minmax_element(values.begin() + static_cast<std::ptrdiff_t>(tail_start), values.end());
    double tail_dev     = 0.0;
    for (std::size_t k = tail_start; k < values.size(); ++k) {
        tail_dev = std::max(tail_dev, std::abs(values[k] - eq));
    }
    v.witness["equilibrium"]         = eq;
    v.witness["branch"]              = regime == Regime::low ? 1.0 : 2.0;
    v.witness["max_tail_deviation"]  = tail_dev;
    v.witness["tail_oscillation"]    = *hi - *lo;
    v.witness["tail_midpoint"]       = 0.5 * (*hi + *lo);

    const double tau = trajectory.time(first_good);
    v.pass           = first_good < values.size() && tau + 1.0 <= trajectory.horizon() + 1e-12;
    if (v.pass) {
        v.witness["tau"] = tau;
        v.summary        = fmt::format("|I - I*| < {:.0e} from t = {:.6g} on (I* = {:.9g})", convergence_tol, tau, eq);
    }
    else {
        v.summary = fmt::format("horizon {} too short: tail deviation {:.3e} from I* = {:.9g}", trajectory.horizon(),
                                tail_dev, eq);
    }
    return v;
}

TheoremVerdict check_las(const ModelParams& params)
{
    TheoremVerdict v{TheoremId::las};
    const SpectralReport r     = spectral_report(params);
    v.witness["c"]             = r.c;
    v.witness["bound_radius"]  = r.bound_radius;
    v.witness["rhp_root_count"] = r.rhp_root_count;
    v.witness["samples_used"]  = static_cast<double>(r.samples_used);
    if (r.dominant_real_root) {
        v.witness["dominant_real_root"] = r.dominant_real_root->root;
    }
    v.pass    = r.rhp_root_count == 0;
    v.summary = r.degenerate ? "c = 0: characteristic function vanishes, no roots"
                             : fmt::format("{} roots with Re >= 0 inside radius {:.6g}", r.rhp_root_count,
                                           r.bound_radius);
    return v;
}

std::vector<TheoremVerdict> verify_point(const ModelParams& params, const History& history, double horizon, int n)
{
    const Regime regime = regime_of(params.r0());
    const Trajectory traj = solve_renewal(params, history, horizon, n);
    std::vector<TheoremVerdict> out;
    if (regime == Regime::extinction) {
        out.push_back(check_gas1(params, traj));
        return out;
    }
    out.push_back(check_las(params));
    out.push_back(regime == Regime::low ? check_inv1(params, traj) : check_inv2(params, traj));
    if (traj.history().positive()) {
        out.push_back(check_persistence(params, traj));
        out.push_back(check_convergence(params, traj));
        TheoremVerdict gas{TheoremId::gas};
        gas.pass    = out.front().pass && out.back().pass;
        gas.summary = gas.pass ? "locally stable and globally attracting" : "LAS or convergence check failed";
        gas.witness = {{"las_pass", out.front().pass ? 1.0 : 0.0}, {"convergence_pass", out.back().pass ? 1.0 : 0.0}};
        out.push_back(gas);
    }
    return out;
}

bool SweepRow::pass() const
{
    return !error && std::all_of(verdicts.begin(), verdicts.end(), [](const TheoremVerdict& v) {
        return v.pass;
    });
}

std::vector<SweepRow> sweep(std::span<const SweepPoint> points, std::optional<double> horizon, int n, int jobs)
{
    require(!points.empty(), "sweep grid is empty");
    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            const SweepPoint& p = points[i];
            SweepRow& row       = rows[i];
            row.index           = i;
            row.label           = p.label;
            row.r0              = p.params.r0();
            row.regime          = regime_of(row.r0);
            try {
                row.verdicts = verify_point(p.params, p.history, horizon.value_or(verification_horizon(row.r0)), n);
            }
            catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };

    const int threads = std::clamp(jobs, 1, static_cast<int>(points.size()));
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();
    return rows;
}

} // namespace rsis
