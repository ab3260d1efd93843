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
#ifndef RENEWAL_SIS_SOLVER_HPP
#define RENEWAL_SIS_SOLVER_HPP

#include "renewal_sis/model.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace rsis
{

enum class SolverId
{
    renewal,
    dde,
};

std::string_view to_string(SolverId id);

/**
 * @brief I(t) on the uniform grid t_k = k/N, k = 0..K, plus the history it started from.
 *
 * S(t) is never stored; it is 1 - I(t).
 */
class Trajectory
{
public:
    Trajectory(ModelParams params, History history, SolverId solver, std::vector<double> values, int clamp_events);

    int steps_per_unit() const
    {
        return m_history.resolution();
    }
    double dt() const
    {
        return 1.0 / steps_per_unit();
    }
    double time(std::size_t k) const
    {
        return static_cast<double>(k) / steps_per_unit();
    }
    double horizon() const
    {
        return time(m_values.size() - 1);
    }
    const std::vector<double>& values() const
    {
        return m_values;
    }
    SolverId solver() const
    {
        return m_solver;
    }
    const ModelParams& params() const
    {
        return m_params;
    }
    /// The history on this trajectory's grid (after resampling/projection).
    const History& history() const
    {
        return m_history;
    }
    int clamp_events() const
    {
        return m_clamp_events;
    }

    /// Linear interpolation of I on [-1, horizon].
    double value_at(double t) const;

private:
    ModelParams m_params;
    History m_history;
    SolverId m_solver;
    std::vector<double> m_values;
    int m_clamp_events;
};

/// Horizon long enough for transients: 50 / max(|R0 - 1|, 0.05).
double default_horizon(double r0);

/**
 * @brief Integrates the renewal equation I(t) = G(I_t).
 *
 * The delayed window uses the product-trapezoid weights of delay_weights();
 * the a = 0 weight makes each step implicit, solved by damped Newton from the
 * previous value (tolerance 1e-12, at most 50 iterations).
 */
Trajectory solve_renewal(const ModelParams& params, const History& history, double horizon, int n);

/**
 * @brief Integrates the differentiated form
 *   I' = beta (1-I) I + beta int_0^1 (1-I(t-a)) I(t-a) e^{-mu a} dF(a) - mu I
 * with Heun's method on the same grid. Requires a compatible history
 * (residual < 1e-6 at resolution n).
 */
Trajectory solve_dde(const ModelParams& params, const History& history, double horizon, int n);

Trajectory solve(SolverId id, const ModelParams& params, const History& history, double horizon, int n);

/// max |a(t) - b(t)| over the grid points of the coarser trajectory with t >= t_from.
double max_difference(const Trajectory& a, const Trajectory& b, double t_from = 0.0);

struct RefinementReport {
    SolverId solver;
    int base_n;
    /// diffs[0] = max|I_N - I_2N|, diffs[1] = max|I_2N - I_4N|
    std::array<double, 2> diffs;
    double max_diff;
    /// log2(diffs[0] / diffs[1]); absent when the differences are at roundoff level.
    std::optional<double> empirical_order;
};

RefinementReport refine_and_order(const ModelParams& params, const History& history, double horizon, int n,
                                  SolverId solver = SolverId::renewal);

struct Crossing {
    enum class Direction
    {
        up,
        down,
    };
    double time;
    Direction direction;
};

/// Times where the piecewise-linear interpolant of the trajectory crosses level.
std::vector<Crossing> crossing_times(const Trajectory& trajectory, double level);

/// Same, on raw grid values starting at t0 with step dt.
std::vector<Crossing> crossing_times(std::span<const double> values, double t0, double dt, double level);

} // namespace rsis

#endif // RENEWAL_SIS_SOLVER_HPP
