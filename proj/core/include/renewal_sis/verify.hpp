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
#ifndef RENEWAL_SIS_VERIFY_HPP
#define RENEWAL_SIS_VERIFY_HPP

#include "renewal_sis/model.hpp"
#include "renewal_sis/solver.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rsis
{

enum class TheoremId
{
    gas1,
    las,
    persistence,
    inv1,
    inv2,
    ga1,
    ga2,
    gas,
};

std::string_view to_string(TheoremId id);

/// Which side of the thresholds R0 = 1 and R0 = 2 the parameters fall on.
enum class Regime
{
    extinction, // R0 <= 1
    low,        // 1 < R0 <= 2
    high,       // R0 > 2
};

std::string_view to_string(Regime regime);

/// Classifies R0 with a 1e-12 slack so that R0 = 1 and R0 = 2 set up by
/// quadrature land on the closed side of each threshold.
Regime regime_of(double r0);

/**
 * @brief Outcome of one executable theorem check.
 *
 * A failed verdict always carries the violating time and value (or the
 * offending quantity) in its witness.
 */
struct TheoremVerdict {
    TheoremId theorem;
    bool pass = false;
    std::string summary;
    std::map<std::string, double> witness;
    std::map<std::string, double> tolerances;
};

/// M_0 = 1/4, M_n = R0 M_{n-1} (1 - M_{n-1}), returned for n = 0..count.
std::vector<double> dfe_majorant(double r0, int count);

/// Horizon used by verify/sweep when none is configured.
double verification_horizon(double r0);

TheoremVerdict check_gas1(const ModelParams& params, const History& history, double horizon, int n);

/// Same check on an existing trajectory.
TheoremVerdict check_gas1(const ModelParams& params, const Trajectory& trajectory);

TheoremVerdict check_inv1(const ModelParams& params, const Trajectory& trajectory);
TheoremVerdict check_inv2(const ModelParams& params, const Trajectory& trajectory);
TheoremVerdict check_persistence(const ModelParams& params, const Trajectory& trajectory, double tail_fraction = 0.1);
TheoremVerdict check_convergence(const ModelParams& params, const Trajectory& trajectory);
TheoremVerdict check_las(const ModelParams& params);

/// Runs every check that applies to the regime of params (renewal solver).
std::vector<TheoremVerdict> verify_point(const ModelParams& params, const History& history, double horizon, int n);

struct SweepPoint {
    std::string label;
    ModelParams params;
    History history;
};

struct SweepRow {
    std::size_t index = 0;
    std::string label;
    double r0 = 0.0;
    Regime regime = Regime::extinction;
    std::vector<TheoremVerdict> verdicts;
    std::optional<std::string> error;

    bool pass() const;
};

/**
 * @brief Verifies every point, in parallel on up to jobs threads.
 *
 * Rows come back in input order. A point that throws is recorded with its
 * error message and does not stop the sweep.
 */
std::vector<SweepRow> sweep(std::span<const SweepPoint> points, std::optional<double> horizon, int n, int jobs = 1);

} // namespace rsis

#endif // RENEWAL_SIS_VERIFY_HPP
