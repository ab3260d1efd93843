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
#ifndef RENEWAL_SIS_CONFIG_HPP
#define RENEWAL_SIS_CONFIG_HPP

#include "renewal_sis/kernel.hpp"
#include "renewal_sis/model.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rsis
{

enum class Command
{
    simulate,
    spectrum,
    verify,
    sweep,
    kernels,
};

enum class SolverChoice
{
    renewal,
    dde,
    both,
};

/// {"type":"step"} | {"type":"linear"} | {"type":"trunc_exp","k":..} | {"type":"tabulated","knots":..,"atoms":..}
struct KernelSpec {
    std::string type = "step";
    double rate      = 0.0;
    std::vector<Knot> knots;
    std::vector<Atom> atoms;

    SurvivalKernel build() const;
};

/// Exactly one of beta and r0 is set; r0 solves for beta.
struct ParamsSpec {
    std::optional<double> beta;
    std::optional<double> r0;
    double mu = 0.0;
    KernelSpec kernel;

    ModelParams build() const;
};

/// {"type":"constant"|"samples"|"pulse", ..., "projected": bool, "strict": bool}
struct HistorySpec {
    std::string type = "constant";
    double value     = 0.0;
    std::vector<double> values;
    double base   = 0.0;
    double peak   = 0.0;
    double center = -0.5;
    double width  = 0.25;
    bool projected = true;
    /// reject histories with |psi(0) - G(psi)| > 1e-9 instead of projecting
    bool strict = false;

    /// Samples the history on n steps per unit (samples keep their own grid) and applies projection/strictness.
    History build(const ModelParams& params, int n) const;
};

struct GridPoint {
    std::string label;
    ParamsSpec params;
    HistorySpec history;
};

struct RunConfig {
    Command command = Command::simulate;
    std::optional<ParamsSpec> params;
    std::optional<HistorySpec> history;
    std::optional<double> horizon;
    int n                = 1000;
    SolverChoice solver  = SolverChoice::both;
    std::string output_dir = ".";
    std::vector<GridPoint> grid;
};

/// Parses and fully validates a run configuration. Unknown keys are rejected;
/// errors are ConfigError with the JSON path of the offending field.
RunConfig parse_config(std::string_view text);

nlohmann::ordered_json to_json(const RunConfig& config);
nlohmann::ordered_json to_json(const KernelSpec& spec);
nlohmann::ordered_json to_json(const HistorySpec& spec);

bool operator==(const RunConfig& a, const RunConfig& b);

std::string_view to_string(Command command);
std::string_view to_string(SolverChoice solver);

} // namespace rsis

#endif // RENEWAL_SIS_CONFIG_HPP
