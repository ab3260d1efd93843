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
#ifndef RENEWAL_SIS_RUN_HPP
#define RENEWAL_SIS_RUN_HPP

#include "renewal_sis/config.hpp"
#include "renewal_sis/solver.hpp"
#include "renewal_sis/spectral.hpp"
#include "renewal_sis/verify.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace rsis
{

enum ExitCode : int
{
    exit_ok              = 0,
    exit_config_error    = 1,
    exit_numeric_failure = 2,
    exit_verdict_failure = 3,
};

struct RunOptions {
    /// overrides RunConfig::output_dir when set
    std::optional<std::string> output_dir;
    int jobs   = 1;
    bool quiet = false;
    std::ostream* out = nullptr; // defaults to std::cout
    std::ostream* err = nullptr; // defaults to std::cerr
};

/// Executes the configured command. Outputs are byte-identical for identical
/// configs; on failure every file written by this call is removed.
int run(const RunConfig& config, const RunOptions& options = {});

/// Header "t,I", one row per grid point, 17 significant digits.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);

nlohmann::ordered_json to_json(const SpectralReport& report);
nlohmann::ordered_json to_json(const TheoremVerdict& verdict);
nlohmann::ordered_json to_json(const SweepRow& row);

/// Builtin kernels with their invariant summaries.
nlohmann::ordered_json kernel_catalog();

} // namespace rsis

#endif // RENEWAL_SIS_RUN_HPP
