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

// renewal_sis <simulate|spectrum|verify|sweep|kernels> --config run.json [--out dir] [--jobs n] [--quiet]

#include "renewal_sis/error.hpp"
#include "renewal_sis/run.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace
{

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw rsis::ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// The subcommand names the command; a "command" key in the file must agree with it.
std::string with_command(const std::string& text, const std::string& command)
{
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw rsis::ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw rsis::ConfigError("config must be a JSON object");
    }
    if (auto it = j.find("command"); it != j.end()) {
        if (!it->is_string() || it->get<std::string>() != command) {
            throw rsis::ConfigError("command: config says " + it->dump() + " but subcommand is '" + command + "'");
        }
    }
    j["command"] = command;
    return j.dump();
}

int jobs_from_env()
{
    const char* env = std::getenv("RENEWAL_SIS_JOBS");
    if (!env || !*env) {
        return 1;
    }
    char* end  = nullptr;
    long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 1 || value > 1024) {
        throw rsis::ConfigError(std::string("RENEWAL_SIS_JOBS: expected a positive integer, got '") + env + "'");
    }
    return static_cast<int>(value);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Age-structured SIS renewal model: simulation, spectra and theorem checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int jobs   = 0;
    bool quiet = false;

    for (const char* name : {"simulate", "spectrum", "verify", "sweep", "kernels"}) {
        CLI::App* sub = app.add_subcommand(name);
        auto* cfg     = sub->add_option("--config", config_path, "run configuration (JSON)")->check(CLI::ExistingFile);
        if (std::string(name) != "kernels") {
            cfg->required();
        }
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_option("--jobs", jobs, "worker threads for sweep (default: $RENEWAL_SIS_JOBS or 1)")
            ->check(CLI::Range(1, 1024));
        sub->add_flag("--quiet", quiet, "suppress stdout tables");
    }

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? rsis::exit_ok : rsis::exit_config_error;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        rsis::RunOptions options;
        options.quiet = quiet;
        options.jobs  = jobs > 0 ? jobs : jobs_from_env();
        if (!out_dir.empty()) {
            options.output_dir = out_dir;
        }
        const std::string text = config_path.empty() ? std::string("{}") : read_file(config_path);
        const rsis::RunConfig config = rsis::parse_config(with_command(text, command));
        return rsis::run(config, options);
    }
    catch (const rsis::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return rsis::exit_config_error;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return rsis::exit_numeric_failure;
    }
}
