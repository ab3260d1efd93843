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
#include "renewal_sis/config.hpp"
#include "renewal_sis/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rsis
{

using json = nlohmann::json;

namespace
{

constexpr double strict_compat_tol = 1e-9;

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw ConfigError(fmt::format("{}: {}", path, what));
}

std::string join(const std::string& path, std::string_view key)
{
    return path.empty() ? std::string(key) : fmt::format("{}.{}", path, key);
}

void require_object(const json& j, const std::string& path)
{
    if (!j.is_object()) {
        fail(path.empty() ? "config" : path, "expected a JSON object");
    }
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed)
{
    require_object(j, path);
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(join(path, key), "unknown key");
        }
    }
}

double number_at(const json& j, const std::string& path)
{
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        fail(path, "expected a finite number");
    }
    return v;
}

std::optional<double> optional_number(const json& j, const std::string& path, std::string_view key)
{
    if (!j.contains(key)) {
        return std::nullopt;
    }
    return number_at(j.at(std::string(key)), join(path, key));
}

double required_number(const json& j, const std::string& path, std::string_view key)
{
    if (!j.contains(key)) {
        fail(join(path, key), "missing required field");
    }
    return number_at(j.at(std::string(key)), join(path, key));
}

std::string string_at(const json& j, const std::string& path, std::string_view key)
{
    if (!j.contains(key)) {
        fail(join(path, key), "missing required field");
    }
    const json& v = j.at(std::string(key));
    if (!v.is_string()) {
        fail(join(path, key), "expected a string");
    }
    return v.get<std::string>();
}

bool bool_at(const json& j, const std::string& path, std::string_view key, bool fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(std::string(key));
    if (!v.is_boolean()) {
        fail(join(path, key), "expected true or false");
    }
    return v.get<bool>();
}

std::vector<std::pair<double, double>> pairs_at(const json& j, const std::string& path)
{
    if (!j.is_array()) {
        fail(path, "expected an array of [x, y] pairs");
    }
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = fmt::format("{}[{}]", path, i);
        if (!j[i].is_array() || j[i].size() != 2) {
            fail(p, "expected an [x, y] pair");
        }
        out.emplace_back(number_at(j[i][0], p + "[0]"), number_at(j[i][1], p + "[1]"));
    }
    return out;
}

void in_unit_interval(double v, const std::string& path)
{
    if (v < 0.0 || v > 1.0) {
        fail(path, fmt::format("history range: value {} outside [0,1]", v));
    }
}

KernelSpec parse_kernel(const json& j, const std::string& path)
{
    require_object(j, path);
    KernelSpec spec;
    spec.type = string_at(j, path, "type");
    if (spec.type == "step" || spec.type == "linear") {
        check_keys(j, path, {"type"});
    }
    else if (spec.type == "trunc_exp") {
        check_keys(j, path, {"type", "k"});
        spec.rate = required_number(j, path, "k");
    }
    else if (spec.type == "tabulated") {
        check_keys(j, path, {"type", "knots", "atoms"});
        if (!j.contains("knots")) {
            fail(join(path, "knots"), "missing required field");
        }
        for (auto [a, v] : pairs_at(j.at("knots"), join(path, "knots"))) {
            spec.knots.push_back({a, v});
        }
        if (j.contains("atoms")) {
            for (auto [a, s] : pairs_at(j.at("atoms"), join(path, "atoms"))) {
                spec.atoms.push_back({a, s});
            }
        }
    }
    else {
        fail(join(path, "type"), fmt::format("unknown kernel type '{}' (step, linear, trunc_exp, tabulated)", spec.type));
    }
    try {
        (void)spec.build();
    }
    catch (const InvariantError& e) {
        fail(path, e.what());
    }
    return spec;
}

ParamsSpec parse_params(const json& j, const std::string& path)
{
    check_keys(j, path, {"beta", "r0", "mu", "kernel"});
    ParamsSpec spec;
    spec.beta = optional_number(j, path, "beta");
    spec.r0   = optional_number(j, path, "r0");
    if (spec.beta.has_value() == spec.r0.has_value()) {
        fail(path, "exactly one of 'beta' and 'r0' must be given");
    }
    if (spec.beta && !(*spec.beta > 0.0)) {
        fail(join(path, "beta"), fmt::format("beta positivity: beta must be > 0, got {}", *spec.beta));
    }
    if (spec.r0 && !(*spec.r0 > 0.0)) {
        fail(join(path, "r0"), fmt::format("R0 positivity: r0 must be > 0, got {}", *spec.r0));
    }
    spec.mu = optional_number(j, path, "mu").value_or(0.0);
    if (spec.mu < 0.0) {
        fail(join(path, "mu"), fmt::format("mu nonnegativity: mu must be >= 0, got {}", spec.mu));
    }
    if (!j.contains("kernel")) {
        fail(join(path, "kernel"), "missing required field");
    }
    spec.kernel = parse_kernel(j.at("kernel"), join(path, "kernel"));
    try {
        (void)spec.build();
    }
    catch (const InvariantError& e) {
        fail(path, e.what());
    }
    return spec;
}

HistorySpec parse_history(const json& j, const std::string& path)
{
    require_object(j, path);
    HistorySpec spec;
    spec.type = string_at(j, path, "type");
    if (spec.type == "constant") {
        check_keys(j, path, {"type", "value", "projected", "strict"});
        spec.value = required_number(j, path, "value");
        in_unit_interval(spec.value, join(path, "value"));
    }
    else if (spec.type == "samples") {
        check_keys(j, path, {"type", "values", "projected", "strict"});
        if (!j.contains("values") || !j.at("values").is_array() || j.at("values").size() < 2) {
            fail(join(path, "values"), "expected an array of at least two samples");
        }
        const json& arr = j.at("values");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = fmt::format("{}[{}]", join(path, "values"), i);
            spec.values.push_back(number_at(arr[i], p));
            in_unit_interval(spec.values.back(), p);
        }
    }
    else if (spec.type == "pulse") {
        check_keys(j, path, {"type", "base", "peak", "center", "width", "projected", "strict"});
        spec.base   = required_number(j, path, "base");
        spec.peak   = required_number(j, path, "peak");
        spec.center = optional_number(j, path, "center").value_or(spec.center);
        spec.width  = optional_number(j, path, "width").value_or(spec.width);
        in_unit_interval(spec.base, join(path, "base"));
        in_unit_interval(spec.peak, join(path, "peak"));
        if (spec.center < -1.0 || spec.center > 0.0) {
            fail(join(path, "center"), "pulse center must lie in [-1,0]");
        }
        if (!(spec.width > 0.0)) {
            fail(join(path, "width"), "pulse width must be > 0");
        }
    }
    else {
        fail(join(path, "type"), fmt::format("unknown history type '{}' (constant, samples, pulse)", spec.type));
    }
    spec.strict    = bool_at(j, path, "strict", false);
    spec.projected = bool_at(j, path, "projected", !spec.strict);
    if (spec.projected && spec.strict) {
        fail(path, "'projected' and 'strict' are mutually exclusive");
    }
    return spec;
}

Command parse_command(const std::string& s, const std::string& path)
{
    if (s == "simulate") {
        return Command::simulate;
    }
    if (s == "spectrum") {
        return Command::spectrum;
    }
    if (s == "verify") {
        return Command::verify;
    }
    if (s == "sweep") {
        return Command::sweep;
    }
    if (s == "kernels") {
        return Command::kernels;
    }
    fail(path, fmt::format("unknown command '{}'", s));
}

SolverChoice parse_solver(const std::string& s, const std::string& path)
{
    if (s == "renewal") {
        return SolverChoice::renewal;
    }
    if (s == "dde") {
        return SolverChoice::dde;
    }
    if (s == "both") {
        return SolverChoice::both;
    }
    fail(path, fmt::format("unknown solver '{}' (renewal, dde, both)", s));
}

nlohmann::ordered_json to_json(const ParamsSpec& spec)
{
    nlohmann::ordered_json j;
    if (spec.beta) {
        j["beta"] = *spec.beta;
    }
    if (spec.r0) {
        j["r0"] = *spec.r0;
    }
    j["mu"]     = spec.mu;
    j["kernel"] = to_json(spec.kernel);
    return j;
}

} // namespace

SurvivalKernel KernelSpec::build() const
{
    if (type == "step") {
        return SurvivalKernel::step();
    }
    if (type == "linear") {
        return SurvivalKernel::linear();
    }
    if (type == "trunc_exp") {
        return SurvivalKernel::trunc_exp(rate);
    }
    if (type == "tabulated") {
        return SurvivalKernel::tabulated(knots, atoms);
    }
    throw ConfigError(fmt::format("unknown kernel type '{}'", type));
}

ModelParams ParamsSpec::build() const
{
    if (r0) {
        return ModelParams::with_r0(kernel.build(), mu, *r0);
    }
    return ModelParams(beta.value_or(0.0), mu, kernel.build());
}

History HistorySpec::build(const ModelParams& params, int n) const
{
    History h = [&] {
        if (type == "constant") {
            return History::constant(params, value, n);
        }
        if (type == "samples") {
            return History(params, values);
        }
        std::vector<double> s(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            const double theta = -1.0 + static_cast<double>(i) / n;
            const double d     = std::abs(theta - center);
            const double bump  = d < width ? 0.5 * (1.0 + std::cos(std::numbers::pi * d / width)) : 0.0;
            s[i]               = base + (peak - base) * bump;
        }
        return History(params, std::move(s));
    }();
    if (strict && h.compat_residual() > strict_compat_tol) {
        throw InvariantError("compatibility", fmt::format("|psi(0) - G(psi)| = {:.3e} exceeds {:.0e}",
                                                          h.compat_residual(), strict_compat_tol));
    }
    return projected ? project_history(params, h) : h;
}

RunConfig parse_config(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    }
    catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config: malformed JSON: {}", e.what()));
    }
    check_keys(j, "", {"command", "params", "history", "T", "N", "solver", "output_dir", "grid"});

    RunConfig cfg;
    if (j.contains("command")) {
        cfg.command = parse_command(string_at(j, "", "command"), "command");
    }
    if (j.contains("params")) {
        cfg.params = parse_params(j.at("params"), "params");
    }
    if (j.contains("history")) {
        cfg.history = parse_history(j.at("history"), "history");
    }
    if (j.contains("T")) {
        cfg.horizon = number_at(j.at("T"), "T");
        if (!(*cfg.horizon > 0.0)) {
            fail("T", fmt::format("horizon must be > 0, got {}", *cfg.horizon));
        }
    }
    if (j.contains("N")) {
        const json& n = j.at("N");
        if (!n.is_number_integer()) {
            fail("N", "expected an integer");
        }
        const auto v = n.get<long long>();
        if (v < 8 || v > 1'000'000) {
            fail("N", fmt::format("steps per unit must be an integer in [8, 1e6], got {}", v));
        }
        cfg.n = static_cast<int>(v);
    }
    if (j.contains("solver")) {
        cfg.solver = parse_solver(string_at(j, "", "solver"), "solver");
    }
    if (j.contains("output_dir")) {
        cfg.output_dir = string_at(j, "", "output_dir");
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (!g.is_array()) {
            fail("grid", "expected an array of points");
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string p = fmt::format("grid[{}]", i);
            check_keys(g[i], p, {"label", "params", "history"});
            GridPoint point;
            point.label = g[i].contains("label") ? string_at(g[i], p, "label") : fmt::format("point-{}", i);
            if (!g[i].contains("params")) {
                fail(p + ".params", "missing required field");
            }
            if (!g[i].contains("history")) {
                fail(p + ".history", "missing required field");
            }
            point.params  = parse_params(g[i].at("params"), p + ".params");
            point.history = parse_history(g[i].at("history"), p + ".history");
            cfg.grid.push_back(std::move(point));
        }
    }

    switch (cfg.command) {
    case Command::simulate:
    case Command::verify:
        if (!cfg.history) {
            fail("history", fmt::format("required for '{}'", to_string(cfg.command)));
        }
        [[fallthrough]];
    case Command::spectrum:
        if (!cfg.params) {
            fail("params", fmt::format("required for '{}'", to_string(cfg.command)));
        }
        break;
    case Command::sweep:
        if (cfg.grid.empty()) {
            fail("grid", "sweep needs a nonempty grid");
        }
        break;
    case Command::kernels:
        break;
    }
    return cfg;
}

nlohmann::ordered_json to_json(const KernelSpec& spec)
{
    nlohmann::ordered_json j;
    j["type"] = spec.type;
    if (spec.type == "trunc_exp") {
        j["k"] = spec.rate;
    }
    else if (spec.type == "tabulated") {
        j["knots"] = nlohmann::ordered_json::array();
        for (const auto& k : spec.knots) {
            j["knots"].push_back({k.age, k.value});
        }
        j["atoms"] = nlohmann::ordered_json::array();
        for (const auto& a : spec.atoms) {
            j["atoms"].push_back({a.age, a.mass});
        }
    }
    return j;
}

nlohmann::ordered_json to_json(const HistorySpec& spec)
{
    nlohmann::ordered_json j;
    j["type"] = spec.type;
    if (spec.type == "constant") {
        j["value"] = spec.value;
    }
    else if (spec.type == "samples") {
        j["values"] = spec.values;
    }
    else {
        j["base"]   = spec.base;
        j["peak"]   = spec.peak;
        j["center"] = spec.center;
        j["width"]  = spec.width;
    }
    j["projected"] = spec.projected;
    if (spec.strict) {
        j["strict"] = true;
    }
    return j;
}

nlohmann::ordered_json to_json(const RunConfig& config)
{
    nlohmann::ordered_json j;
    j["command"] = to_string(config.command);
    if (config.params) {
        j["params"] = to_json(*config.params);
    }
    if (config.history) {
        j["history"] = to_json(*config.history);
    }
    if (config.horizon) {
        j["T"] = *config.horizon;
    }
    j["N"]          = config.n;
    j["solver"]     = to_string(config.solver);
    j["output_dir"] = config.output_dir;
    if (!config.grid.empty()) {
        j["grid"] = nlohmann::ordered_json::array();
        for (const auto& p : config.grid) {
            j["grid"].push_back({{"label", p.label}, {"params", to_json(p.params)}, {"history", to_json(p.history)}});
        }
    }
    return j;
}

bool operator==(const RunConfig& a, const RunConfig& b)
{
    return to_json(a) == to_json(b);
}

std::string_view to_string(Command command)
{
    switch (command) {
    case Command::simulate:
        return "simulate";
    case Command::spectrum:
        return "spectrum";
    case Command::verify:
        return "verify";
    case Command::sweep:
        return "sweep";
    case Command::kernels:
        return "kernels";
    }
    return "unknown";
}

std::string_view to_string(SolverChoice solver)
{
    switch (solver) {
    case SolverChoice::renewal:
        return "renewal";
    case SolverChoice::dde:
        return "dde";
    case SolverChoice::both:
        return "both";
    }
    return "unknown";
}

} // namespace rsis
