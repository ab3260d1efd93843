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
#include "renewal_sis/run.hpp"
#include "renewal_sis/error.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <iostream>
#include <vector>

namespace rsis
{

namespace fs = std::filesystem;
using ojson  = nlohmann::ordered_json;

namespace
{

// Files written by the current run; removed again unless commit() is called.
class OutputSet
{
public:
    explicit OutputSet(fs::path dir)
        : m_dir(std::move(dir))
    {
        std::error_code ec;
        fs::create_directories(m_dir, ec);
        if (ec || !fs::is_directory(m_dir)) {
            throw ConfigError(fmt::format("output_dir: cannot create '{}'", m_dir.string()));
        }
    }
    OutputSet(const OutputSet&)            = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    ~OutputSet()
    {
        if (m_committed) {
            return;
        }
        for (const auto& p : m_files) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

    fs::path add(const std::string& name)
    {
        m_files.push_back(m_dir / name);
        return m_files.back();
    }

    void write_json(const std::string& name, const ojson& j)
    {
        const fs::path p = add(name);
        std::ofstream f(p, std::ios::binary);
        if (!f) {
            throw ConfigError(fmt::format("output_dir: cannot write '{}'", p.string()));
        }
        f << j.dump(2) << '\n';
    }

    void commit()
    {
        m_committed = true;
    }

private:
    fs::path m_dir;
    std::vector<fs::path> m_files;
    bool m_committed = false;
};

ojson optional_number(const std::optional<double>& v)
{
    return v ? ojson(*v) : ojson(nullptr);
}

void print_verdict_table(std::ostream& os, const std::vector<TheoremVerdict>& verdicts, const std::string& prefix)
{
    for (const auto& v : verdicts) {
        fmt::print(os, "{}{:<12} {:<5} {}\n", prefix, to_string(v.theorem), v.pass ? "PASS" : "FAIL", v.summary);
    }
}

int run_simulate(const RunConfig& cfg, const fs::path& dir, const RunOptions& opt, std::ostream& out)
{
    const ModelParams params = cfg.params->build();
    const double horizon     = cfg.horizon.value_or(default_horizon(params.r0()));
    const History history    = cfg.history->build(params, cfg.n);

    OutputSet files(dir);
    std::vector<SolverId> ids;
    if (cfg.solver != SolverChoice::dde) {
        ids.push_back(SolverId::renewal);
    }
    if (cfg.solver != SolverChoice::renewal) {
        ids.push_back(SolverId::dde);
    }

    RunConfig embedded  = cfg;
    embedded.output_dir = dir.string();

    ojson manifest;
    manifest["config"]              = to_json(embedded);
    manifest["r0"]                  = params.r0();
    manifest["beta"]                = params.beta();
    manifest["mu"]                  = params.mu();
    manifest["endemic_equilibrium"] = optional_number(endemic_equilibrium(params));
    manifest["N"]                   = cfg.n;
    manifest["T"]                   = horizon;
    manifest["history"]             = {{"resolution", history.resolution()},
                                       {"compat_residual", history.compat_residual()},
                                       {"original_residual", history.original_residual()},
                                       {"projected", history.projected()},
                                       {"blend_width", history.blend_width()}};
    manifest["runs"] = ojson::array();

    std::vector<Trajectory> trajectories;
    for (SolverId id : ids) {
        trajectories.push_back(solve(id, params, history, horizon, cfg.n));
        const Trajectory& traj = trajectories.back();
        const std::string name = fmt::format("trajectory_{}.csv", to_string(id));
        write_trajectory_csv(files.add(name), traj);
        manifest["runs"].push_back({{"solver_id", to_string(id)},
                                    {"file", name},
                                    {"steps", traj.values().size() - 1},
                                    {"clamp_events", traj.clamp_events()},
                                    {"terminal_value", traj.values().back()}});
    }
    if (trajectories.size() == 2) {
        manifest["cross_diff"] = {{"max_abs", max_difference(trajectories[0], trajectories[1])},
                                  {"max_abs_t_ge_1", max_difference(trajectories[0], trajectories[1], 1.0)}};
    }
    else {
        manifest["cross_diff"] = nullptr;
    }
    files.write_json("manifest.json", manifest);
    files.commit();

    if (!opt.quiet) {
        fmt::print(out, "R0 = {:.9g}", params.r0());
        if (auto eq = endemic_equilibrium(params)) {
            fmt::print(out, ", I* = {:.9g}", *eq);
        }
        fmt::print(out, "\n");
        for (const auto& t : trajectories) {
            fmt::print(out, "{:<8} I(T={}) = {:.12g}\n", to_string(t.solver()), horizon, t.values().back());
        }
        fmt::print(out, "wrote {}\n", (dir / "manifest.json").string());
    }
    return exit_ok;
}

int run_spectrum(const RunConfig& cfg, const fs::path& dir, const RunOptions& opt, std::ostream& out)
{
    const ModelParams params = cfg.params->build();
    const SpectralReport report = spectral_report(params);
    OutputSet files(dir);
    const ojson j = to_json(report);
    files.write_json("spectrum.json", j);
    files.commit();
    if (!opt.quiet) {
        out << j.dump(2) << '\n';
    }
    return exit_ok;
}

int run_verify(const RunConfig& cfg, const fs::path& dir, const RunOptions& opt, std::ostream& out)
{
    const ModelParams params = cfg.params->build();
    const History history    = cfg.history->build(params, cfg.n);
    const double horizon     = cfg.horizon.value_or(verification_horizon(params.r0()));
    const auto verdicts      = verify_point(params, history, horizon, cfg.n);

    ojson arr = ojson::array();
    for (const auto& v : verdicts) {
        arr.push_back(to_json(v));
    }
    OutputSet files(dir);
    files.write_json("verdicts.json", arr);
    files.commit();

    if (!opt.quiet) {
        fmt::print(out, "R0 = {:.9g} ({}), T = {}, N = {}\n", params.r0(), to_string(regime_of(params.r0())), horizon,
                   cfg.n);
        print_verdict_table(out, verdicts, "");
    }
    const bool ok = std::all_of(verdicts.begin(), verdicts.end(), [](const TheoremVerdict& v) {
        return v.pass;
    });
    return ok ? exit_ok : exit_verdict_failure;
}

int run_sweep(const RunConfig& cfg, const fs::path& dir, const RunOptions& opt, std::ostream& out)
{
    std::vector<SweepPoint> points;
    std::vector<std::size_t> origin;
    std::vector<SweepRow> rows(cfg.grid.size());
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        const GridPoint& g = cfg.grid[i];
        rows[i].index      = i;
        rows[i].label      = g.label;
        try {
            ModelParams params = g.params.build();
            History history    = g.history.build(params, cfg.n);
            rows[i].r0         = params.r0();
            rows[i].regime     = regime_of(params.r0());
            points.push_back({g.label, std::move(params), std::move(history)});
            origin.push_back(i);
        }
        catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    }
    if (!points.empty()) {
        auto done = sweep(points, cfg.horizon, cfg.n, opt.jobs);
        for (std::size_t k = 0; k < done.size(); ++k) {
            done[k].index     = origin[k];
            rows[origin[k]]   = std::move(done[k]);
        }
    }

    ojson arr = ojson::array();
    for (const auto& r : rows) {
        arr.push_back(to_json(r));
    }
    OutputSet files(dir);
    files.write_json("sweep.json", arr);
    files.commit();

    bool ok = true;
    for (const auto& r : rows) {
        ok = ok && r.pass();
        if (opt.quiet) {
            continue;
        }
        fmt::print(out, "[{}] {} R0 = {:.6g} ({})\n", r.index, r.label, r.r0, to_string(r.regime));
        if (r.error) {
            fmt::print(out, "    ERROR {}\n", *r.error);
        }
        print_verdict_table(out, r.verdicts, "    ");
    }
    return ok ? exit_ok : exit_verdict_failure;
}

int run_kernels(const fs::path& dir, const RunOptions& opt, std::ostream& out)
{
    const ojson catalog = kernel_catalog();
    OutputSet files(dir);
    files.write_json("kernels.json", catalog);
    files.commit();
    if (!opt.quiet) {
        fmt::print(out, "{:<16} {:>6} {:>6} {:>10} {:>10} {:>8} {:>8} {:>12}\n", "kernel", "F(0)", "F(1)",
                   "cont.drop", "atom.mass", "knots", "atoms", "mean.period");
        for (const auto& k : catalog) {
            fmt::print(out, "{:<16} {:>6.3g} {:>6.3g} {:>10.6g} {:>10.6g} {:>8} {:>8} {:>12.9g}\n",
                       k["label"].get<std::string>(), k["F(0)"].get<double>(), k["F(1)"].get<double>(),
                       k["continuous_decrease"].get<double>(), k["atom_mass"].get<double>(),
                       k["knots"].get<int>(), k["atoms"].get<int>(), k["mean_infectious_period"].get<double>());
        }
    }
    return exit_ok;
}

} // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory& trajectory)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError(fmt::format("output_dir: cannot write '{}'", path.string()));
    }
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "t,I\n");
    const auto& values = trajectory.values();
    for (std::size_t k = 0; k < values.size(); ++k) {
        fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g}\n", trajectory.time(k), values[k]);
    }
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

ojson to_json(const SpectralReport& report)
{
    ojson j;
    j["c"]              = report.c;
    j["bound_radius"]   = report.bound_radius;
    j["rhp_root_count"] = report.rhp_root_count;
    if (report.dominant_real_root) {
        const auto& r             = *report.dominant_real_root;
        j["dominant_real_root"] = {{"root", r.root}, {"bracket", {r.bracket_lo, r.bracket_hi}}, {"residual", r.residual}};
    }
    else {
        j["dominant_real_root"] = nullptr;
    }
    j["samples_used"]      = report.samples_used;
    j["route_discrepancy"] = report.route_discrepancy;
    j["degenerate"]        = report.degenerate;
    if (report.degenerate) {
        j["note"] = "c = 0 (R0 = 2): the characteristic function vanishes identically, no roots";
    }
    return j;
}

ojson to_json(const TheoremVerdict& v)
{
    ojson j;
    j["theorem"] = to_string(v.theorem);
    j["pass"]    = v.pass;
    j["summary"] = v.summary;
    j["witness"] = ojson::object();
    for (const auto& [k, x] : v.witness) {
        j["witness"][k] = x;
    }
    j["tolerances"] = ojson::object();
    for (const auto& [k, x] : v.tolerances) {
        j["tolerances"][k] = x;
    }
    return j;
}

ojson to_json(const SweepRow& row)
{
    ojson j;
    j["index"]  = row.index;
    j["label"]  = row.label;
    j["r0"]     = row.r0;
    j["regime"] = to_string(row.regime);
    j["pass"]   = row.pass();
    j["error"]  = row.error ? ojson(*row.error) : ojson(nullptr);
    j["verdicts"] = ojson::array();
    for (const auto& v : row.verdicts) {
        j["verdicts"].push_back(to_json(v));
    }
    return j;
}

ojson kernel_catalog()
{
    const std::vector<SurvivalKernel> kernels = {SurvivalKernel::step(), SurvivalKernel::linear(),
                                                 SurvivalKernel::trunc_exp(1.0), SurvivalKernel::trunc_exp(2.0),
                                                 SurvivalKernel::trunc_exp(5.0)};
    ojson arr = ojson::array();
    for (const auto& k : kernels) {
        const double mean = weighted_riemann(k, [](double) { return std::complex<double>(1.0); }, 0.0).real();
        arr.push_back({{"label", k.label()},
                       {"F(0)", k.eval(0.0)},
                       {"F(1)", k.eval(1.0)},
                       {"continuous_decrease", k.continuous_decrease()},
                       {"atom_mass", k.atom_mass()},
                       {"knots", k.knots().size()},
                       {"atoms", k.atoms().size()},
                       {"mean_infectious_period", mean}});
    }
    return arr;
}

int run(const RunConfig& config, const RunOptions& options)
{
    std::ostream& out = options.out ? *options.out : std::cout;
    std::ostream& err = options.err ? *options.err : std::cerr;
    const fs::path dir = options.output_dir.value_or(config.output_dir);
    RunConfig effective  = config;
    effective.output_dir = dir.string();
    try {
        switch (config.command) {
        case Command::simulate:
            return run_simulate(effective, dir, options, out);
        case Command::spectrum:
            return run_spectrum(effective, dir, options, out);
        case Command::verify:
            return run_verify(effective, dir, options, out);
        case Command::sweep:
            return run_sweep(effective, dir, options, out);
        case Command::kernels:
            return run_kernels(dir, options, out);
        }
    }
    catch (const ConfigError& e) {
        fmt::print(err, "config error: {}\n", e.what());
        return exit_config_error;
    }
    catch (const NumericError& e) {
        fmt::print(err, "numeric failure: {}\n", e.what());
        return exit_numeric_failure;
    }
    catch (const std::exception& e) {
        fmt::print(err, "numeric failure: {}\n", e.what());
        return exit_numeric_failure;
    }
    return exit_config_error;
}

} // namespace rsis
