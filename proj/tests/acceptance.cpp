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

// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include "renewal_sis/config.hpp"
#include "renewal_sis/error.hpp"
#include "renewal_sis/run.hpp"
#include "renewal_sis/solver.hpp"
#include "renewal_sis/spectral.hpp"
#include "renewal_sis/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace rsis;
namespace fs = std::filesystem;
using cd     = std::complex<double>;

namespace
{

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string first_failure;

    void expect(bool ok, const std::string& what)
    {
        if (!ok && pass) {
            first_failure = what;
        }
        pass = pass && ok;
    }
};

std::string fmt_g(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Case {
    std::string label;
    SurvivalKernel kernel;
    double mu;
    double r0;
};

std::vector<HistorySpec> ga1_histories()
{
    HistorySpec low;
    low.value = 0.05;
    HistorySpec high;
    high.value = 0.45;
    HistorySpec pulse;
    pulse.type   = "pulse";
    pulse.base   = 0.01;
    pulse.peak   = 0.3;
    pulse.center = -0.6;
    pulse.width  = 0.3;
    return {low, high, pulse};
}

std::vector<HistorySpec> ga2_histories()
{
    // psi(0) < 1/2 after projection, so the trajectory has to cross 1/2 upward
    HistorySpec low;
    low.value = 0.01;
    HistorySpec mid;
    mid.value = 0.05;
    HistorySpec pulse;
    pulse.type   = "pulse";
    pulse.base   = 0.0;
    pulse.peak   = 0.08;
    pulse.center = -0.5;
    pulse.width  = 0.4;
    return {low, mid, pulse};
}

std::string describe(const HistorySpec& h)
{
    if (h.type == "constant") {
        return "const " + fmt_g(h.value);
    }
    return "pulse " + fmt_g(h.base) + "->" + fmt_g(h.peak);
}

std::vector<Case> ga1_cases()
{
    std::vector<Case> out;
    for (const auto& k : {SurvivalKernel::step(), SurvivalKernel::trunc_exp(2.0)}) {
        for (double r0 : {1.2, 1.5, 2.0}) {
            out.push_back({k.label() + " R0=" + fmt_g(r0), k, 0.1, r0});
        }
    }
    return out;
}

std::vector<Case> ga2_cases()
{
    std::vector<Case> out;
    for (const auto& k : {SurvivalKernel::step(), SurvivalKernel::trunc_exp(2.0)}) {
        for (double r0 : {2.5, 3.0, 5.0}) {
            for (double mu : {0.1, 1.0}) {
                out.push_back({k.label() + " R0=" + fmt_g(r0) + " mu=" + fmt_g(mu), k, mu, r0});
            }
        }
    }
    return out;
}

// 1. integration by parts identity on the kernel measures
Outcome criterion_kernel_identity()
{
    Outcome o;
    double worst = 0.0;
    const double beta = 2.0;
    for (const auto& k : {SurvivalKernel::step(), SurvivalKernel::linear(), SurvivalKernel::trunc_exp(1.0),
                          SurvivalKernel::trunc_exp(5.0)}) {
        for (double mu : {0.1, 0.5, 1.0, 2.0}) {
            const auto one   = [](double) { return cd(1.0); };
            const double lhs = beta / mu * (1.0 + stieltjes(k, one, mu).real());
            const double rhs = beta * weighted_riemann(k, one, mu).real();
            worst            = std::max(worst, std::abs(lhs - rhs));
            o.expect(std::abs(lhs - rhs) <= 1e-8, k.label() + " mu=" + fmt_g(mu));
        }
    }
    o.detail = "16 kernel/mu pairs, max |lhs - rhs| = " + fmt_g(worst);
    return o;
}

// 2. extinction below the threshold
Outcome criterion_extinction()
{
    Outcome o;
    double worst_excess = -1.0;
    double worst_end    = 0.0;
    for (double r0 : {0.5, 0.9, 1.0}) {
        const auto p = ModelParams::with_r0(SurvivalKernel::step(), 0.1, r0);
        const auto h = project_history(p, History::constant(p, 0.3, 1000));
        const auto v = check_gas1(p, h, 200.0, 1000);
        worst_excess = std::max(worst_excess, v.witness.at("max_excess_over_majorant"));
        if (r0 < 1.0) {
            worst_end = std::max(worst_end, v.witness.at("terminal_value"));
        }
        o.expect(v.pass, "R0=" + fmt_g(r0) + ": " + v.summary);
    }
    o.detail = "R0 in {0.5,0.9,1}, max I - M_floor(t) = " + fmt_g(worst_excess) + ", max I(T) (R0<1) = " + fmt_g(worst_end);
    return o;
}

// 3. ga1 branch: convergence and I <= 1/2
Outcome criterion_ga1()
{
    Outcome o;
    double worst_dev = 0.0, worst_max = 0.0, worst_tau = 0.0;
    int points       = 0;
    for (const auto& c : ga1_cases()) {
        const auto p       = ModelParams::with_r0(c.kernel, c.mu, c.r0);
        const double T     = verification_horizon(c.r0);
        for (const auto& hs : ga1_histories()) {
            const auto h    = hs.build(p, 500);
            const auto traj = solve_renewal(p, h, T, 500);
            const auto conv = check_convergence(p, traj);
            const auto inv  = check_inv1(p, traj);
            ++points;
            worst_dev = std::max(worst_dev, conv.witness.at("max_tail_deviation"));
            worst_max = std::max(worst_max, inv.witness.at("max_value"));
            if (conv.pass) {
                worst_tau = std::max(worst_tau, conv.witness.at("tau"));
            }
            o.expect(conv.pass, c.label + " " + describe(hs) + ": " + conv.summary);
            o.expect(inv.pass, c.label + " " + describe(hs) + ": " + inv.summary);
        }
    }
    o.detail = std::to_string(points) + " runs, max tail |I - I*| = " + fmt_g(worst_dev) + ", max I = " +
               fmt_g(worst_max) + ", latest settle time " + fmt_g(worst_tau);
    return o;
}

// 4. ga2 branch: one up-crossing of 1/2, none back, slope bound, convergence
Outcome criterion_ga2()
{
    Outcome o;
    double worst_dev = 0.0, worst_margin = 1e300;
    int points       = 0;
    for (const auto& c : ga2_cases()) {
        const auto p     = ModelParams::with_r0(c.kernel, c.mu, c.r0);
        const double T   = 400.0;
        const int n      = 1000;
        const double lb  = 0.5 * c.mu * (0.5 * c.r0 - 1.0);
        for (const auto& hs : ga2_histories()) {
            const auto h    = hs.build(p, n);
            const std::string tag = c.label + " " + describe(hs);
            o.expect(h.samples().back() < 0.5, tag + ": psi(0) >= 1/2");
            const auto traj = solve_renewal(p, h, T, n);
            const auto conv = check_convergence(p, traj);
            const auto inv  = check_inv2(p, traj);
            ++points;
            worst_dev = std::max(worst_dev, conv.witness.at("max_tail_deviation"));
            o.expect(conv.pass, tag + ": " + conv.summary);
            o.expect(inv.pass, tag + ": " + inv.summary);

            const auto crossings = crossing_times(traj, 0.5);
            int ups = 0, downs_after = 0;
            for (const auto& x : crossings) {
                if (x.direction == Crossing::Direction::up) {
                    ++ups;
                }
                else if (ups > 0) {
                    ++downs_after;
                }
            }
            o.expect(ups == 1 && downs_after == 0,
                     tag + ": " + std::to_string(ups) + " up / " + std::to_string(downs_after) + " down crossings");

            // forward differences at grid points within 1e-3 of 1/2, plus the step that straddles it
            const auto& v = traj.values();
            for (std::size_t k = 0; k + 1 < v.size(); ++k) {
                const bool near     = std::abs(v[k] - 0.5) < 1e-3;
                const bool straddle = v[k] < 0.5 && v[k + 1] >= 0.5;
                if (near || straddle) {
                    const double slope = (v[k + 1] - v[k]) * n;
                    worst_margin       = std::min(worst_margin, slope - lb);
                    o.expect(slope >= lb - 1e-3, tag + ": slope " + fmt_g(slope) + " at t=" + fmt_g(traj.time(k)) +
                                                     " below " + fmt_g(lb));
                }
            }
        }
    }
    o.detail = std::to_string(points) + " runs, max tail |I - I*| = " + fmt_g(worst_dev) +
               ", min (slope - bound) near 1/2 = " + fmt_g(worst_margin);
    return o;
}

// 5. persistence from a tiny initial infection
Outcome criterion_persistence()
{
    Outcome o;
    std::string mins;
    for (double r0 : {1.05, 1.1}) {
        const auto p = ModelParams::with_r0(SurvivalKernel::step(), 0.1, r0);
        const auto h = project_history(p, History::constant(p, 1e-4, 1000));
        const auto v = check_persistence(p, solve_renewal(p, h, 2000.0, 1000));
        o.expect(v.pass, "R0=" + fmt_g(r0) + ": " + v.summary);
        mins += (mins.empty() ? "" : ", ") + fmt_g(v.witness.at("tail_min")) + " > " + fmt_g(v.tolerances.at("delta"));
    }
    o.detail = "tail minima " + mins;
    return o;
}

// 6. spectral certificate
Outcome criterion_spectral()
{
    Outcome o;
    std::vector<Case> cases;
    for (const auto& c : ga1_cases()) {
        if (c.r0 != 2.0) {
            cases.push_back(c);
        }
    }
    for (const auto& c : ga2_cases()) {
        cases.push_back(c);
    }
    double worst_route = 0.0, worst_zero = 0.0;
    for (const auto& c : cases) {
        const auto p = ModelParams::with_r0(c.kernel, c.mu, c.r0);
        const int count = count_rhp_roots(p);
        o.expect(count == 0, c.label + ": " + std::to_string(count) + " roots with Re >= 0");

        const CharacteristicFunction f(p);
        const double r = apriori_bound(p);
        // 100 samples on the half-disk contour, avoiding lambda = 0
        for (int k = 0; k < 100; ++k) {
            cd z;
            if (k < 50) {
                z = r * std::exp(cd(0.0, std::numbers::pi * ((k + 0.5) / 50.0 - 0.5)));
            }
            else {
                z = cd(0.0, r * (1.0 - 2.0 * (k - 50 + 0.5) / 50.0));
            }
            const double d = std::abs(f.value(z) - f.value_by_parts(z));
            worst_route    = std::max(worst_route, d);
            o.expect(d <= 1e-8, c.label + ": routes differ by " + fmt_g(d));
        }
        const double z0 = std::abs(char_value(p, 0.0) - cd(2.0 - c.r0));
        worst_zero      = std::max(worst_zero, z0);
        o.expect(z0 <= 1e-10, c.label + ": value(0) off by " + fmt_g(z0));
    }
    o.detail = std::to_string(cases.size()) + " (kernel, R0, mu) points, max route gap = " + fmt_g(worst_route) +
               ", max |value(0) - (2 - R0)| = " + fmt_g(worst_zero);
    return o;
}

// 7. renewal vs dde: second-order agreement and equilibrium preservation
Outcome criterion_cross_solver()
{
    Outcome o;
    double min_order = 1e300, worst_eq = 0.0;
    for (const auto& c : ga1_cases()) {
        const auto p = ModelParams::with_r0(c.kernel, c.mu, c.r0);
        for (const auto& hs : ga1_histories()) {
            const std::string tag = c.label + " " + describe(hs);
            const auto h          = hs.build(p, 200);
            std::vector<double> d;
            for (int n : {200, 400, 800}) {
                d.push_back(max_difference(solve_renewal(p, h, 20.0, n), solve_dde(p, h, 20.0, n), 1.0));
            }
            const double order1 = std::log2(d[0] / d[1]);
            const double order2 = std::log2(d[1] / d[2]);
            min_order           = std::min({min_order, order1, order2});
            o.expect(order1 >= 1.5 && order2 >= 1.5,
                     tag + ": orders " + fmt_g(order1) + ", " + fmt_g(order2) + " (diffs " + fmt_g(d[0]) + ", " +
                         fmt_g(d[1]) + ", " + fmt_g(d[2]) + ")");
        }
        const double eq = *endemic_equilibrium(p);
        for (double level : {0.0, eq}) {
            for (SolverId id : {SolverId::renewal, SolverId::dde}) {
                const auto traj = solve(id, p, History::constant(p, level, 200), 20.0, 200);
                for (double v : traj.values()) {
                    worst_eq = std::max(worst_eq, std::abs(v - level));
                }
            }
        }
    }
    o.expect(worst_eq <= 1e-8, "equilibrium drift " + fmt_g(worst_eq));
    o.detail = "18 configurations, min empirical order = " + fmt_g(min_order) + ", max equilibrium drift = " +
               fmt_g(worst_eq);
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// 8. byte-identical reruns and manifest round trip
Outcome criterion_determinism()
{
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "renewal_sis_acceptance";
    fs::remove_all(dir);
    const auto cfg = parse_config(R"({"command":"simulate",
        "params":{"r0":3,"mu":0.1,"kernel":{"type":"trunc_exp","k":2}},
        "history":{"type":"pulse","base":0.01,"peak":0.2,"center":-0.5,"width":0.3},
        "T":50,"N":400,"output_dir":")" + dir.generic_string() + R"("})");
    const std::vector<std::string> files = {"trajectory_renewal.csv", "trajectory_dde.csv", "manifest.json"};

    std::ostringstream sink;
    RunOptions opt;
    opt.quiet = true;
    opt.out   = &sink;
    opt.err   = &sink;
    std::vector<std::string> first;
    o.expect(run(cfg, opt) == exit_ok, "first run failed: " + sink.str());
    for (const auto& f : files) {
        first.push_back(slurp(dir / f));
    }
    o.expect(run(cfg, opt) == exit_ok, "second run failed: " + sink.str());
    std::size_t bytes = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto again = slurp(dir / files[i]);
        bytes += again.size();
        o.expect(!again.empty() && again == first[i], files[i] + " differs between runs");
    }

    const auto manifest = nlohmann::ordered_json::parse(first[2]);
    const auto back     = parse_config(manifest["config"].dump());
    o.expect(back == cfg, "embedded config does not round-trip");
    o.expect(to_json(back).dump() == manifest["config"].dump(), "embedded config re-serializes differently");
    fs::remove_all(dir);
    o.detail = std::to_string(files.size()) + " files, " + std::to_string(bytes) + " bytes identical; manifest config round-trips";
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"kernel identity", criterion_kernel_identity},   {"threshold extinction", criterion_extinction},
        {"endemic convergence ga1", criterion_ga1},       {"endemic convergence ga2", criterion_ga2},
        {"persistence", criterion_persistence},           {"spectral certificate", criterion_spectral},
        {"cross-solver consistency", criterion_cross_solver}, {"determinism and format", criterion_determinism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        }
        catch (const std::exception& e) {
            o.pass          = false;
            o.first_failure = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %-26s %s  %.1fs  %s%s%s\n", i + 1, criteria[i].name, o.pass ? "PASS" : "FAIL",
                    secs, o.detail.c_str(), o.pass ? "" : "  first failure: ", o.first_failure.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
