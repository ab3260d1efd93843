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
#include "renewal_sis/error.hpp"
#include "renewal_sis/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace rsis;
using cd = std::complex<double>;

namespace
{

// Step kernel: c int_0^1 e^{-(lambda+mu) a} da.
cd step_char(double c, double mu, cd lambda)
{
    const cd s = lambda + mu;
    if (std::abs(s) < 1e-12) {
        return c;
    }
    return c * (1.0 - std::exp(-s)) / s;
}

// Zeros of step_char - 1 inside the closed right half-disk of radius r,
// counted by accumulating the phase on a uniformly and densely sampled boundary.
int dense_count(double c, double mu, double r)
{
    const int m  = 200000;
    double total = 0.0;
    auto f       = [&](cd z) {
        return step_char(c, mu, z) - 1.0;
    };
    auto walk = [&](auto&& path) {
        cd prev = f(path(0.0));
        for (int k = 1; k <= m; ++k) {
            const cd cur = f(path(static_cast<double>(k) / m));
            total += std::arg(cur / prev);
            prev = cur;
        }
    };
    const double eps = 1e-9; // shifts the segment just left of the axis, keeping roots on it inside
    walk([&](double s) { return cd(-eps, 0.0) + r * std::exp(cd(0.0, std::numbers::pi * (s - 0.5))); });
    walk([&](double s) { return cd(-eps, r * (1.0 - 2.0 * s)); });
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

double bisect_real_root(double c, double mu, double lo, double hi)
{
    auto g = [&](double x) {
        return step_char(c, mu, x).real() - 1.0;
    };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(lo) * g(mid) <= 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST(Spectral, ValueAtZeroIsTwoMinusR0)
{
    for (const auto& kernel : {SurvivalKernel::step(), SurvivalKernel::linear(), SurvivalKernel::trunc_exp(2.0)}) {
        for (double r0 : {1.2, 1.5, 2.5, 5.0}) {
            const auto p = ModelParams::with_r0(kernel, 0.1, r0);
            EXPECT_NEAR(char_value(p, 0.0).real(), 2.0 - r0, 1e-10) << kernel.label() << ' ' << r0;
            EXPECT_NEAR(char_value(p, 0.0).imag(), 0.0, 1e-15);
        }
    }
}

TEST(Spectral, MatchesStepClosedForm)
{
    const auto p   = ModelParams::with_r0(SurvivalKernel::step(), 0.7, 3.0);
    const double c = linearization_coefficient(p);
    EXPECT_NEAR(c, (1.0 - 2.0 * (1.0 - 1.0 / 3.0)) * p.beta(), 1e-14);
    for (cd z : {cd(0.5, 0.0), cd(1.0, 3.0), cd(-2.0, 10.0), cd(0.0, -40.0)}) {
        EXPECT_NEAR(std::abs(char_value(p, z) - step_char(c, 0.7, z)), 0.0, 1e-13) << z;
    }
}

TEST(Spectral, RoutesAgree)
{
    for (const auto& kernel : {SurvivalKernel::step(), SurvivalKernel::linear(), SurvivalKernel::trunc_exp(5.0)}) {
        const auto p = ModelParams::with_r0(kernel, 1.0, 3.0);
        const CharacteristicFunction f(p);
        for (int k = 0; k < 50; ++k) {
            const cd z = 4.0 * std::exp(cd(0.0, -1.5 + 0.06 * k));
            EXPECT_NEAR(std::abs(f.value(z) - f.value_by_parts(z)), 0.0, 1e-10) << z;
        }
    }
}

TEST(Spectral, WindingCountAgreesWithDenseOracle)
{
    for (double mu : {0.0, 0.5, 2.0}) {
        for (double r0 : {1.1, 1.5, 3.0, 8.0}) {
            const auto p   = ModelParams::with_r0(SurvivalKernel::step(), mu, r0);
            const double c = linearization_coefficient(p);
            const auto w   = winding_count(p);
            EXPECT_EQ(w.count, dense_count(c, mu, apriori_bound(p))) << mu << ' ' << r0;
            EXPECT_EQ(w.count, 0);
            EXPECT_LT(w.route_discrepancy, 1e-8);
        }
    }
}

TEST(Spectral, NoRootsInRightHalfPlane)
{
    for (const auto& kernel : {SurvivalKernel::linear(), SurvivalKernel::trunc_exp(2.0),
                               SurvivalKernel::tabulated({{0.0, 1.0}, {0.5, 0.8}, {1.0, 0.5}}, {{0.6, 0.2}, {1.0, 0.3}})}) {
        for (double r0 : {1.05, 1.9, 2.1, 4.0, 20.0}) {
            EXPECT_EQ(count_rhp_roots(ModelParams::with_r0(kernel, 0.3, r0)), 0) << kernel.label() << ' ' << r0;
        }
    }
}

TEST(Spectral, AprioriBound)
{
    const auto p = ModelParams::with_r0(SurvivalKernel::linear(), 0.2, 4.0);
    EXPECT_DOUBLE_EQ(apriori_bound(p), 2.0 * std::abs(linearization_coefficient(p)) + 1.0);
}

TEST(Spectral, DominantRealRootMatchesBisection)
{
    // 1 < R0 < 2: c > 0 and the real root is negative
    for (double mu : {0.1, 1.0}) {
        for (double r0 : {1.2, 1.5, 1.9}) {
            const auto p   = ModelParams::with_r0(SurvivalKernel::step(), mu, r0);
            const double c = linearization_coefficient(p);
            const auto root = dominant_real_root(p);
            ASSERT_TRUE(root) << mu << ' ' << r0;
            // step_char is decreasing in real lambda, so the root is unique
            const double want = bisect_real_root(c, mu, -50.0, 0.0);
            EXPECT_NEAR(root->root, want, 1e-9);
            EXPECT_LT(root->root, 0.0);
            EXPECT_LE(root->bracket_lo, root->root);
            EXPECT_GE(root->bracket_hi, root->root);
            EXPECT_LT(std::abs(root->residual), 1e-10);
        }
    }
    // R0 > 2: c < 0 and the real characteristic function stays below 1
    EXPECT_FALSE(dominant_real_root(ModelParams::with_r0(SurvivalKernel::step(), 0.1, 3.0)));
}

TEST(Spectral, DegenerateAtR0Two)
{
    const auto p = ModelParams::with_r0(SurvivalKernel::trunc_exp(2.0), 0.1, 2.0);
    EXPECT_EQ(linearization_coefficient(p), 0.0);
    const auto report = spectral_report(p);
    EXPECT_TRUE(report.degenerate);
    EXPECT_EQ(report.rhp_root_count, 0);
    EXPECT_FALSE(report.dominant_real_root);
    EXPECT_DOUBLE_EQ(report.bound_radius, 1.0);
}

TEST(Spectral, NeedsEndemicEquilibrium)
{
    EXPECT_THROW(linearization_coefficient(ModelParams::with_r0(SurvivalKernel::step(), 0.1, 1.0)), ConfigError);
    EXPECT_THROW(CharacteristicFunction(ModelParams::with_r0(SurvivalKernel::step(), 0.1, 0.5)), ConfigError);
}

TEST(Spectral, ReportFields)
{
    const auto p = ModelParams::with_r0(SurvivalKernel::step(), 0.5, 1.5);
    const auto r = spectral_report(p);
    EXPECT_FALSE(r.degenerate);
    EXPECT_DOUBLE_EQ(r.c, linearization_coefficient(p));
    EXPECT_DOUBLE_EQ(r.bound_radius, apriori_bound(p));
    EXPECT_GE(r.samples_used, 512u);
    EXPECT_TRUE(r.dominant_real_root);
}
