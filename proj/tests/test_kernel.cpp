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
#include "renewal_sis/kernel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <string>

using namespace rsis;
using cd = std::complex<double>;

namespace
{

// Closed forms, written independently of the library.
double step_riemann(double mu)
{
    return mu == 0.0 ? 1.0 : (1.0 - std::exp(-mu)) / mu;
}

double linear_riemann(double mu)
{
    return mu == 0.0 ? 0.5 : 1.0 / mu - (1.0 - std::exp(-mu)) / (mu * mu);
}

double linear_stieltjes(double mu)
{
    return mu == 0.0 ? -1.0 : -(1.0 - std::exp(-mu)) / mu;
}

// (e^{-ka} - e^{-k}) / (1 - e^{-k})
double texp_riemann(double k, double mu)
{
    const double ek = std::exp(-k);
    return ((1.0 - std::exp(-(k + mu))) / (k + mu) - ek * step_riemann(mu)) / (1.0 - ek);
}

double texp_stieltjes(double k, double mu)
{
    return -k / (1.0 - std::exp(-k)) * (1.0 - std::exp(-(k + mu))) / (k + mu);
}

std::string invariant_of(auto&& fn)
{
    try {
        fn();
    }
    catch (const InvariantError& e) {
        return e.invariant();
    }
    return "<none>";
}

} // namespace

TEST(Kernel, StepPointValues)
{
    const auto k = SurvivalKernel::step();
    EXPECT_EQ(k.eval(0.0), 1.0);
    EXPECT_EQ(k.eval(0.999), 1.0);
    EXPECT_EQ(k.eval(1.0), 0.0);
    EXPECT_EQ(k.atom_mass(), 1.0);
    EXPECT_EQ(k.continuous_decrease(), 0.0);
    EXPECT_THROW(k.eval(1.5), ConfigError);
    EXPECT_THROW(k.eval(-0.1), ConfigError);
}

TEST(Kernel, InteriorAtomIsLeftContinuous)
{
    const auto k = SurvivalKernel::tabulated({{0.0, 1.0}, {1.0, 0.3}}, {{0.5, 0.3}});
    EXPECT_NEAR(k.eval(0.5), 0.65, 1e-15);
    EXPECT_NEAR(k.eval_right(0.5), 0.35, 1e-15);
    EXPECT_NEAR(k.eval(0.75), 1.0 - 0.7 * 0.75 - 0.3, 1e-15);
    EXPECT_EQ(k.eval(1.0), 0.0);
}

TEST(Kernel, TruncExpMatchesFormulaAtKnots)
{
    const double rate = 2.0;
    const auto k      = SurvivalKernel::trunc_exp(rate, 64);
    for (int j = 0; j <= 63; ++j) {
        const double a = j / 64.0;
        const double f = (std::exp(-rate * a) - std::exp(-rate)) / (1.0 - std::exp(-rate));
        EXPECT_NEAR(k.eval(a), f, 1e-14) << a;
    }
}

TEST(Kernel, RiemannClosedForms)
{
    for (double mu : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        EXPECT_NEAR(SurvivalKernel::step().riemann_measure(mu).total(), step_riemann(mu), 1e-13) << mu;
        EXPECT_NEAR(SurvivalKernel::linear().riemann_measure(mu).total(), linear_riemann(mu), 1e-13) << mu;
        // piecewise-linear sampling of the exponential: O(k^2 / intervals^2)
        EXPECT_NEAR(SurvivalKernel::trunc_exp(5.0).riemann_measure(mu).total(), texp_riemann(5.0, mu), 2e-5) << mu;
    }
}

TEST(Kernel, StieltjesClosedForms)
{
    for (double mu : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        EXPECT_NEAR(SurvivalKernel::step().stieltjes_measure(mu).total(), -std::exp(-mu), 1e-14) << mu;
        EXPECT_NEAR(SurvivalKernel::linear().stieltjes_measure(mu).total(), linear_stieltjes(mu), 1e-13) << mu;
        EXPECT_NEAR(SurvivalKernel::trunc_exp(1.0).stieltjes_measure(mu).total(), texp_stieltjes(1.0, mu), 1e-5)
            << mu;
    }
    // total mass -1 at mu = 0, atoms included
    const auto mixed = SurvivalKernel::tabulated({{0.0, 1.0}, {0.4, 0.8}, {1.0, 0.4}}, {{0.7, 0.4}});
    EXPECT_NEAR(mixed.stieltjes_measure(0.0).total(), -1.0, 1e-14);
}

TEST(Kernel, ComplexIntegrandStep)
{
    // int_0^1 e^{-lambda a} e^{-mu a} da = (1 - e^{-(lambda+mu)}) / (lambda + mu)
    const double mu = 0.3;
    for (cd lambda : {cd(0.0, 0.0), cd(1.0, 2.0), cd(-0.5, 7.0), cd(0.0, -20.0)}) {
        const cd s     = lambda + mu;
        const cd exact = (1.0 - std::exp(-s)) / s;
        const cd got   = weighted_riemann(
            SurvivalKernel::step(), [&](double a) { return std::exp(-lambda * a); }, mu);
        EXPECT_NEAR(std::abs(got - exact), 0.0, 1e-13) << lambda;
        const cd st = stieltjes(
            SurvivalKernel::step(), [&](double a) { return std::exp(-lambda * a); }, mu);
        EXPECT_NEAR(std::abs(st + std::exp(-s)), 0.0, 1e-14) << lambda;
    }
}

TEST(Kernel, IntegrationByPartsIdentity)
{
    // mu int F e^{-mu a} da = 1 + int e^{-mu a} dF
    const std::vector<SurvivalKernel> kernels = {
        SurvivalKernel::step(), SurvivalKernel::linear(), SurvivalKernel::trunc_exp(1.0),
        SurvivalKernel::trunc_exp(5.0),
        SurvivalKernel::tabulated({{0.0, 1.0}, {0.25, 0.9}, {0.6, 0.5}, {1.0, 0.2}}, {{0.3, 0.1}, {1.0, 0.1}})};
    for (const auto& k : kernels) {
        for (double mu : {0.1, 0.5, 1.0, 2.0}) {
            const double lhs = mu * k.riemann_measure(mu).total();
            const double rhs = 1.0 + k.stieltjes_measure(mu).total();
            EXPECT_NEAR(lhs, rhs, 1e-12) << k.label() << " mu=" << mu;
        }
    }
}

TEST(Kernel, TrapezoidConvergesAtOrderTwo)
{
    const auto k = SurvivalKernel::linear();
    const double mu = 1.0;
    const double exact = linear_riemann(mu);
    double prev        = 0.0;
    for (int panels : {16, 32, 64, 128}) {
        const double err = std::abs(k.riemann_measure(mu, {QuadratureRule::trapezoid, panels}).total() - exact);
        if (prev > 0.0) {
            EXPECT_GE(prev / err, 3.9) << panels;
        }
        prev = err;
    }
}

TEST(Kernel, HatWeightsIntegratePiecewiseLinearExactly)
{
    const auto k  = SurvivalKernel::trunc_exp(2.0);
    const int n   = 40;
    const auto m  = k.riemann_measure(0.7, {}, std::vector<double>{});
    const auto hw = m.hat_weights(n);
    ASSERT_EQ(hw.size(), static_cast<std::size_t>(n + 1));
    EXPECT_NEAR(std::accumulate(hw.begin(), hw.end(), 0.0), m.total(), 1e-14);
    // g(a) = a is linear on every cell
    double viaHat = 0.0;
    for (int j = 0; j <= n; ++j) {
        viaHat += hw[j] * (static_cast<double>(j) / n);
    }
    EXPECT_NEAR(viaHat, m.integrate([](double a) { return a; }), 1e-14);
}

TEST(Kernel, BreakpointsIncludeKnotsAndAtoms)
{
    const auto k  = SurvivalKernel::tabulated({{0.0, 1.0}, {0.4, 0.8}, {1.0, 0.4}}, {{0.7, 0.4}});
    const auto bp = k.breakpoints();
    const std::vector<double> expected = {0.0, 0.4, 0.7, 1.0};
    ASSERT_EQ(bp.size(), expected.size());
    for (std::size_t i = 0; i < bp.size(); ++i) {
        EXPECT_DOUBLE_EQ(bp[i], expected[i]);
    }
}

TEST(Kernel, ValidationNamesTheInvariant)
{
    EXPECT_EQ(invariant_of([] { SurvivalKernel::tabulated({{0.0, 1.0}}, {}); }), "knots");
    EXPECT_EQ(invariant_of([] { SurvivalKernel::tabulated({{0.0, 1.0}, {0.9, 0.0}}, {}); }), "support");
    EXPECT_EQ(invariant_of([] { SurvivalKernel::tabulated({{0.0, 1.0}, {0.5, 0.4}, {1.0, 0.6}}, {{1.0, 0.6}}); }),
              "monotonicity");
    EXPECT_EQ(invariant_of([] { SurvivalKernel::tabulated({{0.0, 0.9}, {1.0, 0.0}}, {}); }), "F(0)=1");
    EXPECT_EQ(invariant_of([] { SurvivalKernel::tabulated({{0.0, 1.0}, {1.0, 0.5}}, {{0.5, -0.5}}); }),
              "atom mass");
    EXPECT_EQ(invariant_of([] { SurvivalKernel::tabulated({{0.0, 1.0}, {1.0, 0.5}}, {{0.5, 0.4}}); }),
              "total variation");
    EXPECT_EQ(invariant_of([] { SurvivalKernel::tabulated({{0.0, 1.0}, {0.5, 0.0}, {1.0, 0.0}}, {}); }),
              "positivity");
    EXPECT_EQ(invariant_of([] { SurvivalKernel::tabulated({{0.0, 1.0}, {0.5, 0.5}, {0.5, 0.5}, {1.0, 0.0}}, {}); }),
              "ordering");
    EXPECT_EQ(invariant_of([] { SurvivalKernel::trunc_exp(-1.0); }), "rate positivity");
}
