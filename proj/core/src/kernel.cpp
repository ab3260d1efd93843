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
#include "renewal_sis/kernel.hpp"
#include "renewal_sis/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <utility>

namespace rsis
{

namespace
{

constexpr double total_mass_tol = 1e-9;
constexpr double merge_tol      = 1e-13;

// Gauss-Legendre rule on [-1,1], expanded from the symmetric half stored by boost.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

const GaussRule& gauss_rule()
{
    static const GaussRule rule = [] {
        using gl                = boost::math::quadrature::gauss<double, 7>;
        const auto& abscissa    = gl::abscissa();
        const auto& half_weight = gl::weights();
        GaussRule r;
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            if (abscissa[i] == 0.0) {
                r.x.push_back(0.0);
                r.w.push_back(half_weight[i]);
            }
            else {
                r.x.push_back(-abscissa[i]);
                r.w.push_back(half_weight[i]);
                r.x.push_back(abscissa[i]);
                r.w.push_back(half_weight[i]);
            }
        }
        return r;
    }();
    return rule;
}

std::vector<double> merged_breaks(std::vector<double> breaks)
{
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> out;
    for (double b : breaks) {
        if (b < 0.0 || b > 1.0) {
            continue;
        }
        if (out.empty() || b - out.back() > merge_tol) {
            out.push_back(b);
        }
    }
    if (out.empty() || out.front() != 0.0) {
        out.insert(out.begin(), 0.0);
    }
    if (out.back() != 1.0) {
        if (1.0 - out.back() <= merge_tol) {
            out.back() = 1.0;
        }
        else {
            out.push_back(1.0);
        }
    }
    return out;
}

// Applies the composite rule to density(a) on every panel of every segment.
// density is evaluated only inside or at the ends of a segment on which it is continuous.
template <class Density>
void add_panels(DiscreteMeasure& m, double lo, double hi, const Quadrature& quad, Density&& density)
{
    const double len = hi - lo;
    if (len <= 0.0) {
        return;
    }
    const int panels = std::max(1, static_cast<int>(std::ceil(len * quad.panels_per_unit - 1e-9)));
    const double h   = len / panels;
    for (int p = 0; p < panels; ++p) {
        const double x0 = lo + p * h;
        const double x1 = (p + 1 == panels) ? hi : lo + (p + 1) * h;
        if (quad.rule == QuadratureRule::trapezoid) {
            const double half = 0.5 * (x1 - x0);
            m.nodes.push_back(x0);
            m.weights.push_back(half * density(x0));
            m.nodes.push_back(x1);
            m.weights.push_back(half * density(x1));
        }
        else {
            const auto& rule  = gauss_rule();
            const double mid  = 0.5 * (x0 + x1);
            const double half = 0.5 * (x1 - x0);
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                const double a = mid + half * rule.x[i];
                m.nodes.push_back(a);
                m.weights.push_back(half * rule.w[i] * density(a));
            }
        }
    }
}

} // namespace

double DiscreteMeasure::total() const
{
    return integrate([](double) { return 1.0; });
}

std::vector<double> DiscreteMeasure::hat_weights(int n) const
{
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double x = nodes[k] * n;
        int j          = static_cast<int>(std::floor(x));
        j              = std::clamp(j, 0, n - 1);
        double t       = std::clamp(x - j, 0.0, 1.0);
        out[j] += (1.0 - t) * weights[k];
        out[j + 1] += t * weights[k];
    }
    return out;
}

SurvivalKernel::SurvivalKernel(std::vector<Knot> knots, std::vector<Atom> atoms, std::string label)
    : m_knots(std::move(knots))
    , m_atoms(std::move(atoms))
    , m_label(std::move(label))
{
    std::sort(m_atoms.begin(), m_atoms.end(), [](const Atom& l, const Atom& r) {
        return l.age < r.age;
    });
    validate();
}

SurvivalKernel SurvivalKernel::step()
{
    return SurvivalKernel({{0.0, 1.0}, {1.0, 1.0}}, {{1.0, 1.0}}, "step");
}

SurvivalKernel SurvivalKernel::linear()
{
    return SurvivalKernel({{0.0, 1.0}, {1.0, 0.0}}, {}, "linear");
}

SurvivalKernel SurvivalKernel::trunc_exp(double rate, int intervals)
{
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw InvariantError("rate positivity", fmt::format("trunc_exp rate must be > 0, got {}", rate));
    }
    if (intervals < 1) {
        throw InvariantError("resolution", "trunc_exp needs at least one interval");
    }
    const double tail = std::exp(-rate);
    std::vector<Knot> knots;
    knots.reserve(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) {
        const double a = static_cast<double>(i) / intervals;
        double v       = (std::exp(-rate * a) - tail) / (1.0 - tail);
        if (i == 0) {
            v = 1.0;
        }
        else if (i == intervals) {
            v = 0.0;
        }
        knots.push_back({a, v});
    }
    return SurvivalKernel(std::move(knots), {}, fmt::format("trunc_exp({})", rate));
}

SurvivalKernel SurvivalKernel::tabulated(std::vector<Knot> knots, std::vector<Atom> atoms, std::string label)
{
    return SurvivalKernel(std::move(knots), std::move(atoms), std::move(label));
}

void SurvivalKernel::validate() const
{
    if (m_knots.size() < 2) {
        throw InvariantError("knots", "at least two knots (ages 0 and 1) are required");
    }
    if (m_knots.front().age != 0.0 || m_knots.back().age != 1.0) {
        throw InvariantError("support", "knot ages must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i < m_knots.size(); ++i) {
        const auto& k = m_knots[i];
        if (!std::isfinite(k.value) || k.value < 0.0 || k.value > 1.0) {
            throw InvariantError("range", fmt::format("knot value {} at age {} outside [0,1]", k.value, k.age));
        }
        if (i > 0) {
            if (!(k.age > m_knots[i - 1].age)) {
                throw InvariantError("ordering", "knot ages must be strictly increasing");
            }
            if (k.value > m_knots[i - 1].value) {
                throw InvariantError("monotonicity", fmt::format("survival increases between ages {} and {}",
                                                                 m_knots[i - 1].age, k.age));
            }
        }
    }
    if (std::abs(m_knots.front().value - 1.0) > 1e-12) {
        throw InvariantError("F(0)=1", fmt::format("survival at age 0 is {}", m_knots.front().value));
    }
    for (std::size_t i = 0; i < m_atoms.size(); ++i) {
        const auto& a = m_atoms[i];
        if (!(a.age > 0.0) || a.age > 1.0) {
            throw InvariantError("atom age", fmt::format("atom age {} outside (0,1]", a.age));
        }
        if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
            throw InvariantError("atom mass", fmt::format("atom mass {} must be > 0", a.mass));
        }
        if (i > 0 && a.age == m_atoms[i - 1].age) {
            throw InvariantError("atom age", fmt::format("duplicate atom at age {}", a.age));
        }
    }
    const double total = continuous_decrease() + atom_mass();
    if (std::abs(total - 1.0) > total_mass_tol) {
        throw InvariantError("total variation", fmt::format("total decrease is {}, expected 1", total));
    }
    for (double b : breakpoints()) {
        if (b < 1.0 && !(eval_right(b) > 0.0)) {
            throw InvariantError("positivity", fmt::format("survival vanishes at age {} < 1", b));
        }
    }
}

double SurvivalKernel::continuous_part(double age) const
{
    auto it = std::upper_bound(m_knots.begin(), m_knots.end(), age, [](double a, const Knot& k) {
        return a < k.age;
    });
    if (it == m_knots.begin()) {
        return m_knots.front().value;
    }
    if (it == m_knots.end()) {
        return m_knots.back().value;
    }
    const Knot& hi = *it;
    const Knot& lo = *(it - 1);
    const double t = (age - lo.age) / (hi.age - lo.age);
    return lo.value + t * (hi.value - lo.value);
}

double SurvivalKernel::slope_magnitude(double age) const
{
    auto it = std::upper_bound(m_knots.begin(), m_knots.end(), age, [](double a, const Knot& k) {
        return a < k.age;
    });
    if (it == m_knots.begin()) {
        ++it;
    }
    if (it == m_knots.end()) {
        --it;
    }
    const Knot& hi = *it;
    const Knot& lo = *(it - 1);
    return (lo.value - hi.value) / (hi.age - lo.age);
}

double SurvivalKernel::mass_up_to(double age, bool inclusive) const
{
    double s = 0.0;
    for (const auto& a : m_atoms) {
        if (a.age < age || (inclusive && a.age == age)) {
            s += a.mass;
        }
    }
    return s;
}

double SurvivalKernel::eval(double age) const
{
    if (!(age >= 0.0 && age <= 1.0)) {
        throw ConfigError(fmt::format("age {} outside [0,1]", age));
    }
    if (age == 1.0) {
        return 0.0;
    }
    return std::max(0.0, continuous_part(age) - mass_up_to(age, false));
}

double SurvivalKernel::eval_right(double age) const
{
    if (!(age >= 0.0 && age <= 1.0)) {
        throw ConfigError(fmt::format("age {} outside [0,1]", age));
    }
    if (age == 1.0) {
        return 0.0;
    }
    return std::max(0.0, continuous_part(age) - mass_up_to(age, true));
}

double SurvivalKernel::continuous_decrease() const
{
    return m_knots.front().value - m_knots.back().value;
}

double SurvivalKernel::atom_mass() const
{
    double s = 0.0;
    for (const auto& a : m_atoms) {
        s += a.mass;
    }
    return s;
}

std::vector<double> SurvivalKernel::breakpoints() const
{
    std::vector<double> b;
    b.reserve(m_knots.size() + m_atoms.size());
    for (const auto& k : m_knots) {
        b.push_back(k.age);
    }
    for (const auto& a : m_atoms) {
        b.push_back(a.age);
    }
    return merged_breaks(std::move(b));
}

DiscreteMeasure SurvivalKernel::riemann_measure(double mu, Quadrature quad, std::span<const double> extra_breaks) const
{
    std::vector<double> b = breakpoints();
    b.insert(b.end(), extra_breaks.begin(), extra_breaks.end());
    b = merged_breaks(std::move(b));

    DiscreteMeasure m;
    for (std::size_t s = 0; s + 1 < b.size(); ++s) {
        // inside (b[s], b[s+1]) no atom sits, so F = C - (atoms at ages <= b[s])
        const double offset = mass_up_to(b[s], true);
        add_panels(m, b[s], b[s + 1], quad, [&](double a) {
            return (continuous_part(a) - offset) * std::exp(-mu * a);
        });
    }
    return m;
}

DiscreteMeasure SurvivalKernel::stieltjes_measure(double mu, Quadrature quad,
                                                  std::span<const double> extra_breaks) const
{
    std::vector<double> b = breakpoints();
    b.insert(b.end(), extra_breaks.begin(), extra_breaks.end());
    b = merged_breaks(std::move(b));

    DiscreteMeasure m;
    for (std::size_t s = 0; s + 1 < b.size(); ++s) {
        const double rho = slope_magnitude(0.5 * (b[s] + b[s + 1]));
        if (rho == 0.0) {
            continue;
        }
        add_panels(m, b[s], b[s + 1], quad, [&](double a) {
            return -rho * std::exp(-mu * a);
        });
    }
    for (const auto& a : m_atoms) {
        m.nodes.push_back(a.age);
        m.weights.push_back(-a.mass * std::exp(-mu * a.age));
    }
    return m;
}

std::complex<double> weighted_riemann(const SurvivalKernel& kernel, const ComplexFn& g, double mu, Quadrature quad)
{
    return kernel.riemann_measure(mu, quad).integrate(g);
}

std::complex<double> stieltjes(const SurvivalKernel& kernel, const ComplexFn& g, double mu, Quadrature quad)
{
    return kernel.stieltjes_measure(mu, quad).integrate(g);
}

} // namespace rsis
