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
#ifndef RENEWAL_SIS_KERNEL_HPP
#define RENEWAL_SIS_KERNEL_HPP

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rsis
{

enum class QuadratureRule
{
    trapezoid,
    gauss_legendre,
};

/**
 * @brief Composite quadrature settings.
 *
 * Panels never straddle a knot or atom of the kernel (or any extra breakpoint
 * passed by the caller); each breakpoint-free segment is split into
 * ceil(length * panels_per_unit) equal panels.
 */
struct Quadrature {
    QuadratureRule rule = QuadratureRule::gauss_legendre;
    int panels_per_unit = 1024;
};

struct Knot {
    double age;
    double value;
};

struct Atom {
    double age;
    double mass;
};

/**
 * @brief A linear functional g -> sum_k weights[k] * g(nodes[k]).
 *
 * Produced by SurvivalKernel to discretize either da-weighted or dF-weighted
 * integrals once and reuse the nodes for many integrands.
 */
struct DiscreteMeasure {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class Fn>
    auto integrate(Fn&& g) const
    {
        using R = decltype(g(0.0));
        // Kahan summation: thousands of same-sign terms per unit interval
        R sum{};
        R carry{};
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const R y = weights[k] * g(nodes[k]) - carry;
            const R t = sum + y;
            carry     = (t - sum) - y;
            sum       = t;
        }
        return sum;
    }

    double total() const;

    /// Weights of the hat basis on the uniform grid j/n, j = 0..n.
    /// Exact for the measure when every node lies inside a single grid cell.
    std::vector<double> hat_weights(int n) const;
};

/**
 * @brief Survival function of the infectious period on the rescaled age interval [0,1].
 *
 * Stored as a continuous piecewise-linear component C (knots) plus finitely many
 * downward atoms. With the left-continuous convention
 *     F(a) = C(a) - sum_{a_i < a} s_i   for 0 <= a < 1,   F(1) = 0.
 * Invariants: C(0) = 1, F nonincreasing, F > 0 on [0,1), total decrease 1.
 */
class SurvivalKernel
{
public:
    /// F = 1 on [0,1), F(1) = 0: the classical fixed infectious period.
    static SurvivalKernel step();
    /// F(a) = 1 - a.
    static SurvivalKernel linear();
    /// Normalized truncated exponential (e^{-ka} - e^{-k}) / (1 - e^{-k}), sampled piecewise-linearly.
    static SurvivalKernel trunc_exp(double rate, int intervals = 512);
    /// Knots are (age, C(age)) of the continuous component; atoms are (age, mass).
    static SurvivalKernel tabulated(std::vector<Knot> knots, std::vector<Atom> atoms, std::string label = "tabulated");

    /// Left-continuous point value F(a); throws ConfigError for a outside [0,1].
    double eval(double age) const;
    /// Right limit F(a+), with F(1+) = 0.
    double eval_right(double age) const;

    std::span<const Knot> knots() const
    {
        return m_knots;
    }
    std::span<const Atom> atoms() const
    {
        return m_atoms;
    }
    const std::string& label() const
    {
        return m_label;
    }

    double continuous_decrease() const;
    double atom_mass() const;

    /// Sorted ages where F or its slope may be discontinuous, including 0 and 1.
    std::vector<double> breakpoints() const;

    /// Discretizes g -> int_0^1 g(a) F(a) e^{-mu a} da.
    DiscreteMeasure riemann_measure(double mu, Quadrature quad = {}, std::span<const double> extra_breaks = {}) const;
    /// Discretizes g -> int_0^1 g(a) e^{-mu a} dF(a) (a nonpositive measure of total mass -1 at mu = 0).
    DiscreteMeasure stieltjes_measure(double mu, Quadrature quad = {}, std::span<const double> extra_breaks = {}) const;

private:
    SurvivalKernel(std::vector<Knot> knots, std::vector<Atom> atoms, std::string label);

    void validate() const;
    double continuous_part(double age) const;
    double slope_magnitude(double age) const;
    // sum of masses of atoms with age <= a (inclusive) or < a (exclusive)
    double mass_up_to(double age, bool inclusive) const;

    std::vector<Knot> m_knots;
    std::vector<Atom> m_atoms;
    std::string m_label;
};

using ComplexFn = std::function<std::complex<double>(double)>;

/// int_0^1 g(a) F(a) e^{-mu a} da.
std::complex<double> weighted_riemann(const SurvivalKernel& kernel, const ComplexFn& g, double mu,
                                      Quadrature quad = {});

/// int_0^1 g(a) e^{-mu a} dF(a).
std::complex<double> stieltjes(const SurvivalKernel& kernel, const ComplexFn& g, double mu, Quadrature quad = {});

} // namespace rsis

#endif // RENEWAL_SIS_KERNEL_HPP
