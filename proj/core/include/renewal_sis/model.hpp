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
#ifndef RENEWAL_SIS_MODEL_HPP
#define RENEWAL_SIS_MODEL_HPP

#include "renewal_sis/kernel.hpp"

#include <optional>
#include <span>
#include <vector>

namespace rsis
{

class Trajectory;

/**
 * @brief Transmission coefficient, natural mortality and infectious-period survival.
 *
 * Rates are per unit of the rescaled maximum infectious period. R0 is computed
 * once at construction.
 */
class ModelParams
{
public:
    ModelParams(double beta, double mu, SurvivalKernel kernel);

    /// Chooses beta so that the basic reproduction number equals r0.
    static ModelParams with_r0(SurvivalKernel kernel, double mu, double r0);

    double beta() const
    {
        return m_beta;
    }
    double mu() const
    {
        return m_mu;
    }
    const SurvivalKernel& kernel() const
    {
        return m_kernel;
    }
    double r0() const
    {
        return m_r0;
    }

private:
    double m_beta;
    double m_mu;
    SurvivalKernel m_kernel;
    double m_r0;
};

/// beta * int_0^1 F(a) e^{-mu a} da
double r0(const ModelParams& params);

/// 1 - 1/R0 when R0 > 1, otherwise absent.
std::optional<double> endemic_equilibrium(const ModelParams& params);

/**
 * @brief Weights of the delayed window [t-1, t] on the grid a_j = j/n.
 *
 * riemann[j]   = int_0^1 phi_j(a) F(a) e^{-mu a} da
 * stieltjes[j] = int_0^1 phi_j(a) e^{-mu a} dF(a)
 * where phi_j is the piecewise-linear hat centred at j/n. Using them on grid
 * samples of a function integrates its piecewise-linear interpolant exactly
 * against the kernel.
 */
struct DelayWeights {
    int n = 0;
    std::vector<double> riemann;
    std::vector<double> stieltjes;
};

DelayWeights delay_weights(const ModelParams& params, int n);

/**
 * @brief Initial function psi on [-1,0] sampled on a uniform grid of M+1 points.
 *
 * samples()[i] = psi(-1 + i/M); samples().back() = psi(0). The compatibility
 * residual |psi(0) - G(psi)| is computed at construction. A projected history
 * remembers the unprojected samples and the blend width so it can be
 * re-projected at another resolution.
 */
class History
{
public:
    History(const ModelParams& params, std::vector<double> samples);

    static History constant(const ModelParams& params, double value, int m);

    int resolution() const
    {
        return static_cast<int>(m_samples.size()) - 1;
    }
    std::span<const double> samples() const
    {
        return m_samples;
    }
    std::span<const double> raw_samples() const
    {
        return m_raw.empty() ? std::span<const double>(m_samples) : std::span<const double>(m_raw);
    }
    /// psi(theta) by linear interpolation, theta in [-1,0].
    double value(double theta) const;

    double compat_residual() const
    {
        return m_residual;
    }
    /// Residual before projection; equals compat_residual() for unprojected histories.
    double original_residual() const
    {
        return m_original_residual;
    }
    bool projected() const
    {
        return m_blend_width > 0.0;
    }
    double blend_width() const
    {
        return m_blend_width;
    }
    /// psi in Y_+ : some sample is positive.
    bool positive() const;

    /// The same initial function on the grid of n steps per unit; re-projected when this one was projected.
    History at_resolution(const ModelParams& params, int n) const;

private:
    friend History project_history(const ModelParams&, const History&, std::optional<double>);

    std::vector<double> m_samples;
    std::vector<double> m_raw;
    double m_residual          = 0.0;
    double m_original_residual = 0.0;
    double m_blend_width       = 0.0;
};

/// G(phi) = beta int_0^1 (1 - phi(-a)) phi(-a) F(a) e^{-mu a} da on the history grid.
double eval_G(const ModelParams& params, const History& history);

/// Same functional with precomputed weights on samples ordered as in History.
double eval_G(const ModelParams& params, const DelayWeights& weights, std::span<const double> samples);

/**
 * @brief Enforces psi(0) = G(psi).
 *
 * On [-w, 0] (w defaults to one grid cell) the samples are blended linearly
 * toward the value p = psi(0) with weight 1 + theta/w, and p is found by
 * fixed-point iteration p <- G(psi_p) to a residual below 1e-12.
 * Throws NumericError when the iteration does not converge within 100 steps
 * or p leaves [0,1].
 */
History project_history(const ModelParams& params, const History& history,
                        std::optional<double> blend_width = std::nullopt);

/// i(t,a) = beta (1 - I(t-a)) I(t-a) F(a) e^{-mu a}; requires t - a >= -1.
double infection_age_density(const ModelParams& params, const Trajectory& trajectory, double t, double a);

} // namespace rsis

#endif // RENEWAL_SIS_MODEL_HPP
