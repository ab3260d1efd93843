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
#include "renewal_sis/model.hpp"
#include "renewal_sis/error.hpp"
#include "renewal_sis/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace rsis
{

namespace
{

constexpr double projection_tol = 1e-12;
constexpr int projection_max_iter = 100;

double infection_pressure(double x)
{
    return x * (1.0 - x);
}

// Linear interpolation of uniform samples on [-1,0].
double interpolate(std::span<const double> samples, double theta)
{
    const int m    = static_cast<int>(samples.size()) - 1;
    const double x = (theta + 1.0) * m;
    int i          = std::clamp(static_cast<int>(std::floor(x)), 0, m - 1);
    const double t = std::clamp(x - i, 0.0, 1.0);
    return (1.0 - t) * samples[i] + t * samples[i + 1];
}

} // namespace

ModelParams::ModelParams(double beta, double mu, SurvivalKernel kernel)
    : m_beta(beta)
    , m_mu(mu)
    , m_kernel(std::move(kernel))
{
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw InvariantError("beta positivity", fmt::format("beta must be > 0, got {}", beta));
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw InvariantError("mu nonnegativity", fmt::format("mu must be >= 0, got {}", mu));
    }
    m_r0 = m_beta * weighted_riemann(m_kernel, [](double) { return std::complex<double>(1.0); }, m_mu).real();
    if (!(m_r0 > 0.0)) {
        throw InvariantError("R0 positivity", fmt::format("R0 = {}", m_r0));
    }
}

ModelParams ModelParams::with_r0(SurvivalKernel kernel, double mu, double r0)
{
    if (!(r0 > 0.0)) {
        throw InvariantError("R0 positivity", fmt::format("requested R0 = {}", r0));
    }
    const double mass = weighted_riemann(kernel, [](double) { return std::complex<double>(1.0); }, mu).real();
    return ModelParams(r0 / mass, mu, std::move(kernel));
}

double r0(const ModelParams& params)
{
    return params.r0();
}

std::optional<double> endemic_equilibrium(const ModelParams& params)
{
    const double r = params.r0();
    if (r <= 1.0) {
        return std::nullopt;
    }
    return 1.0 - 1.0 / r;
}

DelayWeights delay_weights(const ModelParams& params, int n)
{
    if (n < 1) {
        throw ConfigError(fmt::format("grid resolution must be >= 1, got {}", n));
    }
    std::vector<double> grid(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        grid[j] = static_cast<double>(j) / n;
    }
    const Quadrature quad{QuadratureRule::gauss_legendre, 64};
    DelayWeights w;
    w.n         = n;
    w.riemann   = params.kernel().riemann_measure(params.mu(), quad, grid).hat_weights(n);
    w.stieltjes = params.kernel().stieltjes_measure(params.mu(), quad, grid).hat_weights(n);
    return w;
}

double eval_G(const ModelParams& params, const DelayWeights& weights, std::span<const double> samples)
{
    const int m = static_cast<int>(samples.size()) - 1;
    if (m != weights.n) {
        throw ConfigError(fmt::format("history resolution {} does not match weights resolution {}", m, weights.n));
    }
    double sum = 0.0;
    for (int j = 0; j <= m; ++j) {
        sum += weights.riemann[j] * infection_pressure(samples[m - j]);
    }
    return params.beta() * sum;
}

double eval_G(const ModelParams& params, const History& history)
{
    return eval_G(params, delay_weights(params, history.resolution()), history.samples());
}

History::History(const ModelParams& params, std::vector<double> samples)
    : m_samples(std::move(samples))
{
    if (m_samples.size() < 2) {
        throw InvariantError("history grid", "a history needs at least two samples");
    }
    for (double v : m_samples) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw InvariantError("history range", fmt::format("history sample {} outside [0,1]", v));
        }
    }
    m_residual          = std::abs(m_samples.back() - eval_G(params, *this));
    m_original_residual = m_residual;
}

History History::constant(const ModelParams& params, double value, int m)
{
    if (m < 1) {
        throw ConfigError(fmt::format("history resolution must be >= 1, got {}", m));
    }
    return History(params, std::vector<double>(static_cast<std::size_t>(m) + 1, value));
}

double History::value(double theta) const
{
    if (!(theta >= -1.0 && theta <= 0.0)) {
        throw ConfigError(fmt::format("history argument {} outside [-1,0]", theta));
    }
    return interpolate(m_samples, theta);
}

bool History::positive() const
{
    return std::any_of(m_samples.begin(), m_samples.end(), [](double v) {
        return v > 0.0;
    });
}

History History::at_resolution(const ModelParams& params, int n) const
{
    if (n < 1) {
        throw ConfigError(fmt::format("history resolution must be >= 1, got {}", n));
    }
    const auto source = raw_samples();
    if (n == resolution() && !projected()) {
        return *this;
    }
    std::vector<double> resampled(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        resampled[i] = interpolate(source, -1.0 + static_cast<double>(i) / n);
    }
    History out(params, std::move(resampled));
    if (projected()) {
        return project_history(params, out, std::max(m_blend_width, 1.0 / n));
    }
    return out;
}

History project_history(const ModelParams& params, const History& history, std::optional<double> blend_width)
{
    const int m    = history.resolution();
    const double w = blend_width.value_or(1.0 / m);
    if (!(w > 0.0) || w > 1.0) {
        throw ConfigError(fmt::format("blend width {} outside (0,1]", w));
    }
    if (history.compat_residual() < projection_tol) {
        return history;
    }

    const DelayWeights weights = delay_weights(params, m);
    const auto base            = history.samples();
    std::vector<double> ramp(base.size());
    for (int i = 0; i <= m; ++i) {
        const double theta = -1.0 + static_cast<double>(i) / m;
        ramp[i]            = std::max(0.0, 1.0 + theta / w);
    }
    ramp.back() = 1.0;

    std::vector<double> blended(base.begin(), base.end());
    auto blend = [&](double p) {
        for (int i = 0; i <= m; ++i) {
            blended[i] = (1.0 - ramp[i]) * base[i] + ramp[i] * p;
        }
    };

    double p = eval_G(params, weights, base);
    bool converged = false;
    for (int it = 0; it < projection_max_iter; ++it) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
            throw NumericError(fmt::format("history projection left [0,1] (psi(0) = {}); history is pathological", p));
        }
        blend(p);
        const double next = eval_G(params, weights, blended);
        if (std::abs(next - p) < projection_tol) {
            p         = next;
            converged = true;
            break;
        }
        p = next;
    }
    if (!converged || p > 1.0) {
        throw NumericError(
            fmt::format("history projection did not converge in {} iterations", projection_max_iter));
    }
    blend(p);

    History out(params, blended);
    out.m_raw               = std::vector<double>(history.raw_samples().begin(), history.raw_samples().end());
    out.m_original_residual = history.original_residual();
    out.m_blend_width       = w;
    return out;
}

double infection_age_density(const ModelParams& params, const Trajectory& trajectory, double t, double a)
{
    if (!(a >= 0.0 && a <= 1.0)) {
        throw ConfigError(fmt::format("infection age {} outside [0,1]", a));
    }
    if (t - a < -1.0) {
        throw ConfigError(fmt::format("I({}) is before the start of the history", t - a));
    }
    const double i = trajectory.value_at(t - a);
    return params.beta() * (1.0 - i) * i * params.kernel().eval(a) * std::exp(-params.mu() * a);
}

} // namespace rsis
