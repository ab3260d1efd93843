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
#ifndef RENEWAL_SIS_SPECTRAL_HPP
#define RENEWAL_SIS_SPECTRAL_HPP

#include "renewal_sis/model.hpp"

#include <complex>
#include <cstddef>
#include <optional>

namespace rsis
{

/**
 * @brief Characteristic function of the endemic equilibrium,
 *   lambda -> c * int_0^1 e^{-lambda a} F(a) e^{-mu a} da,  c = (1 - 2 I*) beta.
 *
 * Roots of the characteristic equation are the solutions of value(lambda) = 1.
 * Both integration measures are discretized once so repeated evaluation on a
 * contour is cheap.
 */
class CharacteristicFunction
{
public:
    /// Throws ConfigError when R0 <= 1 (no endemic equilibrium).
    explicit CharacteristicFunction(const ModelParams& params,
                                    Quadrature quad = {QuadratureRule::gauss_legendre, 128});

    double coefficient() const
    {
        return m_c;
    }

    std::complex<double> value(std::complex<double> lambda) const;

    /// (c / lambda) (1 + int e^{-lambda a} d(F e^{-mu a})), valid for lambda != 0.
    std::complex<double> value_by_parts(std::complex<double> lambda) const;

private:
    double m_c;
    double m_mu;
    DiscreteMeasure m_riemann;
    DiscreteMeasure m_stieltjes;
};

/// (1 - 2 I*) beta; throws ConfigError when R0 <= 1.
double linearization_coefficient(const ModelParams& params);

std::complex<double> char_value(const ModelParams& params, std::complex<double> lambda);

/// Radius 2|c| + 1 enclosing every root with Re lambda >= 0.
double apriori_bound(const ModelParams& params);

struct WindingCount {
    int count = 0;
    std::size_t samples = 0;
    /// max |value - value_by_parts| seen on the contour (where |lambda| > 1e-8)
    double route_discrepancy = 0.0;
};

/**
 * @brief Argument-principle count of roots in the closed right half-disk of radius apriori_bound.
 *
 * Returns 0 immediately when c = 0. Throws NumericError when a contour sample
 * lies within 1e-9 of a root or refinement exceeds 2^20 samples.
 */
WindingCount winding_count(const ModelParams& params);

int count_rhp_roots(const ModelParams& params);

struct RealRoot {
    double root;
    double bracket_lo;
    double bracket_hi;
    double residual;
};

/// Largest real solution of value(lambda) = 1 in [search_floor, apriori_bound], or absent.
std::optional<RealRoot> dominant_real_root(const ModelParams& params, double search_floor = -50.0);

struct SpectralReport {
    double c = 0.0;
    double bound_radius = 0.0;
    int rhp_root_count = 0;
    std::optional<RealRoot> dominant_real_root;
    std::size_t samples_used = 0;
    double route_discrepancy = 0.0;
    /// c == 0: the characteristic function vanishes identically
    bool degenerate = false;
};

SpectralReport spectral_report(const ModelParams& params, double search_floor = -50.0);

} // namespace rsis

#endif // RENEWAL_SIS_SPECTRAL_HPP
