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
#include "renewal_sis/spectral.hpp"
#include "renewal_sis/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace rsis
{

namespace
{

constexpr double root_on_contour_tol = 1e-9;
constexpr std::size_t max_samples    = std::size_t{1} << 20;
constexpr std::size_t initial_samples = 256;
constexpr double polish_tol          = 1e-12;
constexpr int scan_points            = 4096;

// Closed contour: s in [0,1] is the arc R e^{i theta}, theta from -pi/2 to pi/2,
// s in [1,2] is the imaginary axis from iR down to -iR.
std::complex<double> contour_point(double s, double radius)
{
    using namespace std::complex_literals;
    if (s <= 1.0) {
        const double theta = -0.5 * std::numbers::pi + std::numbers::pi * s;
        return std::polar(radius, theta);
    }
    return 1i * (radius * (3.0 - 2.0 * s));
}

} // namespace

double linearization_coefficient(const ModelParams& params)
{
    const auto eq = endemic_equilibrium(params);
    if (!eq) {
        throw ConfigError(fmt::format("characteristic equation needs R0 > 1, got R0 = {}", params.r0()));
    }
    const double factor = 1.0 - 2.0 * *eq;
    // R0 = 2 up to rounding of the quadrature: treat as exactly degenerate
    if (std::abs(factor) < 1e-12) {
        return 0.0;
    }
    return factor * params.beta();
}

CharacteristicFunction::CharacteristicFunction(const ModelParams& params, Quadrature quad)
    : m_c(linearization_coefficient(params))
    , m_mu(params.mu())
    , m_riemann(params.kernel().riemann_measure(params.mu(), quad))
    , m_stieltjes(params.kernel().stieltjes_measure(params.mu(), quad))
{
}

std::complex<double> CharacteristicFunction::value(std::complex<double> lambda) const
{
    return m_c * m_riemann.integrate([&](double a) {
        return std::exp(-lambda * a);
    });
}

std::complex<double> CharacteristicFunction::value_by_parts(std::complex<double> lambda) const
{
    auto kernel_exp = [&](double a) {
        return std::exp(-lambda * a);
    };
    // d(F e^{-mu a}) = e^{-mu a} dF - mu F e^{-mu a} da
    const std::complex<double> measure =
        m_stieltjes.integrate(kernel_exp) - m_mu * m_riemann.integrate(kernel_exp);
    return m_c / lambda * (1.0 + measure);
}

std::complex<double> char_value(const ModelParams& params, std::complex<double> lambda)
{
    return CharacteristicFunction(params).value(lambda);
}

double apriori_bound(const ModelParams& params)
{
    return 2.0 * std::abs(linearization_coefficient(params)) + 1.0;
}

WindingCount winding_count(const ModelParams& params)
{
    const CharacteristicFunction chi(params);
    WindingCount out;
    if (chi.coefficient() == 0.0) {
        return out;
    }
    const double radius = apriori_bound(params);

    struct Sample {
        double s;
        std::complex<double> f;
    };
    auto sample = [&](double s) {
        const std::complex<double> lambda = contour_point(s, radius);
        const std::complex<double> v      = chi.value(lambda);
        const std::complex<double> f      = v - 1.0;
        if (std::abs(f) < root_on_contour_tol) {
            throw NumericError(fmt::format("characteristic root within {} of the contour at lambda = ({}, {}); "
                                           "perturb the contour radius",
                                           root_on_contour_tol, lambda.real(), lambda.imag()));
        }
        if (std::abs(lambda) > 1e-8) {
            out.route_discrepancy = std::max(out.route_discrepancy, std::abs(v - chi.value_by_parts(lambda)));
        }
        return Sample{s, f};
    };

    std::vector<Sample> pts;
    pts.reserve(2 * initial_samples + 1);
    for (std::size_t i = 0; i <= 2 * initial_samples; ++i) {
        pts.push_back(sample(2.0 * static_cast<double>(i) / (2 * initial_samples)));
    }

    auto phase_step = [](const Sample& a, const Sample& b) {
        return std::arg(b.f / a.f);
    };

    bool refined = true;
    while (refined) {
        refined = false;
        std::vector<Sample> next;
        next.reserve(pts.size() * 2);
        next.push_back(pts.front());
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (std::abs(phase_step(pts[i], pts[i + 1])) >= 0.5 * std::numbers::pi) {
                next.push_back(sample(0.5 * (pts[i].s + pts[i + 1].s)));
                refined = true;
            }
            next.push_back(pts[i + 1]);
        }
        pts = std::move(next);
        if (pts.size() > max_samples) {
            throw NumericError("winding number refinement exceeded 2^20 samples");
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += phase_step(pts[i], pts[i + 1]);
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const double count = std::round(turns);
    if (std::abs(turns - count) > 1e-6) {
        throw NumericError(fmt::format("winding number {} is not an integer", turns));
    }
    out.count   = static_cast<int>(count);
    out.samples = pts.size();
    return out;
}

int count_rhp_roots(const ModelParams& params)
{
    return winding_count(params).count;
}

std::optional<RealRoot> dominant_real_root(const ModelParams& params, double search_floor)
{
    const CharacteristicFunction chi(params);
    if (chi.coefficient() == 0.0) {
        return std::nullopt;
    }
    const double top = apriori_bound(params);
    if (!(search_floor < top)) {
        throw ConfigError(fmt::format("search floor {} must lie below the bound {}", search_floor, top));
    }
    auto h = [&](double x) {
        return chi.value(x).real() - 1.0;
    };

    // scan downward so the first sign change is the largest root
    double hi    = top;
    double h_hi  = h(hi);
    bool found   = false;
    double lo    = hi;
    double h_lo  = h_hi;
    for (int i = 1; i <= scan_points; ++i) {
        lo   = top - (top - search_floor) * static_cast<double>(i) / scan_points;
        h_lo = h(lo);
        if (h_lo == 0.0 || (h_lo > 0.0) != (h_hi > 0.0)) {
            found = true;
            break;
        }
        hi   = lo;
        h_hi = h_lo;
    }
    if (!found) {
        return std::nullopt;
    }
    const double bracket_lo = lo;
    const double bracket_hi = hi;

    if (h_lo == 0.0) {
        return RealRoot{lo, bracket_lo, bracket_hi, 0.0};
    }
    for (int i = 0; i < 200 && hi - lo > 1e-9 * std::max(1.0, std::abs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double hm  = h(mid);
        if ((hm > 0.0) == (h_lo > 0.0)) {
            lo   = mid;
            h_lo = hm;
        }
        else {
            hi   = mid;
            h_hi = hm;
        }
    }
    // secant polish from the bracket ends
    double x0 = lo, f0 = h_lo, x1 = hi, f1 = h_hi;
    for (int i = 0; i < 50 && std::abs(f1) >= polish_tol; ++i) {
        if (f1 == f0) {
            break;
        }
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0              = x1;
        f0              = f1;
        x1              = x2;
        f1              = h(x1);
    }
    if (std::abs(f0) < std::abs(f1)) {
        std::swap(x0, x1);
        std::swap(f0, f1);
    }
    return RealRoot{x1, bracket_lo, bracket_hi, std::abs(f1)};
}

SpectralReport spectral_report(const ModelParams& params, double search_floor)
{
    SpectralReport r;
    r.c            = linearization_coefficient(params);
    r.bound_radius = apriori_bound(params);
    r.degenerate   = r.c == 0.0;
    if (r.degenerate) {
        return r;
    }
    const WindingCount w = winding_count(params);
    r.rhp_root_count     = w.count;
    r.samples_used       = w.samples;
    r.route_discrepancy  = w.route_discrepancy;
    r.dominant_real_root = dominant_real_root(params, search_floor);
    return r;
}

} // namespace rsis
