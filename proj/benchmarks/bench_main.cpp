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
#include "renewal_sis/solver.hpp"
#include "renewal_sis/spectral.hpp"

#include <benchmark/benchmark.h>

#include <complex>

using namespace rsis;

namespace
{

SurvivalKernel kernel_for(int id)
{
    return id == 0 ? SurvivalKernel::step() : SurvivalKernel::trunc_exp(2.0);
}

// one unit of time = N steps
void BM_RenewalUnit(benchmark::State& state)
{
    const int n  = static_cast<int>(state.range(0));
    const auto p = ModelParams::with_r0(kernel_for(static_cast<int>(state.range(1))), 0.1, 3.0);
    const auto h = project_history(p, History::constant(p, 0.1, n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_renewal(p, h, 1.0, n).values().back());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RenewalUnit)->ArgsProduct({{200, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_DdeUnit(benchmark::State& state)
{
    const int n  = static_cast<int>(state.range(0));
    const auto p = ModelParams::with_r0(kernel_for(static_cast<int>(state.range(1))), 0.1, 3.0);
    const auto h = project_history(p, History::constant(p, 0.1, n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_dde(p, h, 1.0, n).values().back());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_DdeUnit)->ArgsProduct({{200, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_CharacteristicValue(benchmark::State& state)
{
    const auto p = ModelParams::with_r0(kernel_for(static_cast<int>(state.range(0))), 0.1, 3.0);
    const CharacteristicFunction f(p);
    std::complex<double> z(0.3, 1.7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.value(z));
        z += std::complex<double>(0.0, 1e-3);
    }
}
BENCHMARK(BM_CharacteristicValue)->Arg(0)->Arg(1);

void BM_WindingCount(benchmark::State& state)
{
    const auto p = ModelParams::with_r0(kernel_for(static_cast<int>(state.range(0))), 0.1, 3.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_rhp_roots(p));
    }
}
BENCHMARK(BM_WindingCount)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DelayWeights(benchmark::State& state)
{
    const auto p = ModelParams::with_r0(SurvivalKernel::trunc_exp(2.0), 0.1, 3.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(delay_weights(p, static_cast<int>(state.range(0))).riemann.data());
    }
}
BENCHMARK(BM_DelayWeights)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
