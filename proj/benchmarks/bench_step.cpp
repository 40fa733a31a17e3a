#include <benchmark/benchmark.h>

#include <cmath>

#include "qtraj/lindblad.hpp"
#include "qtraj/observables.hpp"
#include "qtraj/stochastic.hpp"

using namespace qtraj;

namespace {

SystemModel pair_model(int n_levels) {
    DuffingParams params;
    return duffing_pair(params, FockSpace(n_levels, 2));
}

StateVector pair_state(int n_levels) {
    StateVector psi = product_state(coherent_state(n_levels, Complex(0.7, 0.0)),
                                    coherent_state(n_levels, Complex(-0.7, 0.0)));
    psi.normalize();
    return psi;
}

void bm_qsd_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SystemModel model = pair_model(n);
    StateVector psi = pair_state(n);
    NoiseStream noise(1, 0);
    double tau = 0.0;
    for (auto _ : state) {
        psi = qsd_step(psi, model, tau, 1e-5, noise);
        tau += 1e-5;
    }
    state.SetItemsProcessed(state.iterations());
}

void bm_jump_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SystemModel model = pair_model(n);
    StateVector psi = pair_state(n);
    NoiseStream noise(1, 0);
    double tau = 0.0;
    for (auto _ : state) {
        psi = jump_step(psi, model, tau, 1e-5, noise);
        tau += 1e-5;
    }
    state.SetItemsProcessed(state.iterations());
}

void bm_entanglement_entropy(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    FockSpace space(n, 2);
    StateVector psi = pair_state(n);
    for (auto _ : state) benchmark::DoNotOptimize(entanglement_entropy(psi, space));
}

void bm_lindblad_rhs(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SystemModel model = damped_driven_mode(0.25, 0.3, 1.3, FockSpace(n, 1));
    StateVector psi = coherent_state(n, Complex(0.6, 0.0));
    DensityMatrix rho = psi * psi.adjoint();
    for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(rho, model, 0.0));
}

}  // namespace

BENCHMARK(bm_qsd_step)->Arg(12)->Arg(16)->Arg(24);
BENCHMARK(bm_jump_step)->Arg(12)->Arg(16)->Arg(24);
BENCHMARK(bm_entanglement_entropy)->Arg(12)->Arg(16)->Arg(24);
BENCHMARK(bm_lindblad_rhs)->Arg(15)->Arg(30)->Arg(60);

BENCHMARK_MAIN();
