#include <benchmark/benchmark.h>

#include <numbers>

#include "cosimrl/cartpole.hpp"
#include "cosimrl/experiment.hpp"

using namespace cosimrl;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

CartPoleBackend make_backend(double substep = kDefaultSubstepTarget) {
    CartPoleBackend backend(substep);
    backend.initialize({{"m_cart", 10.0},
                        {"m_pole", 1.0},
                        {"theta_0", 85.0 / 180.0 * std::numbers::pi},
                        {"theta_dot_0", 0.0}});
    return backend;
}

void BM_Dynamics(benchmark::State& state) {
    const CartPoleParams params;
    CartPoleState s{0.1, 0.2, kHalfPi - 0.05, -0.3};
    for (auto _ : state) {
        const CartPoleState d = dynamics(s, 11.0, params);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_Dynamics);

void BM_Rk4Step(benchmark::State& state) {
    const CartPoleParams params;
    const DerivativeFn deriv = [&params](const StateVector& v) -> StateVector {
        const CartPoleState d = dynamics({v[0], v[1], v[2], v[3]}, 11.0, params);
        return {d.x, d.x_dot, d.theta, d.theta_dot};
    };
    StateVector y{0.0, 0.0, kHalfPi - 0.05, 0.0};
    for (auto _ : state) {
        y = rk4_step(y, deriv, 0.005);
        benchmark::DoNotOptimize(y);
        y[2] = kHalfPi - 0.05; // keep the pole near upright
    }
}
BENCHMARK(BM_Rk4Step);

void BM_BackendStep(benchmark::State& state) {
    CartPoleBackend backend = make_backend();
    backend.set_inputs(std::vector<double>{11.0});
    for (auto _ : state) {
        backend.do_step(0.05);
        benchmark::DoNotOptimize(backend.get_outputs());
        if (std::abs(backend.state().x) > 100.0) {
            state.PauseTiming();
            backend = make_backend();
            backend.set_inputs(std::vector<double>{11.0});
            state.ResumeTiming();
        }
    }
}
BENCHMARK(BM_BackendStep);

void BM_Discretize(benchmark::State& state) {
    const Discretizer disc(default_bins());
    const std::array values{0.3, -0.2, kHalfPi + 0.1, 0.7};
    for (auto _ : state) {
        benchmark::DoNotOptimize(disc.discretize(values));
    }
}
BENCHMARK(BM_Discretize);

void BM_TrainTenEpisodes(benchmark::State& state) {
    const ExperimentSpec spec = default_experiment_spec();
    const Discretizer disc(default_bins());
    TrainOptions options;
    options.n_episodes = 10;
    for (auto _ : state) {
        auto env = make_cartpole_env(spec.env, spec.force_magnitude);
        QLearner learner(disc.n_states(), 2, spec.learner, 42);
        const TrainResult result = train(*env, learner, disc, options);
        benchmark::DoNotOptimize(result);
        state.SetItemsProcessed(state.items_processed() + result.steps_total);
    }
}
BENCHMARK(BM_TrainTenEpisodes);

} // namespace

BENCHMARK_MAIN();
