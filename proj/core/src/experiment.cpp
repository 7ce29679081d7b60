#include "cosimrl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "cosimrl/cartpole.hpp"
#include "cosimrl/errors.hpp"

namespace cosimrl {

TrainResult train(Environment& env, QLearner& learner, const Discretizer& disc,
                  const TrainOptions& options) {
    if (options.n_episodes < 0) {
        throw std::invalid_argument("n_episodes must be >= 0");
    }
    if (options.max_steps < 1) {
        throw std::invalid_argument("max_steps must be >= 1");
    }

    TrainResult result;
    const auto start = std::chrono::steady_clock::now();

    for (int episode = 0; episode < options.n_episodes; ++episode) {
        Observation observation = env.reset();
        int state = disc.discretize(observation);
        int action = learner.random_action(); // first action of an episode
        for (int step = 1; step <= options.max_steps; ++step) {
            if (options.visualize) {
                std::cout << env.render() << '\n';
            }
            const StepResult outcome = env.step(action);
            const int next_state = disc.discretize(outcome.observation);
            learner.update(state, action, outcome.reward, next_state, outcome.done);
            action = learner.choose_action(next_state);
            if (!options.decay_per_episode) {
                learner.decay_exploration();
            }
            state = next_state;
            if (outcome.done || step == options.max_steps) {
                result.episode_lengths.push_back(step);
                break;
            }
        }
        if (options.decay_per_episode) {
            learner.decay_exploration();
        }
    }

    const auto end = std::chrono::steady_clock::now();
    result.wall_time_s = std::chrono::duration<double>(end - start).count();
    for (int length : result.episode_lengths) {
        result.steps_total += length;
    }
    return result;
}

ExperimentSpec default_experiment_spec() {
    ExperimentSpec spec;
    spec.env.model_input_names = {"f"};
    spec.env.model_output_names = {"x", "x_dot", "theta", "theta_dot"};
    spec.env.model_parameters = {{"m_cart", 10.0},
                                 {"m_pole", 1.0},
                                 {"theta_0", 85.0 / 180.0 * std::numbers::pi},
                                 {"theta_dot_0", 0.0}};
    spec.env.time_step = 0.05;
    spec.env.positive_reward = 1.0;
    spec.env.negative_reward = -100.0;
    spec.force_magnitude = 11.0;
    return spec;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RepeatHook& on_repeat) {
    if (spec.n_repeats < 1) {
        throw std::invalid_argument("n_repeats must be >= 1");
    }

    ExperimentResult result;
    result.spec = spec;

    auto env = make_cartpole_env(spec.env, spec.force_magnitude, spec.substep_target);
    const Discretizer disc(default_bins());
    const int n_actions = std::get<DiscreteSpace>(env->action_space()).n;

    TrainOptions options;
    options.n_episodes = spec.n_episodes;
    options.max_steps = spec.max_steps;
    options.visualize = spec.visualize;
    options.decay_per_episode = spec.decay_per_episode;

    for (int repeat = 0; repeat < spec.n_repeats; ++repeat) {
        const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(repeat);
        QLearner learner(disc.n_states(), n_actions, spec.learner, seed);
        if (on_repeat) {
            on_repeat(*env, repeat);
        }
        try {
            TrainResult trained = train(*env, learner, disc, options);
            result.lengths.push_back(std::move(trained.episode_lengths));
            result.exec_times.push_back(trained.wall_time_s);
            result.seeds.push_back(seed);
            result.steps_total += trained.steps_total;
        } catch (const std::exception& e) {
            result.failures.emplace_back(repeat, e.what());
        }
        env->reset();
    }
    return result;
}

double per_step_time(const ExperimentResult& result) {
    if (result.steps_total <= 0) {
        throw std::domain_error("per-step time undefined: no steps were taken");
    }
    double total = 0.0;
    for (double t : result.exec_times) {
        total += t;
    }
    return total / static_cast<double>(result.steps_total);
}

std::vector<double> moving_average(std::span<const double> xs, int window) {
    if (window < 1) {
        throw std::invalid_argument("moving average window must be >= 1");
    }
    std::vector<double> out(xs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum += xs[i];
        if (i >= static_cast<std::size_t>(window)) {
            sum -= xs[i - window];
        }
        const std::size_t covered = std::min<std::size_t>(i + 1, window);
        out[i] = sum / static_cast<double>(covered);
    }
    return out;
}

std::vector<double> moving_average(std::span<const int> xs, int window) {
    std::vector<double> values(xs.begin(), xs.end());
    return moving_average(std::span<const double>(values), window);
}

std::vector<double> average_smoothed(const std::vector<std::vector<int>>& lengths,
                                     int window) {
    if (lengths.empty()) {
        throw std::invalid_argument("average_smoothed needs a non-empty matrix");
    }
    const std::size_t n_episodes = lengths.front().size();
    std::vector<double> mean(n_episodes, 0.0);
    for (const auto& row : lengths) {
        if (row.size() != n_episodes) {
            throw std::invalid_argument("ragged episode-length matrix");
        }
        const std::vector<double> smoothed = moving_average(std::span<const int>(row), window);
        for (std::size_t i = 0; i < n_episodes; ++i) {
            mean[i] += smoothed[i];
        }
    }
    for (double& value : mean) {
        value /= static_cast<double>(lengths.size());
    }
    return mean;
}

std::string_view sweep_name(SweepKind kind) {
    switch (kind) {
    case SweepKind::force: return "force";
    case SweepKind::mass: return "mass";
    case SweepKind::reward: return "reward";
    case SweepKind::timestep: return "timestep";
    }
    return "unknown";
}

std::optional<SweepKind> parse_sweep(std::string_view name) {
    if (name == "force") return SweepKind::force;
    if (name == "mass") return SweepKind::mass;
    if (name == "reward") return SweepKind::reward;
    if (name == "timestep") return SweepKind::timestep;
    return std::nullopt;
}

namespace {

std::string format_g(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", value);
    return buffer;
}

} // namespace

std::string grid_label(SweepKind kind, const ExperimentSpec& spec) {
    switch (kind) {
    case SweepKind::force:
        return "f=" + format_g(spec.force_magnitude);
    case SweepKind::mass:
        return "m=" + format_g(spec.env.parameter("m_cart")) + ":" +
               format_g(spec.env.parameter("m_pole"));
    case SweepKind::reward:
        return "r=" + format_g(spec.env.positive_reward) + ":" +
               format_g(spec.env.negative_reward);
    case SweepKind::timestep:
        return "ts=" + format_g(spec.env.time_step);
    }
    return "?";
}

std::vector<ExperimentSpec> sweep_grid(SweepKind kind, const ExperimentSpec& base,
                                       const SweepOverrides& overrides) {
    ExperimentSpec proto = base;
    proto.n_episodes = kind == SweepKind::mass ? 200 : 100;
    proto.n_repeats = 5;
    if (overrides.n_episodes) proto.n_episodes = *overrides.n_episodes;
    if (overrides.n_repeats) proto.n_repeats = *overrides.n_repeats;
    if (overrides.max_steps) proto.max_steps = *overrides.max_steps;

    std::vector<ExperimentSpec> grid;
    switch (kind) {
    case SweepKind::force:
        for (double force : kForceGrid) {
            ExperimentSpec spec = proto;
            spec.force_magnitude = force;
            grid.push_back(std::move(spec));
        }
        break;
    case SweepKind::mass:
        for (const auto& [m_cart, m_pole] : kMassGrid) {
            ExperimentSpec spec = proto;
            spec.env.model_parameters["m_cart"] = m_cart;
            spec.env.model_parameters["m_pole"] = m_pole;
            grid.push_back(std::move(spec));
        }
        break;
    case SweepKind::reward:
        for (const auto& [positive, negative] : kRewardGrid) {
            ExperimentSpec spec = proto;
            spec.env.positive_reward = positive;
            spec.env.negative_reward = negative;
            grid.push_back(std::move(spec));
        }
        break;
    case SweepKind::timestep:
        for (double time_step : kTimeStepGrid) {
            ExperimentSpec spec = proto;
            spec.env.time_step = time_step;
            grid.push_back(std::move(spec));
        }
        break;
    }
    return grid;
}

std::vector<TaggedResult> run_sweep(SweepKind kind, const ExperimentSpec& base,
                                    const SweepOverrides& overrides) {
    std::vector<TaggedResult> results;
    for (const ExperimentSpec& spec : sweep_grid(kind, base, overrides)) {
        TaggedResult tagged;
        tagged.sweep = std::string(sweep_name(kind));
        tagged.grid_point = grid_label(kind, spec);
        tagged.result = run_experiment(spec);
        results.push_back(std::move(tagged));
    }
    return results;
}

namespace {

int repeat_number(const ExperimentResult& result, std::size_t row) {
    // 1-based repeat index, reconstructed from the seed layout.
    return static_cast<int>(result.seeds[row] - result.spec.base_seed) + 1;
}

std::string format_value(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

} // namespace

void write_episodes_csv(std::ostream& out, const std::vector<TaggedResult>& results) {
    out << "sweep,grid_point,repeat,episode,length\n";
    for (const auto& tagged : results) {
        for (std::size_t row = 0; row < tagged.result.lengths.size(); ++row) {
            const auto& episodes = tagged.result.lengths[row];
            for (std::size_t episode = 0; episode < episodes.size(); ++episode) {
                out << tagged.sweep << ',' << tagged.grid_point << ','
                    << repeat_number(tagged.result, row) << ',' << episode + 1 << ','
                    << episodes[episode] << '\n';
            }
        }
    }
}

void write_curves_csv(std::ostream& out, const std::vector<TaggedResult>& results,
                      int window) {
    out << "sweep,grid_point,episode,avg_smoothed_length\n";
    for (const auto& tagged : results) {
        if (tagged.result.lengths.empty()) {
            continue;
        }
        const std::vector<double> curve = average_smoothed(tagged.result.lengths, window);
        for (std::size_t episode = 0; episode < curve.size(); ++episode) {
            out << tagged.sweep << ',' << tagged.grid_point << ',' << episode + 1 << ','
                << format_value(curve[episode]) << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const std::vector<TaggedResult>& results,
                       int window) {
    out << "sweep,grid_point,n_repeats,n_episodes,mean_final_smoothed_length,"
           "seconds_per_step,wall_time_s\n";
    for (const auto& tagged : results) {
        const ExperimentResult& result = tagged.result;
        double final_smoothed = std::numeric_limits<double>::quiet_NaN();
        if (!result.lengths.empty() && !result.lengths.front().empty()) {
            final_smoothed = average_smoothed(result.lengths, window).back();
        }
        double seconds_per_step = std::numeric_limits<double>::quiet_NaN();
        if (result.steps_total > 0) {
            seconds_per_step = per_step_time(result);
        }
        double wall = 0.0;
        for (double t : result.exec_times) {
            wall += t;
        }
        out << tagged.sweep << ',' << tagged.grid_point << ',' << result.lengths.size()
            << ',' << result.spec.n_episodes << ',' << format_value(final_smoothed)
            << ',' << format_value(seconds_per_step) << ',' << format_value(wall)
            << '\n';
    }
}

} // namespace cosimrl
