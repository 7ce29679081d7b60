#ifndef COSIMRL_EXPERIMENT_HPP
#define COSIMRL_EXPERIMENT_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cosimrl/agent.hpp"
#include "cosimrl/environment.hpp"

namespace cosimrl {

struct TrainOptions {
    int n_episodes = 100;
    int max_steps = 200; // episode cap
    bool visualize = false; // render() to stdout before every step
    bool decay_per_episode = false; // sensitivity option; default decays per step
};

struct TrainResult {
    std::vector<int> episode_lengths; // one entry per episode, in [1, max_steps]
    double wall_time_s = 0.0;
    long long steps_total = 0;
};

/// One training run: per episode, reset, pick the first action uniformly at
/// random, then loop step / update / epsilon-greedy choice / epsilon decay
/// until done or the step cap. Epsilon is not reset between episodes.
TrainResult train(Environment& env, QLearner& learner, const Discretizer& disc,
                  const TrainOptions& options);

/// Everything needed to reproduce one experiment: environment configuration,
/// learner hyperparameters and repetition counts. Repeat i trains a fresh
/// learner seeded with base_seed + i.
struct ExperimentSpec {
    EnvConfig env;
    double force_magnitude = 11.0;
    double substep_target = kDefaultSubstepTarget;
    LearnerParams learner;
    int n_repeats = 5;
    int n_episodes = 100;
    int max_steps = 200;
    std::uint64_t base_seed = 0;
    bool visualize = false;
    bool decay_per_episode = false;
};

/// The Listing-style base configuration every sweep starts from: force 11 N,
/// masses (10, 1) kg, rewards (1, -100), time step 0.05 s, pole tilted to 85
/// degrees.
ExperimentSpec default_experiment_spec();

struct ExperimentResult {
    ExperimentSpec spec; // snapshot
    std::vector<std::vector<int>> lengths; // one row of n_episodes per successful repeat
    std::vector<double> exec_times;        // seconds, one per successful repeat
    std::vector<std::uint64_t> seeds;      // seed used by each row
    std::vector<std::pair<int, std::string>> failures; // repeat index -> diagnostic
    long long steps_total = 0;
};

// Invoked with the environment and the repeat index before each repeat
// trains; lets callers attach step listeners.
using RepeatHook = std::function<void(Environment&, int)>;

/// Runs spec.n_repeats training runs in one environment, resetting it
/// between repeats. A failing repeat is recorded in failures and the
/// remaining repeats continue.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const RepeatHook& on_repeat = {});

/// Total wall time divided by total environment steps across all repeats.
/// Throws std::domain_error when no steps were taken.
double per_step_time(const ExperimentResult& result);

// Trailing moving average with partial windows at the start: output[i]
// averages inputs max(0, i-window+1)..i, so the length is preserved.
std::vector<double> moving_average(std::span<const double> xs, int window = 20);
std::vector<double> moving_average(std::span<const int> xs, int window = 20);

/// Smooths each row with moving_average(window) and averages across rows
/// elementwise. Throws std::invalid_argument on an empty or ragged matrix.
std::vector<double> average_smoothed(const std::vector<std::vector<int>>& lengths,
                                     int window = 20);

// Parameter grids for the four canned sweeps.
inline constexpr std::array<double, 3> kForceGrid{5.0, 11.0, 17.0};
inline constexpr std::array<std::pair<double, double>, 5> kMassGrid{
    {{1.0, 10.0}, {5.0, 10.0}, {10.0, 10.0}, {10.0, 5.0}, {10.0, 1.0}}}; // (m_cart, m_pole)
inline constexpr std::array<std::pair<double, double>, 3> kRewardGrid{
    {{1.0, -200.0}, {1.0, -100.0}, {1.0, -50.0}}}; // (positive, negative)
inline constexpr std::array<double, 5> kTimeStepGrid{0.01, 0.05, 0.1, 0.5, 1.0};

enum class SweepKind { force, mass, reward, timestep };

std::string_view sweep_name(SweepKind kind);
std::optional<SweepKind> parse_sweep(std::string_view name);

struct TaggedResult {
    std::string sweep;      // sweep name, or "single" for standalone runs
    std::string grid_point; // e.g. "f=11", "m=10:1", "r=1:-200", "ts=0.05"
    ExperimentResult result;
};

// Explicit counts take precedence over the per-sweep defaults (100 episodes,
// 5 repeats; the mass sweep trains for 200 episodes).
struct SweepOverrides {
    std::optional<int> n_episodes;
    std::optional<int> n_repeats;
    std::optional<int> max_steps;
};

/// Expands the grid for one sweep, all other parameters held at `base`.
std::vector<ExperimentSpec> sweep_grid(SweepKind kind, const ExperimentSpec& base,
                                       const SweepOverrides& overrides = {});
std::string grid_label(SweepKind kind, const ExperimentSpec& spec);

/// run_experiment over every grid point of one sweep.
std::vector<TaggedResult> run_sweep(SweepKind kind, const ExperimentSpec& base,
                                    const SweepOverrides& overrides = {});

// CSV emission (header row, dot decimals, newline-terminated records).
void write_episodes_csv(std::ostream& out, const std::vector<TaggedResult>& results);
void write_curves_csv(std::ostream& out, const std::vector<TaggedResult>& results,
                      int window = 20);
void write_summary_csv(std::ostream& out, const std::vector<TaggedResult>& results,
                       int window = 20);

} // namespace cosimrl

#endif // COSIMRL_EXPERIMENT_HPP
