#ifndef COSIMRL_ENVIRONMENT_HPP
#define COSIMRL_ENVIRONMENT_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cosimrl/config.hpp"
#include "cosimrl/cosim.hpp"
#include "cosimrl/spaces.hpp"

namespace cosimrl {

using Observation = std::vector<double>;

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool done = false;
};

/// The out-of-the-box reward policy: positive_reward while the episode goes
/// on, negative_reward once it is done.
double default_reward(bool done, const EnvConfig& config);

/// Everything an observer needs about one environment step; used e.g. for
/// trajectory dumps.
struct StepRecord {
    long long step = 0; // 1-based within the current episode
    double t = 0.0;     // simulation clock after the step
    const Observation* observation = nullptr;
    const std::vector<double>* inputs = nullptr; // raw backend inputs
    double reward = 0.0;
    bool done = false;
};

using StepListener = std::function<void(const StepRecord&)>;

/// Environment logic common to all backend-based environments: reset/step
/// bookkeeping, action validation, reward policy and textual rendering.
/// Model-specific environments subclass and provide the done test plus the
/// action-to-input mapping.
///
/// An instance is single-threaded; distinct instances are independent.
class Environment {
public:
    // Takes ownership of the backend. Throws config_error if the config is
    // invalid or does not match the backend's variable interface.
    Environment(EnvConfig config, std::unique_ptr<Backend> backend,
                Space action_space, Space observation_space);
    virtual ~Environment() = default;

    // Re-initializes the backend from model_parameters, clears the done flag
    // and resets the clock. Returns the initial observation.
    Observation reset();

    // Applies the action over one time_step. Throws std::logic_error before
    // the first reset and std::domain_error for actions outside the action
    // space; backend failures propagate.
    StepResult step(const Action& action);

    // Single-line textual dump of the current observation.
    std::string render() const;

    // Nothing to shut down with textual rendering; kept for interface parity.
    void close() {}

    const Space& action_space() const { return action_space_; }
    const Space& observation_space() const { return observation_space_; }
    const EnvConfig& config() const { return config_; }

    double time() const; // step count times time_step, no accumulation drift
    bool done() const { return last_done_; }

    void set_step_listener(StepListener listener) { listener_ = std::move(listener); }

protected:
    virtual bool episode_done(const Observation& observation) const = 0;

    // Override for a more sophisticated rewarding strategy.
    virtual double reward_policy(const Observation& observation, bool done) const;

    // Maps an action to backend input values. The default passes a vector
    // action through unchanged; discrete-action environments must override.
    virtual std::vector<double> action_to_inputs(const Action& action) const;

    // Unit labels for render(), one per output; empty = unitless.
    virtual std::vector<std::string> output_units() const;

    Backend& backend() { return *backend_; }
    const Backend& backend() const { return *backend_; }

private:
    EnvConfig config_;
    std::unique_ptr<Backend> backend_;
    Space action_space_;
    Space observation_space_;
    Observation last_observation_;
    long long step_count_ = 0;
    bool has_reset_ = false;
    bool last_done_ = false;
    StepListener listener_;
};

} // namespace cosimrl

#endif // COSIMRL_ENVIRONMENT_HPP
