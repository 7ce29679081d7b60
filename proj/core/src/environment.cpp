#include "cosimrl/environment.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cosimrl/errors.hpp"

namespace cosimrl {

double default_reward(bool done, const EnvConfig& config) {
    return done ? config.negative_reward : config.positive_reward;
}

Environment::Environment(EnvConfig config, std::unique_ptr<Backend> backend,
                         Space action_space, Space observation_space)
    : config_(std::move(config)),
      backend_(std::move(backend)),
      action_space_(std::move(action_space)),
      observation_space_(std::move(observation_space)) {
    if (!backend_) {
        throw config_error("environment needs a backend");
    }
    config_.validate();

    const BackendDescriptor& desc = backend_->descriptor();
    desc.validate();
    if (desc.input_names != config_.model_input_names) {
        throw config_error("model_input_names do not match the backend inputs");
    }
    if (desc.output_names != config_.model_output_names) {
        throw config_error("model_output_names do not match the backend outputs");
    }
}

Observation Environment::reset() {
    backend_->initialize(config_.model_parameters);
    step_count_ = 0;
    last_done_ = false;
    has_reset_ = true;
    last_observation_ = backend_->get_outputs();
    if (last_observation_.size() != config_.model_output_names.size()) {
        throw simulation_error("backend returned " +
                               std::to_string(last_observation_.size()) +
                               " outputs, expected " +
                               std::to_string(config_.model_output_names.size()));
    }
    return last_observation_;
}

StepResult Environment::step(const Action& action) {
    if (!has_reset_) {
        throw std::logic_error("step() called before reset()");
    }
    if (!contains(action_space_, action)) {
        throw std::domain_error("action outside the action space");
    }

    std::vector<double> inputs = action_to_inputs(action);
    if (inputs.size() != config_.model_input_names.size()) {
        throw simulation_error("action mapped to " + std::to_string(inputs.size()) +
                               " inputs, expected " +
                               std::to_string(config_.model_input_names.size()));
    }

    backend_->set_inputs(inputs);
    backend_->do_step(config_.time_step);

    StepResult result;
    result.observation = backend_->get_outputs();
    if (result.observation.size() != config_.model_output_names.size()) {
        throw simulation_error("backend output dimension changed mid-episode");
    }
    for (std::size_t i = 0; i < result.observation.size(); ++i) {
        if (!std::isfinite(result.observation[i])) {
            throw simulation_error("non-finite observation in '" +
                                   config_.model_output_names[i] + "'");
        }
    }
    result.done = episode_done(result.observation);
    result.reward = reward_policy(result.observation, result.done);

    ++step_count_;
    last_observation_ = result.observation;
    last_done_ = result.done;

    if (listener_) {
        StepRecord record;
        record.step = step_count_;
        record.t = time();
        record.observation = &result.observation;
        record.inputs = &inputs;
        record.reward = result.reward;
        record.done = result.done;
        listener_(record);
    }
    return result;
}

std::string Environment::render() const {
    if (!has_reset_) {
        throw std::logic_error("render() called before reset()");
    }
    std::vector<std::string> units = output_units();
    units.resize(config_.model_output_names.size());

    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "t=%.3f s", time());
    std::string line = buffer;
    for (std::size_t i = 0; i < last_observation_.size(); ++i) {
        std::snprintf(buffer, sizeof(buffer), "  %s=%.4f",
                      config_.model_output_names[i].c_str(), last_observation_[i]);
        line += buffer;
        if (!units[i].empty()) {
            line += ' ';
            line += units[i];
        }
    }
    return line;
}

double Environment::time() const {
    return static_cast<double>(step_count_) * config_.time_step;
}

double Environment::reward_policy(const Observation&, bool done) const {
    return default_reward(done, config_);
}

std::vector<double> Environment::action_to_inputs(const Action& action) const {
    if (const auto* values = std::get_if<std::vector<double>>(&action)) {
        return *values;
    }
    throw std::logic_error(
        "discrete actions need a model-specific action_to_inputs override");
}

std::vector<std::string> Environment::output_units() const { return {}; }

} // namespace cosimrl
