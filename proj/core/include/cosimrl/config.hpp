#ifndef COSIMRL_CONFIG_HPP
#define COSIMRL_CONFIG_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace cosimrl {

/// Model-specific environment configuration: which backend variables act as
/// inputs (actions) and outputs (observations), parameter/initial-condition
/// values, the communication step size, and the default reward pair.
struct EnvConfig {
    std::vector<std::string> model_input_names;
    std::vector<std::string> model_output_names;
    std::map<std::string, double> model_parameters;
    double time_step = 0.05;        // seconds between control actions
    double positive_reward = 1.0;   // while the episode goes on
    double negative_reward = -100.0; // when the episode ends

    // Throws config_error on empty/duplicated name lists, name collisions
    // across the three collections, or a non-positive time step.
    void validate() const;

    // Parameter lookup; the first form throws config_error naming the key.
    double parameter(const std::string& key) const;
    double parameter_or(const std::string& key, double fallback) const;
    bool has_parameter(const std::string& key) const;
};

// JSON loading. Accepted keys are exactly: model_input_names (string or list
// of strings), model_output_names, model_parameters (object of numbers),
// time_step, positive_reward, negative_reward. Unknown keys are rejected.
EnvConfig parse_env_config(const std::string& json_text);
EnvConfig load_env_config(const std::filesystem::path& file);

} // namespace cosimrl

#endif // COSIMRL_CONFIG_HPP
