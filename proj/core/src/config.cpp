#include "cosimrl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cosimrl/errors.hpp"

namespace cosimrl {

namespace {

void check_name_list(const std::vector<std::string>& names, const char* what) {
    if (names.empty()) {
        throw config_error(std::string(what) + " must not be empty");
    }
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (!seen.insert(name).second) {
            throw config_error(std::string(what) + " contains duplicate '" + name + "'");
        }
    }
}

} // namespace

void EnvConfig::validate() const {
    check_name_list(model_input_names, "model_input_names");
    check_name_list(model_output_names, "model_output_names");
    if (!(time_step > 0.0) || !std::isfinite(time_step)) {
        throw config_error("time_step must be a positive number");
    }

    // Each name may appear in only one of the three collections.
    std::set<std::string> inputs(model_input_names.begin(), model_input_names.end());
    for (const auto& name : model_output_names) {
        if (inputs.count(name) != 0) {
            throw config_error("'" + name + "' is both an input and an output");
        }
    }
    for (const auto& [name, value] : model_parameters) {
        (void)value;
        if (inputs.count(name) != 0) {
            throw config_error("'" + name + "' is both an input and a parameter");
        }
        if (std::find(model_output_names.begin(), model_output_names.end(), name) !=
            model_output_names.end()) {
            throw config_error("'" + name + "' is both an output and a parameter");
        }
    }
}

double EnvConfig::parameter(const std::string& key) const {
    auto it = model_parameters.find(key);
    if (it == model_parameters.end()) {
        throw config_error("missing model parameter '" + key + "'");
    }
    return it->second;
}

double EnvConfig::parameter_or(const std::string& key, double fallback) const {
    auto it = model_parameters.find(key);
    return it == model_parameters.end() ? fallback : it->second;
}

bool EnvConfig::has_parameter(const std::string& key) const {
    return model_parameters.count(key) != 0;
}

namespace {

std::vector<std::string> parse_name_field(const nlohmann::json& value, const char* key) {
    // A single string is accepted as a one-element list.
    if (value.is_string()) {
        return {value.get<std::string>()};
    }
    if (value.is_array()) {
        std::vector<std::string> names;
        for (const auto& entry : value) {
            if (!entry.is_string()) {
                throw config_error(std::string(key) + " entries must be strings");
            }
            names.push_back(entry.get<std::string>());
        }
        return names;
    }
    throw config_error(std::string(key) + " must be a string or a list of strings");
}

double parse_number(const nlohmann::json& value, const char* key) {
    if (!value.is_number()) {
        throw config_error(std::string(key) + " must be a number");
    }
    return value.get<double>();
}

} // namespace

EnvConfig parse_env_config(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("invalid configuration JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw config_error("configuration must be a JSON object");
    }

    static const std::set<std::string> known_keys = {
        "model_input_names", "model_output_names", "model_parameters",
        "time_step",         "positive_reward",    "negative_reward"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (known_keys.count(key) == 0) {
            throw config_error("unknown configuration key '" + key + "'");
        }
    }
    for (const char* required : {"model_input_names", "model_output_names", "time_step"}) {
        if (!doc.contains(required)) {
            throw config_error(std::string("missing configuration key '") + required + "'");
        }
    }

    EnvConfig config;
    config.model_input_names = parse_name_field(doc["model_input_names"], "model_input_names");
    config.model_output_names =
        parse_name_field(doc["model_output_names"], "model_output_names");
    if (doc.contains("model_parameters")) {
        const auto& params = doc["model_parameters"];
        if (!params.is_object()) {
            throw config_error("model_parameters must be an object");
        }
        for (const auto& [key, value] : params.items()) {
            config.model_parameters[key] = parse_number(value, key.c_str());
        }
    }
    config.time_step = parse_number(doc["time_step"], "time_step");
    if (doc.contains("positive_reward")) {
        config.positive_reward = parse_number(doc["positive_reward"], "positive_reward");
    }
    if (doc.contains("negative_reward")) {
        config.negative_reward = parse_number(doc["negative_reward"], "negative_reward");
    }

    config.validate();
    return config;
}

EnvConfig load_env_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw config_error("cannot open configuration file '" + file.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_env_config(text.str());
}

} // namespace cosimrl
