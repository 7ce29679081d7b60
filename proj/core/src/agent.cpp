#include "cosimrl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cosimrl/errors.hpp"

namespace cosimrl {

int to_bin(double value, double lower, double upper, int count) {
    if (!(lower < upper) || count < 2) {
        throw std::invalid_argument("to_bin needs lower < upper and count >= 2");
    }
    const double scaled = std::floor((value - lower) / (upper - lower) * count);
    // The comparisons also absorb NaN and +/-inf before the cast.
    if (!(scaled > 0.0)) {
        return 0;
    }
    if (scaled >= static_cast<double>(count)) {
        return count - 1;
    }
    return static_cast<int>(scaled);
}

int to_bin(double value, const BinSpec& spec) {
    return to_bin(value, spec.lower, spec.upper, spec.count);
}

std::vector<BinSpec> default_bins() {
    constexpr double pi = std::numbers::pi;
    return {
        {-2.4, 2.4, 10},                                      // x
        {-1.0, 1.0, 10},                                      // x_dot
        {(90.0 - 12.0) / 180.0 * pi, (90.0 + 12.0) / 180.0 * pi, 10}, // theta
        {-2.0, 2.0, 10},                                      // theta_dot
    };
}

Discretizer::Discretizer(std::vector<BinSpec> variables)
    : variables_(std::move(variables)) {
    if (variables_.empty()) {
        throw config_error("discretizer needs at least one variable");
    }
    long long states = 1;
    for (const auto& spec : variables_) {
        if (!(spec.lower < spec.upper) || spec.count < 2) {
            throw config_error("bin spec needs lower < upper and count >= 2");
        }
        states *= spec.count;
        if (states > 100'000'000) {
            throw config_error("discretized state space too large");
        }
    }
    n_states_ = static_cast<int>(states);
}

int Discretizer::encode(std::span<const int> bin_indices) const {
    if (bin_indices.size() != variables_.size()) {
        throw std::domain_error("expected one bin index per variable");
    }
    int id = 0;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const int index = bin_indices[i];
        if (index < 0 || index >= variables_[i].count) {
            throw std::domain_error("bin index " + std::to_string(index) +
                                    " out of range for variable " + std::to_string(i));
        }
        id = id * variables_[i].count + index;
    }
    return id;
}

int Discretizer::discretize(std::span<const double> values) const {
    if (values.size() != variables_.size()) {
        throw std::domain_error("expected one value per variable");
    }
    int id = 0;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        id = id * variables_[i].count + to_bin(values[i], variables_[i]);
    }
    return id;
}

void LearnerParams::validate() const {
    if (learning_rate < 0.0 || learning_rate > 1.0) {
        throw config_error("learning_rate must lie in [0, 1]");
    }
    if (discount_factor < 0.0 || discount_factor > 1.0) {
        throw config_error("discount_factor must lie in [0, 1]");
    }
    if (exploration_rate < 0.0 || exploration_rate > 1.0) {
        throw config_error("exploration_rate must lie in [0, 1]");
    }
    if (!(exploration_decay > 0.0) || exploration_decay > 1.0) {
        throw config_error("exploration_decay must lie in (0, 1]");
    }
}

QLearner::QLearner(int n_states, int n_actions, const LearnerParams& params,
                   std::uint64_t seed)
    : n_states_(n_states),
      n_actions_(n_actions),
      params_(params),
      epsilon_(params.exploration_rate),
      rng_(seed) {
    if (n_states < 1 || n_actions < 1) {
        throw config_error("QLearner needs n_states >= 1 and n_actions >= 1");
    }
    params_.validate();
    table_.resize(static_cast<std::size_t>(n_states) * n_actions);
    std::uniform_real_distribution<double> init(-1.0, 1.0);
    for (double& value : table_) {
        value = init(rng_);
    }
}

namespace {

std::size_t cell_index(int state, int action, int n_states, int n_actions) {
    if (state < 0 || state >= n_states || action < 0 || action >= n_actions) {
        throw std::domain_error("state/action index out of range");
    }
    return static_cast<std::size_t>(state) * n_actions + action;
}

} // namespace

double QLearner::q(int state, int action) const {
    return table_[cell_index(state, action, n_states_, n_actions_)];
}

void QLearner::set_q(int state, int action, double value) {
    table_[cell_index(state, action, n_states_, n_actions_)] = value;
}

int QLearner::greedy_action(int state) const {
    const std::size_t row = cell_index(state, 0, n_states_, n_actions_);
    int best = 0;
    for (int action = 1; action < n_actions_; ++action) {
        if (table_[row + action] > table_[row + best]) {
            best = action;
        }
    }
    return best;
}

int QLearner::choose_action(int state) {
    // Always consume the exploration draw so the stream position does not
    // depend on epsilon.
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (u < epsilon_) {
        return random_action();
    }
    return greedy_action(state);
}

int QLearner::random_action() {
    return std::uniform_int_distribution<int>(0, n_actions_ - 1)(rng_);
}

void QLearner::update(int state, int action, double reward, int next_state,
                      bool done) {
    double target = reward;
    if (!done) {
        target += params_.discount_factor * q(next_state, greedy_action(next_state));
    }
    double& cell = table_[cell_index(state, action, n_states_, n_actions_)];
    cell += params_.learning_rate * (target - cell);
}

void QLearner::decay_exploration() { epsilon_ *= params_.exploration_decay; }

void QLearner::dump_csv(std::ostream& out) const {
    out << "state,action,value\n";
    char buffer[64];
    for (int state = 0; state < n_states_; ++state) {
        for (int action = 0; action < n_actions_; ++action) {
            std::snprintf(buffer, sizeof(buffer), "%d,%d,%.17g\n", state, action,
                          q(state, action));
            out << buffer;
        }
    }
}

void QLearner::load_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("state,action,value", 0) != 0) {
        throw std::runtime_error("Q-table CSV must start with a state,action,value header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        int state = 0;
        int action = 0;
        double value = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf", &state, &action, &value) != 3) {
            throw std::runtime_error("malformed Q-table CSV row: " + line);
        }
        set_q(state, action, value);
    }
}

} // namespace cosimrl
