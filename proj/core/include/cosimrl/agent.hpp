#ifndef COSIMRL_AGENT_HPP
#define COSIMRL_AGENT_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace cosimrl {

/// Uniform binning of one state variable. The outermost bins are unbounded:
/// bin 0 extends to -inf, bin count-1 to +inf, so every real maps somewhere.
struct BinSpec {
    double lower = 0.0;
    double upper = 1.0;
    int count = 10;
};

/// Index of the half-open cell [edge_k, edge_{k+1}) containing value, with
/// interior edges at lower + k*(upper-lower)/count. Total over all reals.
int to_bin(double value, double lower, double upper, int count);
int to_bin(double value, const BinSpec& spec);

/// The four default intervals for the cart-pole state (x, x_dot, theta,
/// theta_dot), 10 bins each.
std::vector<BinSpec> default_bins();

/// Maps a continuous state vector to a single table index by binning each
/// variable and concatenating the bin indices positionally (first variable
/// most significant).
class Discretizer {
public:
    explicit Discretizer(std::vector<BinSpec> variables);

    int n_states() const { return n_states_; }
    const std::vector<BinSpec>& variables() const { return variables_; }

    // Positional concatenation of per-variable bin indices; throws
    // std::domain_error if an index is out of range or the count mismatches.
    int encode(std::span<const int> bin_indices) const;

    // to_bin each variable, then encode.
    int discretize(std::span<const double> values) const;

private:
    std::vector<BinSpec> variables_;
    int n_states_ = 0;
};

struct LearnerParams {
    double learning_rate = 0.2;     // alpha in (0, 1]
    double discount_factor = 1.0;   // gamma in [0, 1]
    double exploration_rate = 0.5;  // initial epsilon in [0, 1]
    double exploration_decay = 0.99; // multiplied into epsilon once per step

    void validate() const; // throws config_error on out-of-range values
};

/// Tabular Q-learner with an epsilon-greedy policy. The table is initialized
/// uniformly in [-1, 1] from a single seeded RNG stream that is also used
/// for the per-step exploration draws (init first, then draws), so a fixed
/// seed reproduces a run bit for bit.
class QLearner {
public:
    QLearner(int n_states, int n_actions, const LearnerParams& params,
             std::uint64_t seed);

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    double exploration_rate() const { return epsilon_; }
    const LearnerParams& params() const { return params_; }

    double q(int state, int action) const;
    void set_q(int state, int action, double value);

    // Argmax over actions; ties break toward the lowest action index.
    int greedy_action(int state) const;

    // Greedy with probability 1-epsilon, otherwise uniform over all actions.
    int choose_action(int state);

    // Uniform draw from the action set (the initial action of an episode).
    int random_action();

    // One value-iteration update toward r + gamma * max_a Q(s', a); terminal
    // transitions use the plain target r with no bootstrap.
    void update(int state, int action, double reward, int next_state, bool done);

    // epsilon *= exploration_decay; applied once per environment step.
    void decay_exploration();

    // CSV export/import (header "state,action,value"), for inspection.
    void dump_csv(std::ostream& out) const;
    void load_csv(std::istream& in);

private:
    int n_states_;
    int n_actions_;
    LearnerParams params_;
    double epsilon_;
    std::vector<double> table_; // n_states x n_actions, row-major
    std::mt19937_64 rng_;
};

} // namespace cosimrl

#endif // COSIMRL_AGENT_HPP
