#ifndef COSIMRL_SPACES_HPP
#define COSIMRL_SPACES_HPP

#include <variant>
#include <vector>

namespace cosimrl {

// Action/observation space descriptors, gym style.

struct DiscreteSpace {
    int n = 0; // number of actions, >= 1
};

struct BoxSpace {
    std::vector<double> low;  // per-dimension lower bounds, may be -inf
    std::vector<double> high; // per-dimension upper bounds, may be +inf
};

using Space = std::variant<DiscreteSpace, BoxSpace>;

// An element of a space: an index for DiscreteSpace, a vector for BoxSpace.
using Action = std::variant<int, std::vector<double>>;

// Validating factories; throw config_error on bad descriptors.
Space make_discrete(int n);
Space make_box(std::vector<double> low, std::vector<double> high);

bool contains(const Space& space, const Action& action);

} // namespace cosimrl

#endif // COSIMRL_SPACES_HPP
