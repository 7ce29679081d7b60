#include "cosimrl/spaces.hpp"

#include <cstddef>
#include <string>

#include "cosimrl/errors.hpp"

namespace cosimrl {

Space make_discrete(int n) {
    if (n < 1) {
        throw config_error("discrete space needs n >= 1, got " + std::to_string(n));
    }
    return DiscreteSpace{n};
}

Space make_box(std::vector<double> low, std::vector<double> high) {
    if (low.size() != high.size()) {
        throw config_error("box space bounds differ in length");
    }
    for (std::size_t i = 0; i < low.size(); ++i) {
        if (!(low[i] <= high[i])) {
            throw config_error("box space has low > high in dimension " +
                               std::to_string(i));
        }
    }
    return BoxSpace{std::move(low), std::move(high)};
}

bool contains(const Space& space, const Action& action) {
    if (const auto* discrete = std::get_if<DiscreteSpace>(&space)) {
        const int* index = std::get_if<int>(&action);
        return index != nullptr && *index >= 0 && *index < discrete->n;
    }
    const auto& box = std::get<BoxSpace>(space);
    const auto* values = std::get_if<std::vector<double>>(&action);
    if (values == nullptr || values->size() != box.low.size()) {
        return false;
    }
    for (std::size_t i = 0; i < values->size(); ++i) {
        if (!((*values)[i] >= box.low[i] && (*values)[i] <= box.high[i])) {
            return false;
        }
    }
    return true;
}

} // namespace cosimrl
