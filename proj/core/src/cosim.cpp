#include "cosimrl/cosim.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "cosimrl/errors.hpp"

namespace cosimrl {

void BackendDescriptor::validate() const {
    std::set<std::string> seen;
    for (const auto* list : {&input_names, &output_names, &parameter_names}) {
        std::set<std::string> local;
        for (const auto& name : *list) {
            if (!local.insert(name).second) {
                throw config_error("backend descriptor lists '" + name + "' twice");
            }
        }
    }
    seen.insert(input_names.begin(), input_names.end());
    for (const auto& name : output_names) {
        if (seen.count(name) != 0) {
            throw config_error("backend variable '" + name +
                               "' is both an input and an output");
        }
    }
}

namespace {

void check_finite(const StateVector& derivative) {
    for (std::size_t i = 0; i < derivative.size(); ++i) {
        if (!std::isfinite(derivative[i])) {
            throw simulation_error("non-finite derivative in component " +
                                   std::to_string(i));
        }
    }
}

StateVector eval(const DerivativeFn& f, const StateVector& y) {
    StateVector dy = f(y);
    if (dy.size() != y.size()) {
        throw simulation_error("derivative dimension mismatch");
    }
    check_finite(dy);
    return dy;
}

} // namespace

StateVector rk4_step(const StateVector& state, const DerivativeFn& derivative,
                     double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("rk4_step needs h > 0");
    }
    const std::size_t n = state.size();

    const StateVector k1 = eval(derivative, state);
    StateVector probe(n);

    for (std::size_t i = 0; i < n; ++i) probe[i] = state[i] + 0.5 * h * k1[i];
    const StateVector k2 = eval(derivative, probe);

    for (std::size_t i = 0; i < n; ++i) probe[i] = state[i] + 0.5 * h * k2[i];
    const StateVector k3 = eval(derivative, probe);

    for (std::size_t i = 0; i < n; ++i) probe[i] = state[i] + h * k3[i];
    const StateVector k4 = eval(derivative, probe);

    StateVector next(n);
    for (std::size_t i = 0; i < n; ++i) {
        next[i] = state[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return next;
}

int substep_count(double dt, double substep_target) {
    if (!(dt > 0.0) || !(substep_target > 0.0)) {
        throw std::invalid_argument("substep_count needs dt > 0 and substep_target > 0");
    }
    // The relative slack keeps exact ratios like 0.05 / 0.005 from rounding
    // up to an extra substep.
    const double ratio = dt / substep_target;
    const int n = static_cast<int>(std::ceil(ratio * (1.0 - 1e-12)));
    return n < 1 ? 1 : n;
}

void advance(StateVector& state, const DerivativeFn& derivative, double dt,
             double substep_target) {
    const int n = substep_count(dt, substep_target);
    const double h = dt / n;
    for (int i = 0; i < n; ++i) {
        state = rk4_step(state, derivative, h);
    }
}

} // namespace cosimrl
