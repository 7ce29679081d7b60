#ifndef COSIMRL_COSIM_HPP
#define COSIMRL_COSIM_HPP

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cosimrl {

/// Variable interface of a co-simulation backend. parameter_names lists the
/// keys the backend requires at initialization; optional keys with built-in
/// defaults are not listed.
struct BackendDescriptor {
    std::vector<std::string> input_names;
    std::vector<std::string> output_names;
    std::vector<std::string> parameter_names;

    // Throws config_error on duplicate names or input/output overlap.
    void validate() const;
};

/// Co-simulation contract: the model owns its state and advances it over a
/// requested interval with inputs held constant (zero-order hold), exposing
/// outputs only at communication points.
class Backend {
public:
    virtual ~Backend() = default;

    virtual const BackendDescriptor& descriptor() const = 0;

    // (Re-)initializes state from parameters and initial conditions.
    // After this call get_outputs() reflects the initial conditions.
    virtual void initialize(const std::map<std::string, double>& parameters) = 0;

    // Values for input_names, in descriptor order. Held constant until the
    // next call.
    virtual void set_inputs(std::span<const double> values) = 0;

    // Advances internal state by exactly dt seconds.
    virtual void do_step(double dt) = 0;

    // Values for output_names, in descriptor order. Constant between steps.
    virtual std::vector<double> get_outputs() const = 0;
};

// Fixed-step master stepping for native backends.

using StateVector = std::vector<double>;
using DerivativeFn = std::function<StateVector(const StateVector&)>;

// Stable and accurate across communication steps of 0.01..1 s while keeping
// a 200-step episode well under a millisecond of compute.
inline constexpr double kDefaultSubstepTarget = 0.005; // seconds

/// One classical 4th-order Runge-Kutta step of size h with inputs frozen
/// inside `derivative`. Throws simulation_error if the derivative produces a
/// non-finite component.
StateVector rk4_step(const StateVector& state, const DerivativeFn& derivative,
                     double h);

/// Number of equal substeps used to cover dt: ceil(dt / substep_target),
/// with a tolerance so that exact multiples are not bumped up by floating
/// point representation error.
int substep_count(double dt, double substep_target);

/// Advances state by dt via substep_count(dt, substep_target) equal RK4
/// substeps.
void advance(StateVector& state, const DerivativeFn& derivative, double dt,
             double substep_target = kDefaultSubstepTarget);

} // namespace cosimrl

#endif // COSIMRL_COSIM_HPP
