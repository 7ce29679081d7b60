#ifndef COSIMRL_CARTPOLE_HPP
#define COSIMRL_CARTPOLE_HPP

#include <memory>
#include <numbers>

#include "cosimrl/environment.hpp"

namespace cosimrl {

/// Physical constants of the cart-pole system. The pole is modelled as a
/// pendulum: a point-mass bob of m_pole at distance pole_length/2 from a
/// pivot at the cart's center, on a frictionless track with a frictionless
/// pivot.
struct CartPoleParams {
    double m_cart = 10.0;      // kg
    double m_pole = 1.0;       // kg
    double pole_length = 1.0;  // m, full length; the bob sits at half of it
    double g = 9.81;           // m/s^2
    double force_magnitude = 11.0; // N, |f|; the action picks the sign

    void validate() const; // throws config_error unless all strictly positive
};

/// Continuous state. theta is measured between the pole and the positive
/// x-axis, so upright is pi/2; theta < pi/2 means the pole leans toward +x.
struct CartPoleState {
    double x = 0.0;         // m
    double x_dot = 0.0;     // m/s
    double theta = std::numbers::pi / 2; // rad
    double theta_dot = 0.0; // rad/s
};

struct Thresholds {
    double x_threshold = 2.4;                            // m
    double theta_threshold = 12.0 * std::numbers::pi / 180.0; // rad from upright
};

/// Equations of motion. force is signed, positive toward +x. Returns the
/// state derivative (x_dot, x_ddot, theta_dot, theta_ddot) packed in a
/// CartPoleState. The denominator is positive for any angle since
/// m_pole < m_cart + m_pole.
CartPoleState dynamics(const CartPoleState& s, double force, const CartPoleParams& p);

/// True iff the cart left the track bounds or the pole deflected from
/// upright by more than theta_threshold. Boundary states count as standing.
bool is_done(const CartPoleState& s, const Thresholds& t = {});

/// Native cart-pole co-simulation backend: inputs {f}, outputs
/// {x, x_dot, theta, theta_dot}, required parameters {m_cart, m_pole,
/// theta_0, theta_dot_0}; optional x_0, x_dot_0 (default 0), pole_length
/// (default 1) and g (default 9.81).
class CartPoleBackend final : public Backend {
public:
    explicit CartPoleBackend(double substep_target = kDefaultSubstepTarget);

    const BackendDescriptor& descriptor() const override;
    void initialize(const std::map<std::string, double>& parameters) override;
    void set_inputs(std::span<const double> values) override;
    void do_step(double dt) override;
    std::vector<double> get_outputs() const override;

    const CartPoleState& state() const { return state_; }
    const CartPoleParams& params() const { return params_; }
    double force() const { return force_; }

private:
    CartPoleParams params_;
    CartPoleState state_;
    double force_ = 0.0;
    double substep_target_;
    bool initialized_ = false;
};

/// Cart-pole environment: Discrete{2} actions (0 pushes left with -|f|,
/// 1 pushes right with +|f|) over the native backend.
class CartPoleEnv final : public Environment {
public:
    CartPoleEnv(EnvConfig config, double force_magnitude,
                double substep_target = kDefaultSubstepTarget);

    const CartPoleState& state() const;
    double force_magnitude() const { return force_magnitude_; }
    const Thresholds& thresholds() const { return thresholds_; }

protected:
    bool episode_done(const Observation& observation) const override;
    std::vector<double> action_to_inputs(const Action& action) const override;
    std::vector<std::string> output_units() const override;

private:
    double force_magnitude_;
    Thresholds thresholds_;
};

/// Validates that config provides the required parameter keys (throws
/// config_error naming the first missing one) and builds the environment.
std::unique_ptr<CartPoleEnv> make_cartpole_env(
    EnvConfig config, double force_magnitude,
    double substep_target = kDefaultSubstepTarget);

} // namespace cosimrl

#endif // COSIMRL_CARTPOLE_HPP
