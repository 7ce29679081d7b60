#include "cosimrl/cartpole.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cosimrl/errors.hpp"

namespace cosimrl {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

const char* const kRequiredParameters[] = {"m_cart", "m_pole", "theta_0",
                                           "theta_dot_0"};

} // namespace

void CartPoleParams::validate() const {
    const struct {
        const char* name;
        double value;
    } fields[] = {{"m_cart", m_cart},
                  {"m_pole", m_pole},
                  {"pole_length", pole_length},
                  {"g", g},
                  {"force_magnitude", force_magnitude}};
    for (const auto& field : fields) {
        if (!(field.value > 0.0) || !std::isfinite(field.value)) {
            throw config_error(std::string(field.name) + " must be strictly positive");
        }
    }
}

CartPoleState dynamics(const CartPoleState& s, double force, const CartPoleParams& p) {
    const double bob_distance = 0.5 * p.pole_length; // pendulum length L
    const double total_mass = p.m_cart + p.m_pole;

    // Work on the deviation from upright: tilt = theta - pi/2, positive when
    // the pole leans toward -x. This keeps the upright equilibrium exact.
    const double tilt = s.theta - kHalfPi;
    const double sin_tilt = std::sin(tilt);
    const double cos_tilt = std::cos(tilt);
    const double spin_sq = s.theta_dot * s.theta_dot;

    // Positive for every angle since m_pole < total_mass.
    const double denom =
        bob_distance * (1.0 - p.m_pole * cos_tilt * cos_tilt / total_mass);

    const double theta_ddot =
        (p.g * sin_tilt +
         cos_tilt * (force - p.m_pole * bob_distance * spin_sq * sin_tilt) /
             total_mass) /
        denom;
    const double x_ddot =
        (force +
         p.m_pole * bob_distance * (theta_ddot * cos_tilt - spin_sq * sin_tilt)) /
        total_mass;

    return {s.x_dot, x_ddot, s.theta_dot, theta_ddot};
}

bool is_done(const CartPoleState& s, const Thresholds& t) {
    return std::abs(s.x) > t.x_threshold ||
           std::abs(s.theta - kHalfPi) > t.theta_threshold;
}

// --- backend ---------------------------------------------------------------

CartPoleBackend::CartPoleBackend(double substep_target)
    : substep_target_(substep_target) {
    if (!(substep_target > 0.0)) {
        throw config_error("substep_target must be positive");
    }
}

const BackendDescriptor& CartPoleBackend::descriptor() const {
    static const BackendDescriptor desc{
        {"f"},
        {"x", "x_dot", "theta", "theta_dot"},
        {kRequiredParameters[0], kRequiredParameters[1], kRequiredParameters[2],
         kRequiredParameters[3]}};
    return desc;
}

void CartPoleBackend::initialize(const std::map<std::string, double>& parameters) {
    auto require = [&](const char* key) {
        auto it = parameters.find(key);
        if (it == parameters.end()) {
            throw config_error(std::string("missing model parameter '") + key + "'");
        }
        return it->second;
    };
    auto optional = [&](const char* key, double fallback) {
        auto it = parameters.find(key);
        return it == parameters.end() ? fallback : it->second;
    };

    CartPoleParams params;
    params.m_cart = require("m_cart");
    params.m_pole = require("m_pole");
    params.pole_length = optional("pole_length", params.pole_length);
    params.g = optional("g", params.g);
    params.validate();
    params_ = params;

    state_.x = optional("x_0", 0.0);
    state_.x_dot = optional("x_dot_0", 0.0);
    state_.theta = require("theta_0");
    state_.theta_dot = require("theta_dot_0");

    force_ = 0.0;
    initialized_ = true;
}

void CartPoleBackend::set_inputs(std::span<const double> values) {
    if (values.size() != 1) {
        throw std::invalid_argument("cart-pole backend takes exactly one input");
    }
    force_ = values[0];
}

void CartPoleBackend::do_step(double dt) {
    if (!initialized_) {
        throw std::logic_error("do_step() before initialize()");
    }
    StateVector y = {state_.x, state_.x_dot, state_.theta, state_.theta_dot};
    const double force = force_;
    const CartPoleParams params = params_;
    advance(
        y,
        [force, &params](const StateVector& v) -> StateVector {
            const CartPoleState s{v[0], v[1], v[2], v[3]};
            const CartPoleState d = dynamics(s, force, params);
            return {d.x, d.x_dot, d.theta, d.theta_dot};
        },
        dt, substep_target_);
    state_ = {y[0], y[1], y[2], y[3]};
}

std::vector<double> CartPoleBackend::get_outputs() const {
    if (!initialized_) {
        throw std::logic_error("get_outputs() before initialize()");
    }
    return {state_.x, state_.x_dot, state_.theta, state_.theta_dot};
}

// --- environment -----------------------------------------------------------

namespace {

Space cartpole_observation_space(const Thresholds& t) {
    const double inf = std::numeric_limits<double>::infinity();
    // Twice the termination thresholds, so terminal observations still lie
    // inside. Informational only, never enforced.
    return make_box({-2.0 * t.x_threshold, -inf, kHalfPi - 2.0 * t.theta_threshold, -inf},
                    {2.0 * t.x_threshold, inf, kHalfPi + 2.0 * t.theta_threshold, inf});
}

} // namespace

CartPoleEnv::CartPoleEnv(EnvConfig config, double force_magnitude,
                         double substep_target)
    : Environment(std::move(config),
                  std::make_unique<CartPoleBackend>(substep_target),
                  make_discrete(2), cartpole_observation_space(Thresholds{})),
      force_magnitude_(force_magnitude) {
    if (!(force_magnitude > 0.0) || !std::isfinite(force_magnitude)) {
        throw config_error("force_magnitude must be strictly positive");
    }
    for (const char* key : kRequiredParameters) {
        if (!this->config().has_parameter(key)) {
            throw config_error(std::string("missing model parameter '") + key + "'");
        }
    }
}

const CartPoleState& CartPoleEnv::state() const {
    return static_cast<const CartPoleBackend&>(backend()).state();
}

bool CartPoleEnv::episode_done(const Observation& observation) const {
    const CartPoleState s{observation[0], observation[1], observation[2],
                          observation[3]};
    return is_done(s, thresholds_);
}

std::vector<double> CartPoleEnv::action_to_inputs(const Action& action) const {
    // 0 pushes left, 1 pushes right; validity was checked by step().
    const int index = std::get<int>(action);
    return {index == 1 ? force_magnitude_ : -force_magnitude_};
}

std::vector<std::string> CartPoleEnv::output_units() const {
    return {"m", "m/s", "rad", "rad/s"};
}

std::unique_ptr<CartPoleEnv> make_cartpole_env(EnvConfig config,
                                               double force_magnitude,
                                               double substep_target) {
    return std::make_unique<CartPoleEnv>(std::move(config), force_magnitude,
                                         substep_target);
}

} // namespace cosimrl
