#ifndef COSIMRL_ERRORS_HPP
#define COSIMRL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cosimrl {

// Invalid or inconsistent configuration (bad bounds, missing parameter keys,
// config/backend mismatch).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Failure while advancing or initializing a simulation backend, including
// non-finite numerics.
class simulation_error : public std::runtime_error {
public:
    explicit simulation_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cosimrl

#endif // COSIMRL_ERRORS_HPP
