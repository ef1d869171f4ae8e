#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hyperwave {

// Parameters outside the regime an operation is defined for.
class RegimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain (pole of Γ, non-compact target, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The integrator could not continue. Carries the last accepted point.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t, std::vector<double> state)
        : std::runtime_error(what), last_t(t), last_state(std::move(state)) {}

    double last_t;
    std::vector<double> last_state;
};

}  // namespace hyperwave
