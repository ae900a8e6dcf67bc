#pragma once

#include <stdexcept>
#include <string>

namespace immse {

// Malformed input: bad ladder, betas out of range, wrong lengths.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Well-formed input outside the region where a result is defined
// (e.g. a finite-length bound requested at snr0 >= alpha * snr1).
class OutOfValidity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A Monte Carlo request whose posterior work exceeds the configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw InvalidArgument(message);
    }
}

}  // namespace detail
}  // namespace immse
