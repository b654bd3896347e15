#pragma once

#include <stdexcept>
#include <string>

namespace lensconf {

/// Malformed input: bad files, inconsistent dimensions, violated preconditions.
class InputError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed the caller's size budget.
class BudgetError : public std::runtime_error
{
public:
    BudgetError(std::string const& what, double projected)
        : std::runtime_error(what), projected_(projected)
    {
    }

    double projected() const { return projected_; }

private:
    double projected_;
};

/// A structural check inside a construction failed (signals a bug or a
/// wrong mathematical input, never a user typo).
class VerificationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace lensconf
