#pragma once

#include <stdexcept>
#include <string>

namespace excision {

// The maximum is attained at two or more nodes; the caller decides whether to
// resample or reject.
class TieError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A level that the operation needs (hitting level, extension budget) was
// never reached.
class NotReachedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite values, exhausted resampling budgets and similar numerical
// misconfiguration.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace excision
