#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include "excision/path.hpp"

namespace excision {

/// Fixed registry of path functionals used by the identity checks.
enum class FunctionalId { const_one, max, integral, value_at_half, reciprocal_max_weight };

inline const char* to_string(FunctionalId f) noexcept
{
    switch (f) {
    case FunctionalId::const_one: return "const_one";
    case FunctionalId::max: return "max";
    case FunctionalId::integral: return "integral";
    case FunctionalId::value_at_half: return "value_at_half";
    case FunctionalId::reciprocal_max_weight: return "reciprocal_max_weight";
    }
    return "const_one";
}

inline FunctionalId functional_from_string(const std::string& s)
{
    if (s == "const_one") return FunctionalId::const_one;
    if (s == "max") return FunctionalId::max;
    if (s == "integral") return FunctionalId::integral;
    if (s == "value_at_half") return FunctionalId::value_at_half;
    if (s == "reciprocal_max_weight") return FunctionalId::reciprocal_max_weight;
    throw std::invalid_argument("unknown functional: " + s);
}

/// Evaluates a functional on a path; the time argument of value_at_half is
/// half the horizon. reciprocal_max_weight is 1/max (infinite at max <= 0).
inline double evaluate(FunctionalId f, const Path& p)
{
    switch (f) {
    case FunctionalId::const_one: return 1.0;
    case FunctionalId::max: return p.max_value();
    case FunctionalId::integral: return integral(p);
    case FunctionalId::value_at_half: return p.at(0.5 * p.horizon());
    case FunctionalId::reciprocal_max_weight: {
        const double m = p.max_value();
        return m > 0.0 ? 1.0 / m : std::numeric_limits<double>::infinity();
    }
    }
    return 0.0;
}

} // namespace excision
