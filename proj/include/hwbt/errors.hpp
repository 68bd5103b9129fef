#pragma once

#include <stdexcept>
#include <string>

namespace hwbt {

// Input-domain problems: mismatched structures, malformed values, violated
// preconditions.  The CLI maps these to exit code 1.
struct input_error : std::invalid_argument {
    explicit input_error(const std::string& m) : std::invalid_argument(m) {}
};

// A result would depend on coefficients beyond the tracked precision window.
// The CLI maps these to exit code 2.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& m) : std::runtime_error(m) {}
};

// An enumeration or closure exceeded its element budget.  Exit code 2.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& m) : std::runtime_error(m) {}
};

// Wild ramification detected: the requested tame computation does not apply.
// Thrown with a certificate of where the wildness appeared.  Exit code 2.
struct wild_error : std::runtime_error {
    explicit wild_error(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace hwbt
