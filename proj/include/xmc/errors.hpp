#ifndef XMC_ERRORS_HPP
#define XMC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xmc {

/// Malformed or inconsistent user input.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A configured size or enumeration budget was exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A mathematical precondition or identity failed.
struct ViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Floating point data could not be resolved within tolerance.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace xmc

#endif
