#ifndef CHAC_ERRORS_HPP
#define CHAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chac {

/// Malformed or inconsistent input (bad dimensions, unparsable files, ...).
/// The CLI maps this to exit code 2.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structurally valid input outside the supported fragment (e.g. cyclic
/// automata passed to perfect_trace_set).
struct unsupported_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A violated internal invariant (e.g. a merge class mixing abstract states).
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace chac

#endif
