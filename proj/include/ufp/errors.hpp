#pragma once

#include <stdexcept>
#include <string>

namespace ufp {

/// Malformed input or violated precondition. CLI exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured search or size bound was exceeded. CLI exit code 3.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A search finished without finding an assignment. CLI exit code 1.
class UnsatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal guarantee failed; always indicates a bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace ufp
