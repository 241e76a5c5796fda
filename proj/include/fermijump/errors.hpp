// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>

namespace fermijump {

// Matrix or tensor dimensions do not match the operation's contract.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A requested object would exceed a configured size cap or envelope.
struct SizeLimitError : std::length_error {
    using std::length_error::length_error;
};

// Input violates an algebraic admissibility constraint.
struct ConstraintError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A density matrix failed its physicality checks.
struct StateValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Time arguments are negative or not nondecreasing.
struct OrderingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical routine produced an unusable result.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A scenario file violates the documented schema.
struct ScenarioParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fermijump
