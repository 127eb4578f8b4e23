#pragma once

#include <stdexcept>
#include <string>

namespace ncsimo {

// Precondition violations use std::invalid_argument directly. The types below
// carry the remaining failure modes so callers can tell them apart.

class NotAConstellationPoint : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedSize : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class OutOfModelRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A quantity that a valid design guarantees (e.g. a positive Gram
/// determinant) was violated. Indicates corrupted inputs, not noise.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class DetectionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ncsimo
