#pragma once

#include <stdexcept>

namespace ma {

/// Index or geometry outside the admissible range.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid solver or problem configuration (unknown example, bad flag value).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sampled input data is unusable, e.g. a non-finite source value.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A node update found no admissible real root (loss of ellipticity).
class DegenerateNodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ma
