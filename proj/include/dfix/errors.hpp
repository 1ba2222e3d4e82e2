#pragma once

#include <stdexcept>

namespace dfix {

/// A constructed object violates one of its structural invariants
/// (bad row sum, sparsity mismatch, ...). The message names the offending
/// row or entry.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterate produced a non-finite value; the run cannot continue.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An experiment config file failed to parse or validate. The message
/// names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dfix
