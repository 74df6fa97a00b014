#pragma once

#include <stdexcept>
#include <string>

namespace sepembed {

/// Bad user input: malformed files, invalid parameters, violated preconditions.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not produce a trustworthy result
/// (singular system, degenerate iteration, non-finite values).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace sepembed
