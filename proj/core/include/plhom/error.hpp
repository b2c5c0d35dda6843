#pragma once

#include <stdexcept>
#include <string>

namespace plhom {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input text could not be decoded; the message carries position context.
struct ParseError : Error {
  using Error::Error;
};

/// A value violated an operation's domain or a stated precondition.
struct DomainError : Error {
  using Error::Error;
};

/// A configured search bound or cap was exhausted.
struct ResourceError : Error {
  using Error::Error;
};

/// Certificate replay diverged from the recorded construction.
struct VerifyError : Error {
  VerifyError(const std::string& msg, int step = -1) : Error(msg), step(step) {}
  int step;  // index of the first diverging log step, -1 if structural
};

}  // namespace plhom
