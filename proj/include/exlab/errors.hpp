#pragma once

#include <stdexcept>

namespace exlab {

// A value left the representable range of double. Callers that can move to a
// log-domain formulation should say so in the message.
class NumericOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace exlab
