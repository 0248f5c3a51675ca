#pragma once

#include <stdexcept>
#include <string>

namespace rsra {

/// Invalid configuration value; the message names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Argument outside the mathematical domain of a model (e.g. log of r <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Illegal device lifecycle transition or operation in the wrong state.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Caller misuse, e.g. decoding an empty group.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rsra
