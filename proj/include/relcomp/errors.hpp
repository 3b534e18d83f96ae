#pragma once

#include <stdexcept>
#include <string>

namespace relcomp {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration: unknown command, bad flag, malformed config file.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Malformed or unusable input data: embedding files, datasets, matrices.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

// Lookup miss for a token that is not in a store's vocabulary.
class TokenNotFound : public DataError {
 public:
  explicit TokenNotFound(const std::string& token)
      : DataError("token not found: " + token), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

}  // namespace relcomp
