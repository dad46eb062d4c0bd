#pragma once

#include <stdexcept>
#include <string>

namespace mtk {

// Every failure the library reports carries the process exit code the CLI
// should return for it.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int exit_code) : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what, 2) {}
};

/// A configured memory or cost guard would be exceeded.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(what, 3) {}
};

class NumericInstability : public Error {
 public:
  explicit NumericInstability(const std::string& what) : Error(what, 4) {}
};

}  // namespace mtk
