#pragma once

#include <stdexcept>
#include <string>

namespace semcomp {

/// Bad or inconsistent user input (files, configs, arguments). CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant did not hold. CLI exit code 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnknownItemError : public InputError {
 public:
  explicit UnknownItemError(std::string item)
      : InputError("unknown item '" + item + "'"), item_(std::move(item)) {}

  const std::string& item() const noexcept { return item_; }

 private:
  std::string item_;
};

}  // namespace semcomp
