#pragma once

#include <stdexcept>
#include <string>

namespace mchr {

/// Invalid model, history, index or argument combination.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A model or system file that does not match the schema. `where` is a
/// JSON-pointer-like location inside the document.
class ParseError : public ModelError {
 public:
  ParseError(std::string where, const std::string& what)
      : ModelError(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// An adaptive numerical routine could not reach the requested tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mchr
