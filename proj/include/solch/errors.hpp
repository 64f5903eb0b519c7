#pragma once

#include <stdexcept>
#include <string>

namespace solch {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text or file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}
  explicit ParseError(const std::string& what) : Error(what), position_(npos) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Input parses but violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A size cap or search budget was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// A documented precondition does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace solch
