#pragma once

#include <stdexcept>
#include <string>

namespace qbench {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// A value violates a documented invariant of a domain type.
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string invariant, const std::string& detail)
      : Error("invariant violated (" + invariant + "): " + detail),
        invariant_(std::move(invariant)) {}

  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

class RangeError : public Error {
 public:
  RangeError(std::string field, const std::string& detail)
      : Error("invalid value for '" + field + "': " + detail), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class CutoffTooSmall : public Error {
 public:
  using Error::Error;
};

class CutoffInsufficient : public Error {
 public:
  using Error::Error;
};

class NegativeEnergy : public Error {
 public:
  using Error::Error;
};

}  // namespace qbench
