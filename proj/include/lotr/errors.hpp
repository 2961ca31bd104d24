#pragma once

#include <stdexcept>
#include <string>

namespace lotr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed record in a line-oriented input file.
class FormatError : public Error {
 public:
  FormatError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class BundleMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyMask : public Error {
 public:
  EmptyMask() : Error("no legal option in action mask") {}
};

enum class Violation {
  WrongPhase,
  GameOver,
  NotInHand,
  Unaffordable,
  NotOnTable,
  NotReady,
  TransientCommit,
  InvalidDefender,
  DoubleAssignment,
  AttackerNotEngaged,
};

const char* to_string(Violation v) noexcept;

/// An engine operation was called with arguments the rules forbid.
class RuleError : public Error {
 public:
  RuleError(Violation v, const std::string& detail)
      : Error(std::string(to_string(v)) + ": " + detail), violation_(v) {}
  Violation violation() const noexcept { return violation_; }

 private:
  Violation violation_;
};

}  // namespace lotr
