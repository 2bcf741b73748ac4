#ifndef APSL_ERRORS_HPP
#define APSL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace apsl {

// Root of every error thrown by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BaseMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class AmbiguousFrequency : public Error {
 public:
  using Error::Error;
};

class PositivityError : public Error {
 public:
  PositivityError(std::string section, double bound)
      : Error("coefficient [" + section + "] is not certified positive on its hull (best lower bound " +
              std::to_string(bound) + ")"),
        section_(std::move(section)),
        bound_(bound) {}

  const std::string& section() const { return section_; }
  double bound() const { return bound_; }

 private:
  std::string section_;
  double bound_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class StepLimitExceeded : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class NotDecayed : public Error {
 public:
  NotDecayed(const std::string& what, double discrepancy) : Error(what), discrepancy_(discrepancy) {}
  double discrepancy() const { return discrepancy_; }

 private:
  double discrepancy_;
};

class WronskianVanished : public Error {
 public:
  using Error::Error;
};

class NotPeriodic : public Error {
 public:
  NotPeriodic(const std::string& what, double deviation) : Error(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

class NoLabelWithinTol : public Error {
 public:
  using Error::Error;
};

}  // namespace apsl

#endif  // APSL_ERRORS_HPP
