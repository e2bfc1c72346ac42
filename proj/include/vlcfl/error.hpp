#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vlcfl {

// Precondition violations on arguments (bad angles, fractions, sizes).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A link with zero rate cannot carry the model payload.
class InfeasibleLink : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bandwidth allocation requested for a selection with no users.
class EmptySelection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Federated training started without any participating user.
class NoParticipants : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// R^2 is undefined when the ground truth has zero variance.
class UndefinedMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural problems with an input file (column count, no rows).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cell that is not a finite number. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A failure inside one experiment run, tagged with the run it came from.
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(std::uint64_t seed, const std::string& context, const std::string& what)
      : std::runtime_error("seed " + std::to_string(seed) + ", " + context + ": " + what),
        seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace vlcfl
