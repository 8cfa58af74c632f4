#ifndef OSSP_ERROR_HPP
#define OSSP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ossp {

/// Argument outside the domain of a formula (bad parameters, inadmissible
/// frequency vectors, out-of-range indices).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input file or record.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInput : public ParseError {
 public:
  EmptyInput() : ParseError("no records in input") {}
};

/// One species label observed with two different weights.
class WeightConflict : public ParseError {
 public:
  explicit WeightConflict(const std::string& species)
      : ParseError("species '" + species + "' appears with conflicting weights") {}
};

/// Sample too small or too degenerate for the requested estimator.
class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AcceptanceTooLow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SplitTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ossp

#endif  // OSSP_ERROR_HPP
