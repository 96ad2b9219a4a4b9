#pragma once

#include <stdexcept>
#include <string>

namespace cqcode {

// Invalid numeric input (bad probabilities, bad alpha, negative spectrum, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Dimension / alphabet-size mismatch between operands.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// A requested object exceeds the configured size cap.
struct SizeError : std::runtime_error {
  explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative numerical routine failed to converge or a checked numerical
// premise (commutativity, POVM completeness) was violated.
struct NumericalFailure : std::runtime_error {
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// Randomized codebook construction exhausted its retry budget.
struct PackingFailure : std::runtime_error {
  PackingFailure(const std::string& what, std::string inequality, double worst_ratio)
      : std::runtime_error(what), inequality(std::move(inequality)), worst_ratio(worst_ratio) {}
  std::string inequality;  // name of the worst violated inequality family
  double worst_ratio;      // its count/bound ratio
};

// Malformed input file (JSON schema violations and the like).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cqcode
