#ifndef BARVF_ERRORS_HPP
#define BARVF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace barvf {

// Bad argument values (empty inputs, probabilities out of range, ...).
struct InvalidInputError : std::invalid_argument {
  explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

// Dimension disagreements between containers that must line up.
struct ShapeError : InvalidInputError {
  explicit ShapeError(const std::string& what) : InvalidInputError(what) {}
};

// Non-finite values where finite ones are required.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures, reported with path context.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace barvf

#endif  // BARVF_ERRORS_HPP
