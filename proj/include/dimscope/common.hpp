// Shared aliases and error types for the dimscope library.

#ifndef DIMSCOPE_COMMON_HPP
#define DIMSCOPE_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dimscope {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

inline constexpr std::string_view kVersion = "0.1.0";

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid inputs: malformed files, violated preconditions, bad shapes.
/// The CLI maps this to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

/// Numerical rejection: degenerate data, divergence, undefined results.
/// The CLI maps this to exit code 3.
struct NumericError : Error {
    using Error::Error;
};

/// A dataset too small for the requested model (PPCA needs n >= d + 2).
/// Aggregation layers turn this into an N/A table cell.
struct InsufficientSamplesError : NumericError {
    using NumericError::NumericError;
};

}  // namespace dimscope

#endif  // DIMSCOPE_COMMON_HPP
