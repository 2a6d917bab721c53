#pragma once

#include <stdexcept>
#include <string>

namespace pgo {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The SE(3)/SO(3) logarithm is not unique at rotation angle pi.
struct AngleAtPiError : Error {
  AngleAtPiError() : Error("rotation angle at pi: logarithm not unique") {}
  explicit AngleAtPiError(const std::string& what) : Error(what) {}
};

/// Input matrix is numerically rank deficient.
struct RankDeficientError : Error {
  explicit RankDeficientError(const std::string& what) : Error(what) {}
};

/// Malformed g2o input.
struct ParseError : Error {
  ParseError(long line, const std::string& reason)
      : Error("parse error at line " + std::to_string(line) + ": " + reason),
        line(line) {}
  long line;
};

/// Sparse Cholesky factorization failed.
struct NotPositiveDefiniteError : Error {
  explicit NotPositiveDefiniteError(const std::string& what) : Error(what) {}
};

/// A connected component touched by the free set has no fixed variable.
struct NoAnchorError : Error {
  explicit NoAnchorError(const std::string& what) : Error(what) {}
};

/// Linear system is rank deficient beyond the fixed gauge.
struct SingularSystemError : Error {
  explicit SingularSystemError(const std::string& what) : Error(what) {}
};

struct EmptyInputError : Error {
  explicit EmptyInputError(const std::string& what) : Error(what) {}
};

/// Two trajectories do not share the same variable id set.
struct IdMismatchError : Error {
  explicit IdMismatchError(const std::string& what) : Error(what) {}
};

}  // namespace pgo
