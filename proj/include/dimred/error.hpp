#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dimred {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An input coefficient is NaN or Inf.
struct NonFiniteError : Error {
  using Error::Error;
};

/// A matrix required to be symmetric is not (beyond tolerance).
struct NonSymmetricError : Error {
  using Error::Error;
};

/// A requested or prescribed rank is outside the admissible range.
struct BadRankError : Error {
  using Error::Error;
};

/// QR detected a (numerically) rank-deficient column set. For the randomized
/// path this signals that the sketch collapsed; retrying with another seed is
/// a legitimate reaction.
struct RankDeficientError : Error {
  using Error::Error;
};

/// A matrix required to be symmetric positive definite has an eigenvalue at
/// or below the positivity tolerance.
struct NotSpdError : Error {
  using Error::Error;
};

/// Operand shapes are incompatible.
struct DimensionMismatchError : Error {
  using Error::Error;
};

/// A column had (numerically) zero norm where a nonzero norm is required,
/// e.g. a constant variable hit by scaling. The caller must drop the column
/// or skip scaling.
struct ZeroColumnError : Error {
  ZeroColumnError(Eigen::Index column_index, const std::string& what)
      : Error(what), column(column_index) {}
  Eigen::Index column;
};

/// One block of a multi-block analysis has a numerically singular Gram
/// matrix (collinear columns, or an empty category for indicator blocks).
struct SingularBlockError : Error {
  SingularBlockError(std::string block_name, const std::string& what)
      : Error(what), block(std::move(block_name)) {}
  std::string block;
};

/// A contingency table has an all-zero row or column.
struct EmptyMarginError : Error {
  enum class Axis { Row, Column };
  EmptyMarginError(Axis which, Eigen::Index margin_index, const std::string& what)
      : Error(what), axis(which), index(margin_index) {}
  Axis axis;
  Eigen::Index index;
};

/// A contingency table has a negative entry.
struct NegativeCountError : Error {
  using Error::Error;
};

/// A spectrum summing to zero where a positive total is required.
struct EmptySpectrumError : Error {
  using Error::Error;
};

/// Distance-matrix validation failures.
struct AsymmetricInputError : Error {
  using Error::Error;
};
struct NegativeEntryError : Error {
  using Error::Error;
};
struct NonzeroDiagonalError : Error {
  using Error::Error;
};

/// A cell of a delimited file could not be parsed. Line and column are
/// 1-based positions in the file.
struct ParseError : Error {
  ParseError(std::size_t line_no, std::size_t column_no, const std::string& what)
      : Error(what), line(line_no), column(column_no) {}
  std::size_t line;
  std::size_t column;
};

/// A column declared (or assumed) numeric holds a mix of numeric and
/// non-numeric cells.
struct MixedTypeError : Error {
  MixedTypeError(std::string column_name, const std::string& what)
      : Error(what), column(std::move(column_name)) {}
  std::string column;
};

/// Invalid job configuration, detected before any input is read.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace dimred
