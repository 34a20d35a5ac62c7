#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ripca {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Numerical rank of the projected matrix fell below the threshold; the
// polar factor (and hence the projection onto the Stiefel manifold) is
// not unique.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

// A smooth-case operation was invoked while some data point sits inside
// the anchor band ||P_A_perp y_i|| <= anchor_tol * ||y_i||. Carries the
// offending indices so the caller can switch to the anchor analysis.
class AtAnchor : public Error {
 public:
  explicit AtAnchor(std::vector<int> indices);
  const std::vector<int>& indices() const noexcept { return indices_; }

 private:
  std::vector<int> indices_;
};

class NotAnAnchor : public Error {
 public:
  using Error::Error;
};

class NotHorizontal : public Error {
 public:
  using Error::Error;
};

class SingularPrecondition : public Error {
 public:
  using Error::Error;
};

class DegenerateData : public Error {
 public:
  using Error::Error;
};

class NegativeRadicand : public Error {
 public:
  using Error::Error;
};

class EmptyFile : public Error {
 public:
  using Error::Error;
};

// CSV ingestion failure; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& token);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace ripca
