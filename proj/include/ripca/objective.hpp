#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ripca/data.hpp"
#include "ripca/manifold.hpp"

namespace ripca {

// Relative width of the anchor band: point i is anchored at A when
// ||(I - A A^T) y_i|| <= anchor_tol * ||y_i||. Below this band the
// residual weights 1/||P_perp y_i|| exceed ~1e9 and dominate the
// weighted scatter destructively.
inline constexpr double kAnchorTol = 1e-9;

struct AnchorStatus {
  // Indices inside the band, ascending. Zero points are always members
  // by convention; they are reported here but excluded from every sum.
  std::vector<int> indices;
  // min_i ||P_perp y_i|| over nonzero points (+inf when all points are
  // zero).
  double min_residual = 0.0;
  int min_index = -1;
  // True when some nonzero point is inside the band; only those points
  // make the objective non-differentiable.
  bool has_nonzero_anchor = false;

  bool empty() const { return indices.empty(); }
};

// Everything the iteration needs from one pass over the data.
struct GradientBundle {
  Eigen::MatrixXd weighted_scatter;    // C_A = sum y_i y_i^T / ||P_perp y_i||
  Eigen::MatrixXd ambient_gradient;    // -C_A A
  Eigen::MatrixXd riemannian_gradient; // -(I - A A^T) C_A A, horizontal
  Eigen::MatrixXd projected_scatter;   // S_A = A^T C_A A
};

// Sum of unsquared residual norms sum_i ||(I - A A^T) y_i||. Defined
// everywhere, including anchor points.
double objective_value(const StiefelPoint& A, const DataSet& data);

// The concave extension sum_i sqrt(||y_i||^2 - ||A^T y_i||^2) for an
// arbitrary d x K matrix; agrees with objective_value on the Stiefel
// manifold. Returns -inf when some radicand falls below
// -1e-12 * ||y_i||^2 (outside the domain); radicands inside that
// round-off band are clamped to zero.
double extended_objective(const Eigen::MatrixXd& A, const DataSet& data);

// sum_i sqrt(||y_i||^2 - ||A^T y_i||^2 + eps), smooth on a neighborhood
// of the domain. Throws NegativeRadicand when some radicand is negative.
double smoothed_objective(const Eigen::MatrixXd& A, const DataSet& data,
                          double eps);

AnchorStatus anchor_status(const StiefelPoint& A, const DataSet& data,
                           double anchor_tol = kAnchorTol);

// Weighted scatter, ambient and Riemannian gradients, and the projected
// scatter in one pass. Throws AtAnchor when any nonzero point sits
// inside the band (the weights are undefined there).
GradientBundle gradients(const StiefelPoint& A, const DataSet& data,
                         double anchor_tol = kAnchorTol);

// Same bundle with the smoothed weights 1 / sqrt(||y_i||^2 -
// ||A^T y_i||^2 + eps); never hits the anchor error.
GradientBundle gradients_smoothed(const StiefelPoint& A, const DataSet& data,
                                  double eps);

// True iff ||P_perp C_A A||_F <= tol * ||C_A A||_F. Trivially true for
// K = d. Throws AtAnchor like gradients().
bool critical_point_test(const StiefelPoint& A, const DataSet& data,
                         double tol, double anchor_tol = kAnchorTol);

}  // namespace ripca
