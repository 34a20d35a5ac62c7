#pragma once

#include <Eigen/Dense>

#include "ripca/errors.hpp"

namespace ripca {

// Relative numerical-rank threshold on singular values.
inline constexpr double kRankTol = 1e-10;
// Frobenius tolerance on A^T A - I accepted by the StiefelPoint constructor.
inline constexpr double kOrthoTol = 1e-12;
// Tolerance for tangent-space membership checks.
inline constexpr double kTangentTol = 1e-10;

// A d x K matrix with orthonormal columns. Represents the subspace
// spanned by its columns; two points A and AQ (Q orthogonal) describe
// the same subspace. Immutable after construction.
class StiefelPoint {
 public:
  // Throws DimensionMismatch if d < K or K < 1, Error if
  // ||A^T A - I_K||_F > tol.
  explicit StiefelPoint(Eigen::MatrixXd A, double tol = kOrthoTol);

  const Eigen::MatrixXd& matrix() const noexcept { return A_; }
  Eigen::Index dim() const noexcept { return A_.rows(); }
  Eigen::Index k() const noexcept { return A_.cols(); }

  // The orthogonal projector A A^T onto the spanned subspace.
  Eigen::MatrixXd projector() const { return A_ * A_.transpose(); }

 private:
  Eigen::MatrixXd A_;
};

// Tangent vector H at a base point A, i.e. H^T A + A^T H = 0. A
// horizontal vector additionally satisfies A^T H = 0 (the lift of a
// Grassmannian tangent, H = A_perp Z).
class TangentVector {
 public:
  // Throws Error if H is not tangent at base within tol.
  static TangentVector General(StiefelPoint base, Eigen::MatrixXd H,
                               double tol = kTangentTol);
  // Throws NotHorizontal if ||A^T H|| > tol * max(1, ||H||).
  static TangentVector Horizontal(StiefelPoint base, Eigen::MatrixXd H,
                                  double tol = kTangentTol);

  const Eigen::MatrixXd& matrix() const noexcept { return H_; }
  const StiefelPoint& base() const noexcept { return base_; }
  bool horizontal() const noexcept { return horizontal_; }

 private:
  TangentVector(StiefelPoint base, Eigen::MatrixXd H, bool horizontal);

  StiefelPoint base_;
  Eigen::MatrixXd H_;
  bool horizontal_;
};

// Frobenius-nearest point of the Stiefel manifold to M, computed as
// U V^T from the economy-size SVD M = U S V^T. Throws RankDeficient if
// sigma_K(M) <= rank_tol * sigma_1(M), in which case the projection is
// not unique.
StiefelPoint polar_project(const Eigen::MatrixXd& M, double rank_tol = kRankTol);

// A d x (d-K) matrix with orthonormal columns orthogonal to range(A).
// Any valid completion may be returned; K = d yields a d x 0 matrix.
Eigen::MatrixXd orthocomplement(const StiefelPoint& A);

// (I - A A^T) v, the residual of v against the subspace.
Eigen::VectorXd residual_project(const StiefelPoint& A, const Eigen::VectorXd& v);

// Spectral-norm distance ||A1 A1^T - A2 A2^T||_2 between the spanned
// subspaces; invariant under right-multiplication of either argument by
// an orthogonal matrix.
double grassmann_distance(const StiefelPoint& A1, const StiefelPoint& A2);

}  // namespace ripca
