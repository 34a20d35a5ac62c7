#include "ripca/objective.hpp"

#include <cmath>
#include <limits>

namespace ripca {

namespace {

void check_dims(Eigen::Index rows, const DataSet& data) {
  if (rows != data.dim()) {
    throw DimensionMismatch("basis has " + std::to_string(rows) +
                            " rows, data has dimension " +
                            std::to_string(data.dim()));
  }
}

// Residual norms ||y_i - A (A^T y_i)|| for all columns at once.
Eigen::VectorXd residual_norms(const Eigen::MatrixXd& A, const DataSet& data) {
  const Eigen::MatrixXd proj = A * (A.transpose() * data.Y());
  return (data.Y() - proj).colwise().norm();
}

GradientBundle bundle_from_weights(const StiefelPoint& A, const DataSet& data,
                                   const Eigen::VectorXd& weights) {
  const Eigen::Index d = data.dim();
  GradientBundle b;
  b.weighted_scatter = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.is_zero(i)) continue;
    b.weighted_scatter.noalias() +=
        weights(i) * (data.Y().col(i) * data.Y().col(i).transpose());
  }
  const Eigen::MatrixXd CA = b.weighted_scatter * A.matrix();
  b.projected_scatter = A.matrix().transpose() * CA;
  b.ambient_gradient = -CA;
  b.riemannian_gradient = -(CA - A.matrix() * b.projected_scatter);
  return b;
}

}  // namespace

double objective_value(const StiefelPoint& A, const DataSet& data) {
  check_dims(A.dim(), data);
  const Eigen::VectorXd res = residual_norms(A.matrix(), data);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.is_zero(i)) continue;
    sum += res(i);
  }
  return sum;
}

double extended_objective(const Eigen::MatrixXd& A, const DataSet& data) {
  check_dims(A.rows(), data);
  const Eigen::MatrixXd AtY = A.transpose() * data.Y();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.is_zero(i)) continue;
    const double yn2 = data.norm(i) * data.norm(i);
    const double rad = yn2 - AtY.col(i).squaredNorm();
    const double dom_tol = 1e-12 * yn2;
    if (rad < -dom_tol) return -std::numeric_limits<double>::infinity();
    sum += std::sqrt(std::max(rad, 0.0));
  }
  return sum;
}

double smoothed_objective(const Eigen::MatrixXd& A, const DataSet& data,
                          double eps) {
  check_dims(A.rows(), data);
  if (!(eps > 0.0)) throw Error("smoothing parameter must be positive");
  const Eigen::MatrixXd AtY = A.transpose() * data.Y();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.is_zero(i)) continue;
    const double yn2 = data.norm(i) * data.norm(i);
    const double rad = yn2 - AtY.col(i).squaredNorm() + eps;
    if (rad < 0.0) {
      throw NegativeRadicand("point " + std::to_string(i) +
                             " has radicand " + std::to_string(rad));
    }
    sum += std::sqrt(rad);
  }
  return sum;
}

AnchorStatus anchor_status(const StiefelPoint& A, const DataSet& data,
                           double anchor_tol) {
  check_dims(A.dim(), data);
  if (anchor_tol < 0.0) throw Error("anchor_tol must be nonnegative");
  const Eigen::VectorXd res = residual_norms(A.matrix(), data);
  AnchorStatus status;
  status.min_residual = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.is_zero(i)) {
      status.indices.push_back(static_cast<int>(i));
      continue;
    }
    if (res(i) < status.min_residual) {
      status.min_residual = res(i);
      status.min_index = static_cast<int>(i);
    }
    if (res(i) <= anchor_tol * data.norm(i)) {
      status.indices.push_back(static_cast<int>(i));
      status.has_nonzero_anchor = true;
    }
  }
  return status;
}

GradientBundle gradients(const StiefelPoint& A, const DataSet& data,
                         double anchor_tol) {
  check_dims(A.dim(), data);
  const Eigen::VectorXd res = residual_norms(A.matrix(), data);
  std::vector<int> anchored;
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.is_zero(i)) continue;
    if (res(i) <= anchor_tol * data.norm(i)) {
      anchored.push_back(static_cast<int>(i));
    } else {
      weights(i) = 1.0 / res(i);
    }
  }
  if (!anchored.empty()) throw AtAnchor(std::move(anchored));
  return bundle_from_weights(A, data, weights);
}

GradientBundle gradients_smoothed(const StiefelPoint& A, const DataSet& data,
                                  double eps) {
  check_dims(A.dim(), data);
  if (!(eps > 0.0)) throw Error("smoothing parameter must be positive");
  const Eigen::MatrixXd AtY = A.matrix().transpose() * data.Y();
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.is_zero(i)) continue;
    const double yn2 = data.norm(i) * data.norm(i);
    const double rad = std::max(yn2 - AtY.col(i).squaredNorm(), 0.0) + eps;
    weights(i) = 1.0 / std::sqrt(rad);
  }
  return bundle_from_weights(A, data, weights);
}

bool critical_point_test(const StiefelPoint& A, const DataSet& data,
                         double tol, double anchor_tol) {
  check_dims(A.dim(), data);
  if (A.k() == A.dim()) return true;  // P_perp = 0
  const GradientBundle b = gradients(A, data, anchor_tol);
  const double grad = b.riemannian_gradient.norm();
  const double scale = b.ambient_gradient.norm();
  return grad <= tol * scale;
}

}  // namespace ripca
