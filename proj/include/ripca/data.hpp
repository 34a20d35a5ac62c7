#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ripca/errors.hpp"

namespace ripca {

enum class CenterMode { kNone, kMean, kGeometricMedian };

const char* to_string(CenterMode mode);

// Uncentered input points, one per row.
struct RawPointCloud {
  Eigen::MatrixXd points;  // N x d
  std::string source;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

// Centered data matrix Y = (y_1 ... y_N); columns are points. Columns
// with ||y_i|| = 0 contribute nothing to the objective and would make
// every subspace an anchor point, so they are excluded from every sum;
// they stay in the matrix (indices remain stable) and are flagged via
// is_zero(). A warning is written to stderr when any are present.
class DataSet {
 public:
  DataSet(Eigen::MatrixXd Y, Eigen::VectorXd offset, CenterMode mode);

  Eigen::Index dim() const noexcept { return Y_.rows(); }
  Eigen::Index size() const noexcept { return Y_.cols(); }
  const Eigen::MatrixXd& Y() const noexcept { return Y_; }
  Eigen::VectorXd point(Eigen::Index i) const { return Y_.col(i); }

  double norm(Eigen::Index i) const { return norms_(i); }
  bool is_zero(Eigen::Index i) const { return zero_[static_cast<size_t>(i)] != 0; }
  Eigen::Index zero_count() const noexcept { return zero_count_; }
  double max_norm() const noexcept { return max_norm_; }
  // Sum of ||y_i|| over nonzero points.
  double norm_sum() const noexcept { return norm_sum_; }

  const Eigen::VectorXd& offset() const noexcept { return offset_; }
  CenterMode centering_mode() const noexcept { return mode_; }

 private:
  Eigen::MatrixXd Y_;
  Eigen::VectorXd offset_;
  CenterMode mode_;
  Eigen::VectorXd norms_;
  std::vector<char> zero_;
  Eigen::Index zero_count_;
  double max_norm_;
  double norm_sum_;
};

// Wraps a d x N matrix of already-centered columns.
DataSet dataset_from_columns(Eigen::MatrixXd Y);

// Comma-separated values, one point per row, decimal points only. A
// header row is skipped when its first field is not numeric. Throws
// ParseError / EmptyFile.
RawPointCloud load_csv(const std::string& path);

// Minimizer of sum_i ||x - x_i|| over x, computed by the guarded
// Weiszfeld fixed-point iteration (points are rows). When an iterate
// lands on a data point the standard optimality test decides whether to
// stop there or step off along the residual direction.
Eigen::VectorXd geometric_median(const Eigen::MatrixXd& points,
                                 double tol = 1e-10);

// Subtracts the chosen offset from every point and records it.
DataSet center(const RawPointCloud& cloud, CenterMode mode);

// Named example datasets, also reachable through the CLI --generate flag.

// "fig1": n_inliers points along a fixed line through the origin with
// orthogonal Gaussian noise, plus a few far off-line outliers (2-D).
// Deterministic for a fixed seed.
RawPointCloud gen_fig1(int n_inliers = 50, int n_outliers = 2,
                       double noise = 0.02, std::uint64_t seed = 0);

// The line direction used by gen_fig1.
Eigen::Vector2d fig1_true_direction();

// "fig2": the 37-point set mixing 31 collinear points (0.005*l, 0,
// 0.005*l) with 6 points on an ellipse in the xy-plane (3-D, already
// centered).
RawPointCloud gen_fig2();

// "counterexample": two unit points (-1/2, sqrt(3)/2) and
// (1/2, sqrt(3)/2) whose best-fit lines are ambiguous (already
// centered).
RawPointCloud gen_counterexample();

}  // namespace ripca
