#include "ripca/manifold.hpp"

#include <sstream>

namespace ripca {

namespace {

std::string dim_string(Eigen::Index r, Eigen::Index c) {
  std::ostringstream os;
  os << r << "x" << c;
  return os.str();
}

}  // namespace

StiefelPoint::StiefelPoint(Eigen::MatrixXd A, double tol) : A_(std::move(A)) {
  if (A_.cols() < 1 || A_.rows() < A_.cols()) {
    throw DimensionMismatch("StiefelPoint requires d >= K >= 1, got " +
                            dim_string(A_.rows(), A_.cols()));
  }
  const Eigen::MatrixXd gram = A_.transpose() * A_;
  const double defect =
      (gram - Eigen::MatrixXd::Identity(A_.cols(), A_.cols())).norm();
  if (!(defect <= tol)) {
    throw Error("columns not orthonormal: ||A^T A - I|| = " +
                std::to_string(defect));
  }
}

TangentVector::TangentVector(StiefelPoint base, Eigen::MatrixXd H,
                             bool horizontal)
    : base_(std::move(base)), H_(std::move(H)), horizontal_(horizontal) {}

TangentVector TangentVector::General(StiefelPoint base, Eigen::MatrixXd H,
                                     double tol) {
  if (H.rows() != base.dim() || H.cols() != base.k()) {
    throw DimensionMismatch("tangent vector must be " +
                            dim_string(base.dim(), base.k()) + ", got " +
                            dim_string(H.rows(), H.cols()));
  }
  const Eigen::MatrixXd sym =
      H.transpose() * base.matrix() + base.matrix().transpose() * H;
  if (!(sym.norm() <= tol * std::max(1.0, H.norm()))) {
    throw Error("matrix is not tangent at the base point: ||H^T A + A^T H|| = " +
                std::to_string(sym.norm()));
  }
  return TangentVector(std::move(base), std::move(H), false);
}

TangentVector TangentVector::Horizontal(StiefelPoint base, Eigen::MatrixXd H,
                                        double tol) {
  if (H.rows() != base.dim() || H.cols() != base.k()) {
    throw DimensionMismatch("tangent vector must be " +
                            dim_string(base.dim(), base.k()) + ", got " +
                            dim_string(H.rows(), H.cols()));
  }
  const Eigen::MatrixXd vertical = base.matrix().transpose() * H;
  if (!(vertical.norm() <= tol * std::max(1.0, H.norm()))) {
    throw NotHorizontal("direction has a vertical component: ||A^T H|| = " +
                        std::to_string(vertical.norm()));
  }
  return TangentVector(std::move(base), std::move(H), true);
}

StiefelPoint polar_project(const Eigen::MatrixXd& M, double rank_tol) {
  if (M.cols() < 1 || M.rows() < M.cols()) {
    throw DimensionMismatch("polar_project requires d >= K >= 1, got " +
                            dim_string(M.rows(), M.cols()));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  if (sigma(sigma.size() - 1) <= rank_tol * sigma(0)) {
    throw RankDeficient("projection onto the Stiefel manifold is not unique: "
                        "sigma_min/sigma_max = " +
                        std::to_string(sigma(sigma.size() - 1) /
                                       std::max(sigma(0), 1e-300)));
  }
  return StiefelPoint(svd.matrixU() * svd.matrixV().transpose());
}

Eigen::MatrixXd orthocomplement(const StiefelPoint& A) {
  const Eigen::Index d = A.dim();
  const Eigen::Index k = A.k();
  if (d == k) return Eigen::MatrixXd(d, 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A.matrix());
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(d - k);
}

Eigen::VectorXd residual_project(const StiefelPoint& A,
                                 const Eigen::VectorXd& v) {
  if (v.size() != A.dim()) {
    throw DimensionMismatch("vector length " + std::to_string(v.size()) +
                            " does not match dimension " +
                            std::to_string(A.dim()));
  }
  return v - A.matrix() * (A.matrix().transpose() * v);
}

double grassmann_distance(const StiefelPoint& A1, const StiefelPoint& A2) {
  if (A1.dim() != A2.dim() || A1.k() != A2.k()) {
    throw DimensionMismatch("subspaces live in different spaces: " +
                            dim_string(A1.dim(), A1.k()) + " vs " +
                            dim_string(A2.dim(), A2.k()));
  }
  const Eigen::MatrixXd diff = A1.projector() - A2.projector();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ripca
