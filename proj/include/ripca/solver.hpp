#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ripca/anchor.hpp"

namespace ripca {

enum class Scheme { kDing, kPreconditioned };
enum class InitPolicy { kStandardPca, kRandom, kGiven };
enum class Termination {
  kGradZero,
  kStepSmall,
  kMaxIter,
  kHitAnchor,
  kAnchorDescentExhausted,
};

const char* to_string(Scheme s);
const char* to_string(InitPolicy p);
const char* to_string(Termination t);

struct SolverConfig {
  int max_iter = 1000;
  double tol_step = 1e-10;   // on ||A_next - A||_F
  double tol_grad = 1e-8;    // relative: ||P_perp C_A A|| / ||C_A A||
  double anchor_tol = kAnchorTol;
  double cert_tol = kCertTol;
  Scheme scheme = Scheme::kDing;
  InitPolicy init = InitPolicy::kStandardPca;
  std::optional<Eigen::MatrixXd> init_basis;  // required for kGiven
  // Additional runs from seeded random starts on top of the base run.
  int restarts = 0;
  std::uint64_t seed = 0;
  // When set, the iteration uses the smoothed weights
  // 1/sqrt(||y_i||^2 - ||A^T y_i||^2 + eps) and anchor handling is off.
  std::optional<double> eps_smoothing;
};

struct IterationRecord {
  int r = 0;
  // Objective at iterate r (the smoothed objective when smoothing is
  // on); non-increasing along a trace except across anchor escapes.
  double objective = 0.0;
  double step_norm = 0.0;
  double grad_norm = 0.0;      // ||P_perp C_A A||_F; NaN on escape steps
  double min_residual = 0.0;   // min_i ||P_perp y_i|| over nonzero points
  double decrease_bound = 0.0; // right side of the per-step decrease estimate
  double decrease_ratio = 0.0; // (E_r - E_{r+1}) / step_norm^2
  bool anchor_escape = false;
};

struct FitDiagnostics {
  // Smallest per-step decrease_ratio over the trace; stays positive on
  // runs that avoid the anchor band.
  double min_decrease_ratio = std::numeric_limits<double>::quiet_NaN();
  // Grassmann distance between the two schemes' updates from the
  // initial iterate, when both were computable.
  std::optional<double> scheme_agreement;
  double final_grad_rel = std::numeric_limits<double>::quiet_NaN();
};

struct FitResult {
  explicit FitResult(StiefelPoint b) : basis(std::move(b)) {}

  StiefelPoint basis;
  double objective = 0.0;  // sum of residual norms at basis
  std::vector<IterationRecord> trace;
  Termination termination = Termination::kMaxIter;
  std::vector<int> anchor_indices;           // when the run hit the band
  std::optional<AnchorReport> anchor_report;
  FitDiagnostics diagnostics;
  int restart_index = 0;
};

struct DecreaseBound {
  double lhs;  // E(A_next) - E(A)
  double rhs;  // -sum ||A+ A+^T y - A A^T y||^2 / (2 ||P_perp_A y||)
  bool holds;  // lhs <= rhs + 1e-9
};

// Top-K eigenvectors of sum y_i y_i^T in descending eigenvalue order.
// Throws DegenerateData when the data has fewer than K nonzero
// directions; warns on stderr when the trailing eigengap is below 1e-10
// (the subspace is not unique).
StiefelPoint standard_pca(const DataSet& data, int K);

// One fixed-point update A -> polar(C_A A). Throws AtAnchor /
// RankDeficient.
StiefelPoint ding_step(const StiefelPoint& A, const DataSet& data,
                       double anchor_tol = kAnchorTol);

// One update A -> polar(C_A A S_A^{-1}) with S_A = A^T C_A A; spans the
// same subspace as ding_step. Throws AtAnchor / SingularPrecondition
// when cond(S_A) > 1e12.
StiefelPoint preconditioned_step(const StiefelPoint& A, const DataSet& data,
                                 double anchor_tol = kAnchorTol);

// Evaluates both sides of the per-step decrease estimate for a step
// A -> A_next produced by either scheme.
DecreaseBound check_decrease_bound(const StiefelPoint& A,
                                   const StiefelPoint& A_next,
                                   const DataSet& data,
                                   double anchor_tol = kAnchorTol);

// Polar projection of an i.i.d. standard normal d x K matrix.
StiefelPoint random_stiefel(Eigen::Index d, Eigen::Index K,
                            std::uint64_t seed);

// Runs the configured scheme from every start (base init plus
// cfg.restarts seeded random inits) and returns all results, one per
// run. Runs execute concurrently; each owns an RNG stream derived from
// (seed, run index), so results do not depend on scheduling. Throws
// DegenerateData when dim span(Y) < K.
std::vector<FitResult> fit_all(const DataSet& data, int K,
                               const SolverConfig& cfg = {});

// Best run (smallest objective, ties broken by run index).
FitResult fit(const DataSet& data, int K, const SolverConfig& cfg = {});

}  // namespace ripca
