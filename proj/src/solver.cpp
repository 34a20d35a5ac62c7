#include "ripca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <thread>

namespace ripca {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kDing: return "ding";
    case Scheme::kPreconditioned: return "preconditioned";
  }
  return "?";
}

const char* to_string(InitPolicy p) {
  switch (p) {
    case InitPolicy::kStandardPca: return "standard_pca";
    case InitPolicy::kRandom: return "random";
    case InitPolicy::kGiven: return "given";
  }
  return "?";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kGradZero: return "grad_zero";
    case Termination::kStepSmall: return "step_small";
    case Termination::kMaxIter: return "max_iter";
    case Termination::kHitAnchor: return "hit_anchor";
    case Termination::kAnchorDescentExhausted:
      return "anchor_descent_exhausted";
  }
  return "?";
}

namespace {

constexpr double kPrecondCondLimit = 1e12;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 50;

StiefelPoint step_from_bundle(const GradientBundle& b, Scheme scheme) {
  const Eigen::MatrixXd CA = -b.ambient_gradient;
  if (scheme == Scheme::kDing) return polar_project(CA);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.projected_scatter);
  const auto& lambda = es.eigenvalues();
  const double lmin = lambda(0);
  const double lmax = lambda(lambda.size() - 1);
  if (!(lmin > 0.0) || lmax / lmin > kPrecondCondLimit) {
    throw SingularPrecondition("A^T C_A A has condition number beyond 1e12");
  }
  const Eigen::MatrixXd S_inv = es.eigenvectors() *
                                lambda.cwiseInverse().asDiagonal() *
                                es.eigenvectors().transpose();
  return polar_project(CA * S_inv);
}

double decrease_rhs(const StiefelPoint& A, const StiefelPoint& A_next,
                    const DataSet& data, double anchor_tol,
                    std::vector<int>* anchored_out) {
  const Eigen::MatrixXd proj = A.matrix() * (A.matrix().transpose() * data.Y());
  const Eigen::MatrixXd proj_next =
      A_next.matrix() * (A_next.matrix().transpose() * data.Y());
  double rhs = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.is_zero(i)) continue;
    const double res = (data.Y().col(i) - proj.col(i)).norm();
    if (res <= anchor_tol * data.norm(i)) {
      if (anchored_out) anchored_out->push_back(static_cast<int>(i));
      continue;
    }
    rhs -= (proj_next.col(i) - proj.col(i)).squaredNorm() / (2.0 * res);
  }
  return rhs;
}

// Rebuilds A so the anchored directions lie exactly in its range:
// an orthonormal basis V of the anchored points is kept verbatim and the
// remaining K - m directions are taken from the dominant left singular
// vectors of (I - V V^T) A; a final polar projection restores exact
// orthonormality without changing the range.
StiefelPoint snap_to_anchor(const StiefelPoint& A, const DataSet& data,
                            const AnchorStatus& status) {
  std::vector<int> anchored;
  for (int i : status.indices) {
    if (!data.is_zero(i)) anchored.push_back(i);
  }
  const Eigen::Index d = A.dim();
  const Eigen::Index K = A.k();
  Eigen::MatrixXd dirs(d, static_cast<Eigen::Index>(anchored.size()));
  for (size_t j = 0; j < anchored.size(); ++j) {
    dirs.col(static_cast<Eigen::Index>(j)) =
        data.Y().col(anchored[j]) / data.norm(anchored[j]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dirs, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  Eigen::Index m = 0;
  for (Eigen::Index i = 0; i < sigma.size() && m < K; ++i) {
    if (sigma(i) > 1e-6 * sigma(0)) ++m;
  }
  const Eigen::MatrixXd V = svd.matrixU().leftCols(m);

  Eigen::MatrixXd assembled(d, K);
  assembled.leftCols(m) = V;
  if (m < K) {
    const Eigen::MatrixXd rest =
        A.matrix() - V * (V.transpose() * A.matrix());
    Eigen::JacobiSVD<Eigen::MatrixXd> rest_svd(rest, Eigen::ComputeThinU);
    assembled.rightCols(K - m) = rest_svd.matrixU().leftCols(K - m);
  }
  return polar_project(assembled);
}

std::optional<StiefelPoint> backtrack_escape(const StiefelPoint& A,
                                             const AnchorReport& report,
                                             const DataSet& data) {
  if (!report.descent.has_value()) return std::nullopt;
  const Eigen::MatrixXd& H = report.descent->matrix();
  const double slope = report.descent_derivative;
  const double E0 = objective_value(A, data);
  double alpha = 1.0;
  for (int t = 0; t < kMaxHalvings; ++t) {
    StiefelPoint cand = polar_project(A.matrix() + alpha * H);
    if (objective_value(cand, data) <= E0 + kArmijo * alpha * slope) {
      return cand;
    }
    alpha *= 0.5;
  }
  return std::nullopt;
}

std::uint64_t run_seed(std::uint64_t seed, int run) {
  // splitmix64 over (seed, run) for independent streams
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(run) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

FitResult run_single(const DataSet& data, const SolverConfig& cfg,
                     StiefelPoint A, int run_index) {
  const bool smoothing = cfg.eps_smoothing.has_value();
  const double eps = smoothing ? *cfg.eps_smoothing : 0.0;
  auto driving = [&](const StiefelPoint& P) {
    return smoothing ? smoothed_objective(P.matrix(), data, eps)
                     : objective_value(P, data);
  };
  auto bundle_at = [&](const StiefelPoint& P) {
    return smoothing ? gradients_smoothed(P, data, eps)
                     : gradients(P, data, cfg.anchor_tol);
  };

  FitResult result(A);
  result.restart_index = run_index;
  double E_cur = driving(A);

  try {
    const GradientBundle b0 = bundle_at(A);
    const StiefelPoint s_ding = step_from_bundle(b0, Scheme::kDing);
    const StiefelPoint s_pre =
        step_from_bundle(b0, Scheme::kPreconditioned);
    result.diagnostics.scheme_agreement = grassmann_distance(s_ding, s_pre);
  } catch (const Error&) {
    // not computable at this start (anchor band or singular S_A)
  }

  Termination term = Termination::kMaxIter;
  for (int r = 0; r < cfg.max_iter; ++r) {
    const AnchorStatus status = anchor_status(A, data, cfg.anchor_tol);
    if (!smoothing && status.has_nonzero_anchor) {
      const StiefelPoint snapped = snap_to_anchor(A, data, status);
      AnchorReport report =
          certify_anchor(snapped, data, cfg.anchor_tol, cfg.cert_tol);
      const double E_snap = objective_value(snapped, data);
      if (report.verdict == AnchorVerdict::kNotMinimizer) {
        if (auto escaped = backtrack_escape(snapped, report, data)) {
          const double E_esc = objective_value(*escaped, data);
          const double step = (escaped->matrix() - snapped.matrix()).norm();
          IterationRecord rec;
          rec.r = r;
          rec.objective = E_snap;
          rec.step_norm = step;
          rec.grad_norm = std::numeric_limits<double>::quiet_NaN();
          rec.min_residual = status.min_residual;
          rec.decrease_bound = std::numeric_limits<double>::quiet_NaN();
          rec.decrease_ratio =
              step > 0.0 ? (E_snap - E_esc) / (step * step) : 0.0;
          rec.anchor_escape = true;
          result.trace.push_back(rec);
          A = *escaped;
          E_cur = E_esc;
          continue;
        }
        term = Termination::kAnchorDescentExhausted;
      } else {
        term = Termination::kHitAnchor;
      }
      A = snapped;
      result.anchor_indices = report.indices;
      result.anchor_report = std::move(report);
      break;
    }

    const GradientBundle b = bundle_at(A);
    const double grad_norm = b.riemannian_gradient.norm();
    const double grad_scale = b.ambient_gradient.norm();
    const double grad_rel = grad_scale > 0.0 ? grad_norm / grad_scale : 0.0;
    result.diagnostics.final_grad_rel = grad_rel;
    if (grad_rel <= cfg.tol_grad) {
      term = Termination::kGradZero;
      break;
    }

    const StiefelPoint A_next = step_from_bundle(b, cfg.scheme);
    const double step = (A_next.matrix() - A.matrix()).norm();
    const double E_next = driving(A_next);

    IterationRecord rec;
    rec.r = r;
    rec.objective = E_cur;
    rec.step_norm = step;
    rec.grad_norm = grad_norm;
    rec.min_residual = status.min_residual;
    rec.decrease_bound =
        smoothing ? std::numeric_limits<double>::quiet_NaN()
                  : decrease_rhs(A, A_next, data, cfg.anchor_tol, nullptr);
    rec.decrease_ratio = step > 0.0 ? (E_cur - E_next) / (step * step) : 0.0;
    result.trace.push_back(rec);

    A = A_next;
    E_cur = E_next;
    if (step <= cfg.tol_step) {
      term = Termination::kStepSmall;
      break;
    }
  }

  result.basis = A;
  result.objective = objective_value(A, data);
  result.termination = term;
  // Steps at round-off scale divide noise by a vanishing square; only
  // steps whose expected decrease is resolvable in double precision
  // enter the ratio diagnostic.
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const IterationRecord& rec : result.trace) {
    if (rec.anchor_escape) continue;
    const double resolvable =
        1e-7 * std::sqrt(std::max(1.0, std::abs(rec.objective)));
    if (rec.step_norm <= resolvable) continue;
    min_ratio = std::min(min_ratio, rec.decrease_ratio);
  }
  if (std::isfinite(min_ratio)) result.diagnostics.min_decrease_ratio = min_ratio;
  return result;
}

Eigen::Index data_rank(const DataSet& data) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(data.Y());
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > kRankTol * sigma(0)) ++rank;
  }
  return rank;
}

}  // namespace

StiefelPoint standard_pca(const DataSet& data, int K) {
  const Eigen::Index d = data.dim();
  if (K < 1 || K > d) {
    throw DimensionMismatch("K must satisfy 1 <= K <= d");
  }
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.is_zero(i)) continue;
    scatter.noalias() += data.Y().col(i) * data.Y().col(i).transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scatter);
  const auto& lambda = es.eigenvalues();  // ascending
  const double lmax = lambda(d - 1);
  if (!(lmax > 0.0)) throw DegenerateData("data has no nonzero direction");
  Eigen::Index nonzero = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (lambda(i) > 1e-12 * lmax) ++nonzero;
  }
  if (nonzero < K) {
    throw DegenerateData("data spans only " + std::to_string(nonzero) +
                         " directions, need " + std::to_string(K));
  }
  if (K < d && lambda(d - K) - lambda(d - K - 1) < 1e-10 * lmax) {
    std::cerr << "ripca: standard_pca eigengap below 1e-10; "
                 "the K-dimensional subspace is not unique\n";
  }
  Eigen::MatrixXd basis(d, K);
  for (int j = 0; j < K; ++j) basis.col(j) = es.eigenvectors().col(d - 1 - j);
  return StiefelPoint(basis);
}

StiefelPoint ding_step(const StiefelPoint& A, const DataSet& data,
                       double anchor_tol) {
  return step_from_bundle(gradients(A, data, anchor_tol), Scheme::kDing);
}

StiefelPoint preconditioned_step(const StiefelPoint& A, const DataSet& data,
                                 double anchor_tol) {
  return step_from_bundle(gradients(A, data, anchor_tol),
                          Scheme::kPreconditioned);
}

DecreaseBound check_decrease_bound(const StiefelPoint& A,
                                   const StiefelPoint& A_next,
                                   const DataSet& data, double anchor_tol) {
  std::vector<int> anchored;
  const double rhs = decrease_rhs(A, A_next, data, anchor_tol, &anchored);
  if (!anchored.empty()) throw AtAnchor(std::move(anchored));
  const double lhs = objective_value(A_next, data) - objective_value(A, data);
  return DecreaseBound{lhs, rhs, lhs <= rhs + 1e-9};
}

StiefelPoint random_stiefel(Eigen::Index d, Eigen::Index K,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Eigen::MatrixXd M(d, K);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < K; ++j) M(i, j) = gauss(rng);
    }
    try {
      return polar_project(M);
    } catch (const RankDeficient&) {
      // essentially never for a Gaussian draw; redraw
    }
  }
  throw Error("failed to draw a full-rank random matrix");
}

std::vector<FitResult> fit_all(const DataSet& data, int K,
                               const SolverConfig& cfg) {
  const Eigen::Index d = data.dim();
  if (K < 1 || K > d) {
    throw DimensionMismatch("K must satisfy 1 <= K <= d");
  }
  if (!(cfg.tol_step > 0.0) || !(cfg.tol_grad > 0.0) ||
      !(cfg.anchor_tol > 0.0) || !(cfg.cert_tol > 0.0)) {
    throw Error("tolerances must be positive");
  }
  if (cfg.max_iter < 1 || cfg.restarts < 0) {
    throw Error("max_iter must be >= 1 and restarts >= 0");
  }
  if (cfg.eps_smoothing.has_value() && !(*cfg.eps_smoothing > 0.0)) {
    throw Error("eps_smoothing must be positive when set");
  }
  if (data_rank(data) < K) {
    throw DegenerateData("dim span(Y) < K");
  }
  if (cfg.init == InitPolicy::kGiven && !cfg.init_basis.has_value()) {
    throw Error("init policy 'given' requires init_basis");
  }

  auto make_init = [&](int run) -> StiefelPoint {
    if (run == 0) {
      switch (cfg.init) {
        case InitPolicy::kStandardPca: return standard_pca(data, K);
        case InitPolicy::kRandom: return random_stiefel(d, K, run_seed(cfg.seed, 0));
        case InitPolicy::kGiven: return polar_project(*cfg.init_basis);
      }
    }
    return random_stiefel(d, K, run_seed(cfg.seed, run));
  };

  // K = d: the residual projector vanishes, the objective is
  // identically zero and every basis is optimal.
  if (K == static_cast<int>(d)) {
    FitResult result(make_init(0));
    result.objective = objective_value(result.basis, data);
    result.termination = Termination::kGradZero;
    result.diagnostics.final_grad_rel = 0.0;
    return {std::move(result)};
  }

  const int runs = 1 + std::max(0, cfg.restarts);
  std::vector<std::optional<FitResult>> results(static_cast<size_t>(runs));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(runs));

  // At least two workers whenever there are multiple runs: results are
  // scheduling-independent by construction and the concurrent path
  // should not go untested on single-core hosts.
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(
      std::min<unsigned>(hw, static_cast<unsigned>(runs)));

  auto work = [&](int worker) {
    for (int run = worker; run < runs; run += workers) {
      try {
        results[static_cast<size_t>(run)] =
            run_single(data, cfg, make_init(run), run);
      } catch (...) {
        errors[static_cast<size_t>(run)] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  for (int run = 0; run < runs; ++run) {
    if (errors[static_cast<size_t>(run)]) {
      std::rethrow_exception(errors[static_cast<size_t>(run)]);
    }
  }
  std::vector<FitResult> out;
  out.reserve(static_cast<size_t>(runs));
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

FitResult fit(const DataSet& data, int K, const SolverConfig& cfg) {
  std::vector<FitResult> all = fit_all(data, K, cfg);
  size_t best = 0;
  for (size_t i = 1; i < all.size(); ++i) {
    if (all[i].objective < all[best].objective) best = i;
  }
  return std::move(all[best]);
}

}  // namespace ripca
