#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ripca/solver.hpp"

using ripca::DataSet;
using ripca::SolverConfig;
using ripca::StiefelPoint;

namespace {

DataSet cross_data() {
  Eigen::MatrixXd Y(2, 2);
  Y << 1, 0, 0, 1;
  return ripca::dataset_from_columns(Y);
}

StiefelPoint line(double theta) {
  Eigen::MatrixXd A(2, 1);
  A << std::cos(theta), std::sin(theta);
  return StiefelPoint(A);
}

constexpr double kDeg = M_PI / 180.0;

}  // namespace

TEST_CASE("fixed point of the iteration at the balanced diagonal") {
  const DataSet data = cross_data();
  const StiefelPoint A = line(45 * kDeg);
  const StiefelPoint next = ripca::ding_step(A, data);
  CHECK(ripca::grassmann_distance(A, next) <= 1e-12);
}

TEST_CASE("one update from 30 degrees") {
  const DataSet data = cross_data();
  const StiefelPoint A = line(30 * kDeg);
  const StiefelPoint next = ripca::ding_step(A, data);
  Eigen::MatrixXd expected(2, 1);
  expected << 3.0 / std::sqrt(10.0), 1.0 / std::sqrt(10.0);
  CHECK((next.matrix() - expected).norm() <= 1e-12);
  CHECK(ripca::objective_value(A, data) ==
        doctest::Approx(1.3660254037844386).epsilon(1e-14));
  CHECK(ripca::objective_value(next, data) ==
        doctest::Approx(4.0 / std::sqrt(10.0)).epsilon(1e-14));
}

TEST_CASE("the ambiguous two-point dataset has two competing minimizers") {
  const DataSet data =
      ripca::center(ripca::gen_counterexample(), ripca::CenterMode::kNone);
  const StiefelPoint y0(Eigen::MatrixXd(data.Y().col(0)));
  const StiefelPoint y1(Eigen::MatrixXd(data.Y().col(1)));

  // both span directions are anchor points of the objective
  CHECK_THROWS_AS(ripca::ding_step(y0, data), ripca::AtAnchor);
  CHECK(ripca::certify_anchor(y0, data).verdict ==
        ripca::AnchorVerdict::kStrictLocalMin);
  CHECK(ripca::certify_anchor(y1, data).verdict ==
        ripca::AnchorVerdict::kStrictLocalMin);
  CHECK(ripca::objective_value(y0, data) ==
        doctest::Approx(ripca::objective_value(y1, data)).epsilon(1e-14));
  CHECK(ripca::grassmann_distance(y0, y1) > 0.4);

  // the iteration contracts toward the nearer minimizer (y1 sits at 60
  // degrees, y0 at 120)
  const StiefelPoint near1 = line(62 * kDeg);
  const StiefelPoint stepped = ripca::ding_step(near1, data);
  CHECK(ripca::grassmann_distance(stepped, y1) <
        ripca::grassmann_distance(near1, y1));
}

TEST_CASE("both schemes produce the same subspace") {
  const DataSet data = cross_data();
  const StiefelPoint A = line(30 * kDeg);
  const StiefelPoint d1 = ripca::ding_step(A, data);
  const StiefelPoint p1 = ripca::preconditioned_step(A, data);
  CHECK(ripca::grassmann_distance(d1, p1) <= 1e-10);

  const StiefelPoint crit = line(45 * kDeg);
  CHECK(ripca::grassmann_distance(
            ripca::preconditioned_step(crit, data), crit) <= 1e-10);

  for (std::uint64_t s = 0; s < 5; ++s) {
    const DataSet rnd = oracles::random_dataset(5, 20, 100 + s);
    StiefelPoint a = ripca::random_stiefel(5, 2, 200 + s);
    StiefelPoint b = a;
    for (int it = 0; it < 20; ++it) {
      if (ripca::anchor_status(a, rnd).has_nonzero_anchor ||
          ripca::anchor_status(b, rnd).has_nonzero_anchor) {
        break;
      }
      a = ripca::ding_step(a, rnd);
      b = ripca::preconditioned_step(b, rnd);
      CHECK(ripca::grassmann_distance(a, b) <= 1e-8);
    }
  }
}

TEST_CASE("decrease bound at a critical point and along a step") {
  const DataSet data = cross_data();
  const StiefelPoint crit = line(45 * kDeg);
  const ripca::DecreaseBound at_crit = ripca::check_decrease_bound(
      crit, ripca::preconditioned_step(crit, data), data);
  CHECK(std::abs(at_crit.lhs) <= 1e-12);
  CHECK(std::abs(at_crit.rhs) <= 1e-12);
  CHECK(at_crit.holds);

  const StiefelPoint A = line(30 * kDeg);
  const ripca::DecreaseBound step = ripca::check_decrease_bound(
      A, ripca::preconditioned_step(A, data), data);
  CHECK(step.holds);
  CHECK(step.lhs == doctest::Approx(-0.1011143397170869).epsilon(1e-9));

  for (std::uint64_t s = 0; s < 50; ++s) {
    const DataSet rnd = oracles::random_dataset(4, 16, 300 + s);
    const StiefelPoint a = ripca::random_stiefel(4, 2, 400 + s);
    const ripca::DecreaseBound b =
        ripca::check_decrease_bound(a, ripca::preconditioned_step(a, rnd), rnd);
    CHECK(b.holds);
  }
}

TEST_CASE("standard PCA picks the dominant axis") {
  Eigen::MatrixXd Y(2, 4);
  Y << 1, -1, 0, 0, 0, 0, 0.1, -0.1;
  const DataSet data = ripca::dataset_from_columns(Y);
  const StiefelPoint first = ripca::standard_pca(data, 1);
  CHECK(std::abs(std::abs(first.matrix()(0, 0)) - 1.0) <= 1e-12);

  Eigen::MatrixXd collinear(3, 4);
  collinear << 1, 2, -1, 3, 2, 4, -2, 6, 0, 0, 0, 0;
  CHECK_THROWS_AS(
      ripca::standard_pca(ripca::dataset_from_columns(collinear), 2),
      ripca::DegenerateData);
}

TEST_CASE("robust fit resists the off-line points that tilt standard PCA") {
  const DataSet data =
      ripca::center(ripca::gen_fig1(50, 2, 0.02, 42), ripca::CenterMode::kMean);
  const Eigen::Vector2d u = ripca::fig1_true_direction();
  const StiefelPoint truth{Eigen::MatrixXd(u)};

  const StiefelPoint pca = ripca::standard_pca(data, 1);
  const ripca::FitResult robust = ripca::fit(data, 1);
  const double pca_angle = ripca::grassmann_distance(pca, truth);
  const double robust_angle = ripca::grassmann_distance(robust.basis, truth);
  CHECK(robust_angle < pca_angle);
}

TEST_CASE("fit walks into the anchor band and certifies the minimizer") {
  const DataSet data = cross_data();
  SolverConfig cfg;
  cfg.init = ripca::InitPolicy::kGiven;
  cfg.init_basis = line(80 * kDeg).matrix();
  const ripca::FitResult result = ripca::fit(data, 1, cfg);
  CHECK(result.termination == ripca::Termination::kHitAnchor);
  REQUIRE(result.anchor_report.has_value());
  CHECK(result.anchor_report->verdict ==
        ripca::AnchorVerdict::kStrictLocalMin);
  CHECK(std::abs(std::abs(result.basis.matrix()(1, 0)) - 1.0) <= 1e-10);
  CHECK(result.objective == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(result.anchor_indices.size() == 1);
  CHECK(result.anchor_indices[0] == 1);
}

TEST_CASE("multi-restart fit recovers the known optimal subspaces") {
  const DataSet data =
      ripca::center(ripca::gen_fig2(), ripca::CenterMode::kNone);
  SolverConfig cfg;
  cfg.restarts = 40;
  cfg.seed = 7;

  const ripca::FitResult k1 = ripca::fit(data, 1, cfg);
  const double s = 1.0 / std::sqrt(2.0);
  const StiefelPoint truth1{Eigen::MatrixXd{{s}, {0.0}, {s}}};
  CHECK(ripca::grassmann_distance(k1.basis, truth1) <= 1e-3);

  const ripca::FitResult k2 = ripca::fit(data, 2, cfg);
  const StiefelPoint truth2{
      Eigen::MatrixXd{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}};
  CHECK(ripca::grassmann_distance(k2.basis, truth2) <= 1e-3);
}

TEST_CASE("traces decrease monotonically with positive decrease ratios") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Eigen::Index d = 3 + static_cast<Eigen::Index>(s % 6);
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(s % 3);
    if (k >= d) continue;
    const DataSet data = oracles::random_dataset(d, 5 * d, 500 + s);
    SolverConfig cfg;
    cfg.init = ripca::InitPolicy::kRandom;
    cfg.seed = s;
    const ripca::FitResult result = ripca::fit(data, static_cast<int>(k), cfg);
    for (size_t i = 1; i < result.trace.size(); ++i) {
      if (result.trace[i].anchor_escape) continue;
      CHECK(result.trace[i].objective <=
            result.trace[i - 1].objective + 1e-12);
    }
    if (!result.trace.empty() &&
        !std::isnan(result.diagnostics.min_decrease_ratio)) {
      CHECK(result.diagnostics.min_decrease_ratio > 0.0);
    }
    if (result.termination == ripca::Termination::kGradZero) {
      CHECK(ripca::critical_point_test(result.basis, data,
                                       cfg.tol_grad * 1.01));
    }
  }
}

TEST_CASE("step norms shrink along convergent runs") {
  // Some instances converge into the anchor band instead (the robust
  // subspace may interpolate data points); scan seeds for smooth runs.
  int found = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const DataSet data = oracles::random_dataset(5, 25, 77 + seed);
    SolverConfig cfg;
    cfg.tol_grad = 1e-300;  // force the step-size criterion
    cfg.max_iter = 5000;
    const ripca::FitResult result = ripca::fit(data, 2, cfg);
    if (result.termination != ripca::Termination::kStepSmall) continue;
    ++found;
    REQUIRE(result.trace.size() >= 2);
    CHECK(result.trace.back().step_norm < result.trace.front().step_norm);
    CHECK(result.trace.back().step_norm <= cfg.tol_step);
  }
  CHECK(found >= 3);
}

TEST_CASE("stopping criteria agree at converged and unconverged iterates") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DataSet data = oracles::random_dataset(5, 25, 600 + s);
    SolverConfig cfg;
    cfg.init = ripca::InitPolicy::kRandom;
    cfg.seed = s;
    cfg.tol_grad = 1e-11;
    cfg.max_iter = 5000;
    const ripca::FitResult result = ripca::fit(data, 2, cfg);
    if (result.termination != ripca::Termination::kGradZero) continue;

    auto criteria = [&](const StiefelPoint& A) {
      const ripca::GradientBundle b = ripca::gradients(A, data);
      const StiefelPoint next = ripca::ding_step(A, data);
      const Eigen::MatrixXd CA = -b.ambient_gradient;
      const double q1 = std::abs(
          ((next.matrix() - A.matrix()).array() * CA.array()).sum());
      const double q2 = (next.matrix() - A.matrix()).norm() / A.matrix().norm();
      const double q3 = b.riemannian_gradient.norm() / CA.norm();
      return std::array<double, 3>{q1, q2, q3};
    };

    const auto at_end = criteria(result.basis);
    for (double q : at_end) CHECK(q <= 1e-7);  // all fire within the band

    const StiefelPoint start = ripca::random_stiefel(5, 2, 700 + s);
    const auto at_start = criteria(start);
    for (double q : at_start) CHECK(q > 1e-9);  // none fires
  }
}

TEST_CASE("fit is invariant under right multiplication of the start") {
  const DataSet data = oracles::random_dataset(5, 25, 88);
  const StiefelPoint A0 = ripca::random_stiefel(5, 2, 89);
  Eigen::MatrixXd Q(2, 2);
  const double c = std::cos(1.1), sn = std::sin(1.1);
  Q << c, -sn, sn, c;

  SolverConfig cfg;
  cfg.init = ripca::InitPolicy::kGiven;
  cfg.init_basis = A0.matrix();
  const ripca::FitResult r1 = ripca::fit(data, 2, cfg);
  cfg.init_basis = A0.matrix() * Q;
  const ripca::FitResult r2 = ripca::fit(data, 2, cfg);

  REQUIRE(r1.trace.size() == r2.trace.size());
  for (size_t i = 0; i < r1.trace.size(); ++i) {
    CHECK(std::abs(r1.trace[i].objective - r2.trace[i].objective) <= 1e-10);
  }
}

TEST_CASE("smoothed iteration decreases the smoothed objective") {
  const DataSet data =
      ripca::center(ripca::gen_fig2(), ripca::CenterMode::kNone);
  SolverConfig cfg;
  cfg.eps_smoothing = 1e-6;
  cfg.restarts = 5;
  cfg.seed = 3;
  const std::vector<ripca::FitResult> runs = ripca::fit_all(data, 1, cfg);
  for (const ripca::FitResult& run : runs) {
    CHECK(run.termination != ripca::Termination::kHitAnchor);
    CHECK(run.termination != ripca::Termination::kAnchorDescentExhausted);
    for (size_t i = 1; i < run.trace.size(); ++i) {
      CHECK(run.trace[i].objective <= run.trace[i - 1].objective + 1e-12);
    }
  }
}

TEST_CASE("restart streams are deterministic") {
  const DataSet data = oracles::random_dataset(4, 20, 90);
  SolverConfig cfg;
  cfg.restarts = 6;
  cfg.seed = 17;
  const std::vector<ripca::FitResult> a = ripca::fit_all(data, 2, cfg);
  const std::vector<ripca::FitResult> b = ripca::fit_all(data, 2, cfg);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].objective == b[i].objective);  // bitwise
    CHECK(a[i].termination == b[i].termination);
    CHECK((a[i].basis.matrix() - b[i].basis.matrix()).norm() == 0.0);
  }
}

TEST_CASE("degenerate data and K = d are handled up front") {
  Eigen::MatrixXd collinear(3, 5);
  collinear << 1, 2, -1, 3, 0.5, 2, 4, -2, 6, 1, 0, 0, 0, 0, 0;
  CHECK_THROWS_AS(ripca::fit(ripca::dataset_from_columns(collinear), 2),
                  ripca::DegenerateData);

  const DataSet data = oracles::random_dataset(3, 12, 91);
  const ripca::FitResult full = ripca::fit(data, 3);
  CHECK(full.objective <= 1e-12);
  CHECK(full.termination == ripca::Termination::kGradZero);
  CHECK(ripca::critical_point_test(full.basis, data, 1e-8));
}

TEST_CASE("scheme agreement diagnostic is recorded") {
  const DataSet data = oracles::random_dataset(4, 16, 92);
  const ripca::FitResult result = ripca::fit(data, 2);
  REQUIRE(result.diagnostics.scheme_agreement.has_value());
  CHECK(*result.diagnostics.scheme_agreement <= 1e-8);
}

TEST_CASE("degenerate geometry raises the documented step errors") {
  // data on the e1 line, basis on e2: C_A A vanishes
  Eigen::MatrixXd Y(2, 3);
  Y << 1, -2, 3, 0, 0, 0;
  const DataSet data = ripca::dataset_from_columns(Y);
  const StiefelPoint e2(Eigen::MatrixXd{{0.0}, {1.0}});
  CHECK_THROWS_AS(ripca::ding_step(e2, data), ripca::RankDeficient);
  CHECK_THROWS_AS(ripca::preconditioned_step(e2, data),
                  ripca::SingularPrecondition);
}

TEST_CASE("solver configuration is validated") {
  const DataSet data = oracles::random_dataset(3, 9, 93);
  SolverConfig cfg;
  cfg.tol_grad = 0.0;
  CHECK_THROWS_AS(ripca::fit(data, 1, cfg), ripca::Error);
  cfg = SolverConfig{};
  cfg.restarts = -1;
  CHECK_THROWS_AS(ripca::fit(data, 1, cfg), ripca::Error);
  cfg = SolverConfig{};
  cfg.init = ripca::InitPolicy::kGiven;
  CHECK_THROWS_AS(ripca::fit(data, 1, cfg), ripca::Error);
  cfg = SolverConfig{};
  cfg.eps_smoothing = -1.0;
  CHECK_THROWS_AS(ripca::fit(data, 1, cfg), ripca::Error);
  CHECK_THROWS_AS(ripca::fit(data, 0, SolverConfig{}),
                  ripca::DimensionMismatch);
}

TEST_CASE("without outliers both models find the same line") {
  const DataSet data =
      ripca::center(ripca::gen_fig1(40, 0, 0.0, 11), ripca::CenterMode::kMean);
  const StiefelPoint pca = ripca::standard_pca(data, 1);
  const ripca::FitResult robust = ripca::fit(data, 1);
  CHECK(ripca::grassmann_distance(pca, robust.basis) <= 1e-6);
}

TEST_CASE("isotropic data leaves the leading subspace tied") {
  // eigenvalues tie at the K-th gap; a warning is emitted and some
  // valid basis is returned
  Eigen::MatrixXd Y(2, 2);
  Y << 1, 0, 0, 1;
  const StiefelPoint basis =
      ripca::standard_pca(ripca::dataset_from_columns(Y), 1);
  CHECK(basis.dim() == 2);
  CHECK(basis.k() == 1);
}
