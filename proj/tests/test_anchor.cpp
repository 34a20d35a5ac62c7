#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ripca/anchor.hpp"
#include "ripca/solver.hpp"

using ripca::AnchorStructure;
using ripca::AnchorVerdict;
using ripca::DataSet;
using ripca::StiefelPoint;

namespace {

DataSet cross_data() {
  Eigen::MatrixXd Y(2, 2);
  Y << 1, 0, 0, 1;
  return ripca::dataset_from_columns(Y);
}

// y1 = (1,0), y2 = y3 = beta * (1/sqrt2, 1/sqrt2)
DataSet spike_data(double beta = 1.0) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd Y(2, 3);
  Y << 1, beta * s, beta * s, 0, beta * s, beta * s;
  return ripca::dataset_from_columns(Y);
}

StiefelPoint e1_line() { return StiefelPoint(Eigen::MatrixXd{{1.0}, {0.0}}); }

}  // namespace

TEST_CASE("column norms") {
  CHECK(ripca::norm_2_1(Eigen::MatrixXd::Identity(2, 2)) ==
        doctest::Approx(2.0));
  CHECK(ripca::norm_2_inf(Eigen::MatrixXd::Identity(2, 2)) ==
        doctest::Approx(1.0));
  Eigen::MatrixXd B(2, 2);
  B << 3, 0, 4, 0;
  CHECK(ripca::norm_2_1(B) == doctest::Approx(5.0));
  CHECK(ripca::norm_2_inf(B) == doctest::Approx(5.0));
}

TEST_CASE("the max column norm is the dual of the summed column norm") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 5; ++t) {
    Eigen::MatrixXd B(3, 2);
    for (Eigen::Index i = 0; i < B.size(); ++i) B(i) = gauss(rng);
    const double dual = ripca::norm_2_inf(B);
    const double mc = oracles::mc_dual_norm(B, 1000, 900 + t);
    CHECK(mc <= dual * (1.0 + 1e-12));
    CHECK(mc >= 0.98 * dual);
  }
}

TEST_CASE("one-sided derivative at an anchor point") {
  const DataSet data = cross_data();
  const StiefelPoint A = e1_line();
  Eigen::MatrixXd up(2, 1), down(2, 1);
  up << 0, 1;
  down << 0, -1;
  CHECK(ripca::one_sided_derivative(A, up, data) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ripca::one_sided_derivative(A, down, data) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // positive homogeneity
  CHECK(ripca::one_sided_derivative(A, 3.5 * up, data) ==
        doctest::Approx(3.5).epsilon(1e-12));
  // vertical directions are rejected
  CHECK_THROWS_AS(ripca::one_sided_derivative(A, A.matrix(), data),
                  ripca::NotHorizontal);
}

TEST_CASE("one-sided derivative reduces to the smooth derivative off anchors") {
  const DataSet data = cross_data();
  Eigen::MatrixXd Am(2, 1);
  const double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
  Am << c, s;
  const StiefelPoint A(Am);
  Eigen::MatrixXd H(2, 1);
  H << -s, c;
  CHECK(std::abs(ripca::one_sided_derivative(A, H, data)) <= 1e-10);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (std::uint64_t t = 0; t < 15; ++t) {
    const Eigen::Index d = 4 + static_cast<Eigen::Index>(t % 3);
    const DataSet rnd = oracles::random_dataset(d, 3 * d, 60 + t);
    const StiefelPoint B = ripca::random_stiefel(d, 2, 70 + t);
    const ripca::GradientBundle gb = ripca::gradients(B, rnd);
    Eigen::MatrixXd X(d, 2);
    for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = gauss(rng);
    const Eigen::MatrixXd Hb =
        X - B.matrix() * (B.matrix().transpose() * X);
    const double osd = ripca::one_sided_derivative(B, Hb, rnd);
    const double smooth = (gb.riemannian_gradient.array() * Hb.array()).sum();
    CHECK(std::abs(osd - smooth) <= 1e-10 * std::max(1.0, std::abs(smooth)));
  }
}

TEST_CASE("descent probe on the spike dataset") {
  const DataSet data = spike_data();
  const StiefelPoint A = e1_line();
  const auto H = ripca::anchor_descent_direction(A, data);
  REQUIRE(H.has_value());
  Eigen::MatrixXd expected(2, 1);
  expected << 0, std::sqrt(2.0);
  CHECK((H->matrix() - expected).norm() <= 1e-12);
  CHECK(ripca::one_sided_derivative(A, H->matrix(), data) ==
        doctest::Approx(-2.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("descent probe returns nothing at certified minima") {
  CHECK_FALSE(
      ripca::anchor_descent_direction(e1_line(), cross_data()).has_value());

  // all points anchored: the probe direction vanishes
  Eigen::MatrixXd Y(2, 1);
  Y << 1, 0;
  const DataSet single = ripca::dataset_from_columns(Y);
  CHECK_FALSE(ripca::anchor_descent_direction(e1_line(), single).has_value());

  Eigen::MatrixXd Am(2, 1);
  Am << std::cos(0.7), std::sin(0.7);
  CHECK_THROWS_AS(
      ripca::anchor_descent_direction(StiefelPoint(Am), cross_data()),
      ripca::NotAnAnchor);
}

TEST_CASE("certification of the cross dataset at e1") {
  const ripca::AnchorReport rep = ripca::certify_anchor(e1_line(), cross_data());
  CHECK(rep.verdict == AnchorVerdict::kStrictLocalMin);
  CHECK(rep.structure == AnchorStructure::kSingleDirection);
  CHECK(rep.rank == 1);
  REQUIRE(rep.indices.size() == 1);
  CHECK(rep.indices[0] == 0);

  double lhs = -1.0, rhs = -1.0, resid = -1.0;
  for (const auto& cv : rep.conditions) {
    if (cv.name == "cond1_lhs") lhs = cv.value;
    if (cv.name == "cond1_rhs") rhs = cv.value;
    if (cv.name == "cond2_residual") resid = cv.value;
  }
  CHECK(lhs == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(resid <= 1e-12);
}

TEST_CASE("certification of the spike dataset at e1") {
  const ripca::AnchorReport rep =
      ripca::certify_anchor(e1_line(), spike_data());
  CHECK(rep.verdict == AnchorVerdict::kNotMinimizer);
  REQUIRE(rep.descent.has_value());
  CHECK(rep.descent_derivative ==
        doctest::Approx(-2.0 + std::sqrt(2.0)).epsilon(1e-10));

  // a backtracking step along the certified direction decreases E
  const DataSet data = spike_data();
  const double E0 = ripca::objective_value(e1_line(), data);
  double alpha = 1.0;
  bool decreased = false;
  for (int t = 0; t < 50 && !decreased; ++t) {
    const StiefelPoint cand = ripca::polar_project(
        e1_line().matrix() + alpha * rep.descent->matrix());
    if (ripca::objective_value(cand, data) < E0) decreased = true;
    alpha *= 0.5;
  }
  CHECK(decreased);
}

TEST_CASE("certification errors and degenerate cases") {
  Eigen::MatrixXd Am(2, 1);
  Am << std::cos(0.7), std::sin(0.7);
  CHECK_THROWS_AS(ripca::certify_anchor(StiefelPoint(Am), cross_data()),
                  ripca::NotAnAnchor);

  // all points anchored and spanning the subspace: global minimum
  Eigen::MatrixXd Y(3, 2);
  Y << 1, 0, 0, 1, 0, 0;
  const DataSet span2 = ripca::dataset_from_columns(Y);
  const StiefelPoint A(Eigen::MatrixXd{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}});
  const ripca::AnchorReport rep = ripca::certify_anchor(A, span2);
  CHECK(rep.verdict == AnchorVerdict::kStrictLocalMin);
  CHECK(ripca::objective_value(A, span2) <= 1e-14);

  // all anchored with general structure, still spanning the subspace
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd Y3(3, 3);
  Y3 << 1, 0, s, 0, 1, -s, 0, 0, 0;
  const ripca::AnchorReport rep3 =
      ripca::certify_anchor(A, ripca::dataset_from_columns(Y3));
  CHECK(rep3.structure == AnchorStructure::kGeneral);
  CHECK(rep3.verdict == AnchorVerdict::kStrictLocalMin);

  // anchored points do not fill the subspace: flat directions remain
  Eigen::MatrixXd Y1(3, 1);
  Y1 << 1, 0, 0;
  const ripca::AnchorReport rep1 =
      ripca::certify_anchor(A, ripca::dataset_from_columns(Y1));
  CHECK(rep1.verdict == AnchorVerdict::kInconclusive);
}

TEST_CASE("multiples structure with independent anchored directions") {
  // anchored: e1, -2 e1, e2 (rank 2 = K); off-anchor mass far away
  Eigen::MatrixXd Y(3, 4);
  Y << 1, -2, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0.8;
  const DataSet data = ripca::dataset_from_columns(Y);
  const StiefelPoint A(Eigen::MatrixXd{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}});
  const ripca::AnchorReport rep = ripca::certify_anchor(A, data);
  CHECK(rep.structure == AnchorStructure::kIndependentPlusMultiples);
  CHECK(rep.rank == 2);
  REQUIRE(rep.indices.size() == 3);
  // independent columns come first
  CHECK(rep.indices[0] == 0);
  CHECK(rep.indices[1] == 2);
  CHECK(rep.indices[2] == 1);
  CHECK(rep.multipliers.rows() == 2);
  CHECK(rep.multipliers.cols() == 1);
  CHECK(rep.multipliers(0, 0) == doctest::Approx(-2.0).epsilon(1e-10));
  // the off-anchor point is orthogonal to the plane: strict minimum
  CHECK(rep.verdict == AnchorVerdict::kStrictLocalMin);
}

TEST_CASE("certificate conditions flip when the off-anchor cloud is scaled") {
  // small beta: strict local min at e1; large beta: descent exists
  const DataSet small = spike_data(0.5);
  const ripca::AnchorReport rep_small =
      ripca::certify_anchor(e1_line(), small);
  CHECK(rep_small.verdict == AnchorVerdict::kStrictLocalMin);

  const DataSet large = spike_data(1.5);
  const ripca::AnchorReport rep_large =
      ripca::certify_anchor(e1_line(), large);
  CHECK(rep_large.verdict == AnchorVerdict::kNotMinimizer);
  REQUIRE(rep_large.descent.has_value());
  CHECK(ripca::one_sided_derivative(e1_line(), rep_large.descent->matrix(),
                                    large) < 0.0);
}

TEST_CASE("sampled first-order dominance corroborates the verdicts") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss;
  const double t_step = 1e-4;

  auto sample_min_increase = [&](const StiefelPoint& A, const DataSet& data,
                                 int samples) {
    const double E0 = ripca::objective_value(A, data);
    double min_delta = std::numeric_limits<double>::infinity();
    for (int t = 0; t < samples; ++t) {
      Eigen::MatrixXd X(A.dim(), A.k());
      for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = gauss(rng);
      Eigen::MatrixXd H = X - A.matrix() * (A.matrix().transpose() * X);
      const double n = H.norm();
      if (n < 1e-12) continue;
      H /= n;
      const StiefelPoint cand =
          ripca::polar_project(A.matrix() + t_step * H);
      min_delta = std::min(min_delta, ripca::objective_value(cand, data) - E0);
    }
    return min_delta;
  };

  // strict minimizers: every sampled direction increases the objective
  CHECK(sample_min_increase(e1_line(), cross_data(), 500) > -1e-12);
  CHECK(sample_min_increase(e1_line(), spike_data(0.5), 500) > -1e-12);
  // flipped condition: some sampled direction decreases it
  CHECK(sample_min_increase(e1_line(), spike_data(1.5), 500) < 0.0);
}
