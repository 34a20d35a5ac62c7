#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ripca/objective.hpp"

namespace ripca {

// Dead band for the certificate conditions: equalities must hold to
// cert_tol, strict inequalities must clear a cert_tol relative margin;
// values inside the band yield an inconclusive verdict rather than a
// guess.
inline constexpr double kCertTol = 1e-8;

// How the anchored points sit relative to each other.
enum class AnchorStructure {
  kSingleDirection,           // all anchored points are multiples of one vector
  kIndependentPlusMultiples,  // m independent columns, the rest multiples of one each
  kGeneral,                   // anything else; only the probe direction is checked
};

enum class AnchorVerdict { kStrictLocalMin, kNotMinimizer, kInconclusive };

const char* to_string(AnchorStructure s);
const char* to_string(AnchorVerdict v);

struct ConditionValue {
  std::string name;
  double value;
};

// Result of the optimality analysis at an anchor point.
struct AnchorReport {
  // Anchored nonzero points, independent columns first (the order the
  // certificate conditions use); indices[j] is the dataset index of
  // column j of anchored_points.
  std::vector<int> indices;
  Eigen::MatrixXd anchored_points;   // their columns, d x kappa
  int rank = 0;                      // numerical rank of anchored_points
  AnchorStructure structure = AnchorStructure::kGeneral;
  Eigen::MatrixXd multipliers;       // m x (kappa - m); empty unless multiples structure
  Eigen::MatrixXd off_anchor_scatter;  // sum over non-anchored y_i y_i^T / ||P_perp y_i||
  AnchorVerdict verdict = AnchorVerdict::kInconclusive;
  std::optional<TangentVector> descent;  // certified when verdict == kNotMinimizer
  double descent_derivative =
      std::numeric_limits<double>::quiet_NaN();  // one-sided derivative along descent
  std::vector<ConditionValue> conditions;        // every tested quantity, by name
};

// Sum of column Euclidean norms.
double norm_2_1(const Eigen::MatrixXd& B);
// Maximum column Euclidean norm (the dual norm of norm_2_1).
double norm_2_inf(const Eigen::MatrixXd& B);

// One-sided directional derivative of the objective at A along a
// horizontal direction H: -<H, C_K A> + sum over anchored k of
// ||H A^T y_k||. Valid at anchor points; at non-anchor points it reduces
// to the smooth directional derivative <riemannian_gradient, H>. Throws
// NotHorizontal when A^T H is nonzero beyond tolerance.
double one_sided_derivative(const StiefelPoint& A, const Eigen::MatrixXd& H,
                            const DataSet& data,
                            double anchor_tol = kAnchorTol);

// The probe direction H = P_perp C_K A. Returned when
// ||H||^2 > sum over anchored k of ||P_perp C_K y_k|| with margin, in
// which case the one-sided derivative along H is negative. Throws
// NotAnAnchor when no nonzero point is anchored.
std::optional<TangentVector> anchor_descent_direction(
    const StiefelPoint& A, const DataSet& data, double anchor_tol = kAnchorTol,
    double cert_tol = kCertTol);

// Decides whether the anchor point A is a strict local minimizer (as a
// subspace). The structured cases use the exact dichotomy conditions;
// a not_minimizer verdict always carries a direction whose one-sided
// derivative was verified negative. Throws NotAnAnchor when no nonzero
// point is anchored.
AnchorReport certify_anchor(const StiefelPoint& A, const DataSet& data,
                            double anchor_tol = kAnchorTol,
                            double cert_tol = kCertTol);

}  // namespace ripca
