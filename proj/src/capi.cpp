#include "ripca/ripca.h"

#include <cstring>
#include <memory>
#include <string>

#include "ripca/anchor.hpp"
#include "ripca/data.hpp"
#include "ripca/solver.hpp"

struct ripca_dataset {
  ripca::DataSet data;
};

struct ripca_fit_result {
  std::vector<ripca::FitResult> runs;
  int best = 0;
  int d = 0;
  int k = 0;
};

struct ripca_certify_report {
  int d = 0;
  int k = 0;
  Eigen::MatrixXd basis;  // after polar projection
  double objective = 0.0;
  double min_residual = 0.0;
  ripca_verdict verdict = RIPCA_VERDICT_SMOOTH_POINT;
  std::vector<int> indices;
  ripca_anchor_structure structure = RIPCA_STRUCTURE_GENERAL;
  int rank = 0;
  std::vector<ripca::ConditionValue> conditions;
  std::optional<Eigen::MatrixXd> descent;
  double descent_derivative = std::numeric_limits<double>::quiet_NaN();
  bool critical = false;
  double grad_rel = std::numeric_limits<double>::quiet_NaN();
};

namespace {

thread_local std::string g_last_error;

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;

Eigen::MatrixXd from_row_major(const double* p, int rows, int cols) {
  return RowMajorMap(p, rows, cols);
}

void to_row_major(const Eigen::MatrixXd& m, double* out) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out[i * m.cols() + j] = m(i, j);
    }
  }
}

ripca_status classify(const std::exception& e) {
  using namespace ripca;
  if (dynamic_cast<const ParseError*>(&e)) return RIPCA_ERR_PARSE;
  if (dynamic_cast<const EmptyFile*>(&e)) return RIPCA_ERR_EMPTY_FILE;
  if (dynamic_cast<const DimensionMismatch*>(&e))
    return RIPCA_ERR_DIMENSION_MISMATCH;
  if (dynamic_cast<const RankDeficient*>(&e)) return RIPCA_ERR_RANK_DEFICIENT;
  if (dynamic_cast<const DegenerateData*>(&e))
    return RIPCA_ERR_DEGENERATE_DATA;
  if (dynamic_cast<const AtAnchor*>(&e)) return RIPCA_ERR_AT_ANCHOR;
  if (dynamic_cast<const NotAnAnchor*>(&e)) return RIPCA_ERR_NOT_ANCHOR;
  if (dynamic_cast<const NotHorizontal*>(&e)) return RIPCA_ERR_NOT_HORIZONTAL;
  if (dynamic_cast<const SingularPrecondition*>(&e))
    return RIPCA_ERR_SINGULAR_PRECONDITION;
  if (dynamic_cast<const NegativeRadicand*>(&e))
    return RIPCA_ERR_NEGATIVE_RADICAND;
  if (dynamic_cast<const Error*>(&e)) return RIPCA_ERR_INVALID_ARG;
  return RIPCA_ERR_INTERNAL;
}

template <typename Fn>
ripca_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return classify(e);
  } catch (...) {
    g_last_error = "unknown error";
    return RIPCA_ERR_INTERNAL;
  }
}

ripca_status fail(ripca_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

ripca::CenterMode center_mode_from_int(int mode) {
  switch (mode) {
    case RIPCA_CENTER_NONE: return ripca::CenterMode::kNone;
    case RIPCA_CENTER_MEAN: return ripca::CenterMode::kMean;
    case RIPCA_CENTER_GEOMETRIC_MEDIAN:
      return ripca::CenterMode::kGeometricMedian;
  }
  throw ripca::Error("invalid center mode");
}

ripca_status finish_dataset(ripca::DataSet data, ripca_dataset** out) {
  *out = new ripca_dataset{std::move(data)};
  return RIPCA_OK;
}

std::unique_ptr<ripca_certify_report> report_from_anchor(
    const ripca::StiefelPoint& A, const ripca::DataSet& data,
    const ripca::AnchorStatus& status, const ripca::AnchorReport& rep) {
  auto out = std::make_unique<ripca_certify_report>();
  out->d = static_cast<int>(A.dim());
  out->k = static_cast<int>(A.k());
  out->basis = A.matrix();
  out->objective = ripca::objective_value(A, data);
  out->min_residual = status.min_residual;
  switch (rep.verdict) {
    case ripca::AnchorVerdict::kStrictLocalMin:
      out->verdict = RIPCA_VERDICT_STRICT_LOCAL_MIN;
      break;
    case ripca::AnchorVerdict::kNotMinimizer:
      out->verdict = RIPCA_VERDICT_NOT_MINIMIZER;
      break;
    case ripca::AnchorVerdict::kInconclusive:
      out->verdict = RIPCA_VERDICT_INCONCLUSIVE;
      break;
  }
  out->indices = rep.indices;
  switch (rep.structure) {
    case ripca::AnchorStructure::kSingleDirection:
      out->structure = RIPCA_STRUCTURE_SINGLE_DIRECTION;
      break;
    case ripca::AnchorStructure::kIndependentPlusMultiples:
      out->structure = RIPCA_STRUCTURE_INDEPENDENT_PLUS_MULTIPLES;
      break;
    case ripca::AnchorStructure::kGeneral:
      out->structure = RIPCA_STRUCTURE_GENERAL;
      break;
  }
  out->rank = rep.rank;
  out->conditions = rep.conditions;
  if (rep.descent.has_value()) out->descent = rep.descent->matrix();
  out->descent_derivative = rep.descent_derivative;
  return out;
}

}  // namespace

const char* ripca_version(void) { return "1.0.0"; }

const char* ripca_status_name(ripca_status s) {
  switch (s) {
    case RIPCA_OK: return "ok";
    case RIPCA_ERR_INVALID_ARG: return "invalid_arg";
    case RIPCA_ERR_PARSE: return "parse_error";
    case RIPCA_ERR_EMPTY_FILE: return "empty_file";
    case RIPCA_ERR_IO: return "io_error";
    case RIPCA_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case RIPCA_ERR_RANK_DEFICIENT: return "rank_deficient";
    case RIPCA_ERR_DEGENERATE_DATA: return "degenerate_data";
    case RIPCA_ERR_AT_ANCHOR: return "at_anchor";
    case RIPCA_ERR_NOT_ANCHOR: return "not_an_anchor";
    case RIPCA_ERR_NOT_HORIZONTAL: return "not_horizontal";
    case RIPCA_ERR_SINGULAR_PRECONDITION: return "singular_precondition";
    case RIPCA_ERR_NEGATIVE_RADICAND: return "negative_radicand";
    case RIPCA_ERR_INTERNAL: return "internal";
  }
  return "?";
}

const char* ripca_last_error(void) { return g_last_error.c_str(); }

void ripca_config_init(ripca_config* cfg) {
  cfg->max_iter = 1000;
  cfg->tol_step = 1e-10;
  cfg->tol_grad = 1e-8;
  cfg->anchor_tol = ripca::kAnchorTol;
  cfg->cert_tol = ripca::kCertTol;
  cfg->scheme = RIPCA_SCHEME_DING;
  cfg->init = RIPCA_INIT_STANDARD_PCA;
  cfg->init_basis = nullptr;
  cfg->restarts = 0;
  cfg->seed = 0;
  cfg->eps_smoothing = 0.0;
}

ripca_status ripca_dataset_from_csv(const char* path, int center_mode,
                                    ripca_dataset** out) {
  if (!path || !out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    ripca::RawPointCloud cloud = ripca::load_csv(path);
    return finish_dataset(ripca::center(cloud, center_mode_from_int(center_mode)),
                          out);
  });
}

ripca_status ripca_dataset_from_points(const double* points, int n, int d,
                                       int center_mode, ripca_dataset** out) {
  if (!points || !out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  if (n < 1 || d < 1) {
    return fail(RIPCA_ERR_INVALID_ARG, "need n >= 1 and d >= 1");
  }
  return guarded([&] {
    ripca::RawPointCloud cloud;
    cloud.points = from_row_major(points, n, d);
    cloud.source = "buffer";
    return finish_dataset(ripca::center(cloud, center_mode_from_int(center_mode)),
                          out);
  });
}

ripca_status ripca_dataset_gen_fig1(int n_inliers, int n_outliers,
                                    double noise, uint64_t seed,
                                    int center_mode, ripca_dataset** out) {
  if (!out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    ripca::RawPointCloud cloud =
        ripca::gen_fig1(n_inliers, n_outliers, noise, seed);
    return finish_dataset(ripca::center(cloud, center_mode_from_int(center_mode)),
                          out);
  });
}

ripca_status ripca_dataset_gen_fig2(int center_mode, ripca_dataset** out) {
  if (!out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    return finish_dataset(
        ripca::center(ripca::gen_fig2(), center_mode_from_int(center_mode)),
        out);
  });
}

ripca_status ripca_dataset_gen_counterexample(int center_mode,
                                              ripca_dataset** out) {
  if (!out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    return finish_dataset(ripca::center(ripca::gen_counterexample(),
                                        center_mode_from_int(center_mode)),
                          out);
  });
}

void ripca_dataset_free(ripca_dataset* ds) { delete ds; }

int ripca_dataset_dim(const ripca_dataset* ds) {
  return static_cast<int>(ds->data.dim());
}

int ripca_dataset_size(const ripca_dataset* ds) {
  return static_cast<int>(ds->data.size());
}

int ripca_dataset_zero_points(const ripca_dataset* ds) {
  return static_cast<int>(ds->data.zero_count());
}

int ripca_dataset_center_mode(const ripca_dataset* ds) {
  switch (ds->data.centering_mode()) {
    case ripca::CenterMode::kNone: return RIPCA_CENTER_NONE;
    case ripca::CenterMode::kMean: return RIPCA_CENTER_MEAN;
    case ripca::CenterMode::kGeometricMedian:
      return RIPCA_CENTER_GEOMETRIC_MEDIAN;
  }
  return RIPCA_CENTER_NONE;
}

void ripca_dataset_offset(const ripca_dataset* ds, double* out) {
  for (Eigen::Index i = 0; i < ds->data.dim(); ++i) {
    out[i] = ds->data.offset()(i);
  }
}

void ripca_fig1_true_direction(double* out) {
  const Eigen::Vector2d u = ripca::fig1_true_direction();
  out[0] = u(0);
  out[1] = u(1);
}

ripca_status ripca_objective_value(const ripca_dataset* ds,
                                   const double* basis, int k, double* out) {
  if (!ds || !basis || !out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const ripca::StiefelPoint A(
        from_row_major(basis, static_cast<int>(ds->data.dim()), k));
    *out = ripca::objective_value(A, ds->data);
    return RIPCA_OK;
  });
}

ripca_status ripca_grassmann_distance(int d, int k, const double* basis1,
                                      const double* basis2, double* out) {
  if (!basis1 || !basis2 || !out) {
    return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  }
  return guarded([&] {
    const ripca::StiefelPoint A1(from_row_major(basis1, d, k));
    const ripca::StiefelPoint A2(from_row_major(basis2, d, k));
    *out = ripca::grassmann_distance(A1, A2);
    return RIPCA_OK;
  });
}

ripca_status ripca_subspace_residual(int d, int k, const double* basis,
                                     const double* v, double* out) {
  if (!basis || !v || !out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const ripca::StiefelPoint A(from_row_major(basis, d, k));
    Eigen::VectorXd vec(d);
    for (int i = 0; i < d; ++i) vec(i) = v[i];
    *out = ripca::residual_project(A, vec).norm();
    return RIPCA_OK;
  });
}

ripca_status ripca_polar_project(int d, int k, const double* m, double* out) {
  if (!m || !out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const ripca::StiefelPoint A = ripca::polar_project(from_row_major(m, d, k));
    to_row_major(A.matrix(), out);
    return RIPCA_OK;
  });
}

ripca_status ripca_standard_pca(const ripca_dataset* ds, int k,
                                double* out_basis) {
  if (!ds || !out_basis) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    to_row_major(ripca::standard_pca(ds->data, k).matrix(), out_basis);
    return RIPCA_OK;
  });
}

ripca_status ripca_fit(const ripca_dataset* ds, int k,
                       const ripca_config* cfg, ripca_fit_result** out) {
  if (!ds || !cfg || !out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    ripca::SolverConfig sc;
    sc.max_iter = cfg->max_iter;
    sc.tol_step = cfg->tol_step;
    sc.tol_grad = cfg->tol_grad;
    sc.anchor_tol = cfg->anchor_tol;
    sc.cert_tol = cfg->cert_tol;
    switch (cfg->scheme) {
      case RIPCA_SCHEME_DING: sc.scheme = ripca::Scheme::kDing; break;
      case RIPCA_SCHEME_PRECONDITIONED:
        sc.scheme = ripca::Scheme::kPreconditioned;
        break;
      default: throw ripca::Error("invalid scheme");
    }
    switch (cfg->init) {
      case RIPCA_INIT_STANDARD_PCA:
        sc.init = ripca::InitPolicy::kStandardPca;
        break;
      case RIPCA_INIT_RANDOM: sc.init = ripca::InitPolicy::kRandom; break;
      case RIPCA_INIT_GIVEN: {
        sc.init = ripca::InitPolicy::kGiven;
        if (!cfg->init_basis) throw ripca::Error("init_basis is null");
        sc.init_basis =
            from_row_major(cfg->init_basis, static_cast<int>(ds->data.dim()), k);
        break;
      }
      default: throw ripca::Error("invalid init policy");
    }
    sc.restarts = cfg->restarts;
    sc.seed = cfg->seed;
    if (cfg->eps_smoothing > 0.0) sc.eps_smoothing = cfg->eps_smoothing;

    auto res = std::make_unique<ripca_fit_result>();
    res->runs = ripca::fit_all(ds->data, k, sc);
    res->d = static_cast<int>(ds->data.dim());
    res->k = k;
    res->best = 0;
    for (size_t i = 1; i < res->runs.size(); ++i) {
      if (res->runs[i].objective < res->runs[res->best].objective) {
        res->best = static_cast<int>(i);
      }
    }
    *out = res.release();
    return RIPCA_OK;
  });
}

void ripca_fit_result_free(ripca_fit_result* res) { delete res; }

int ripca_fit_num_runs(const ripca_fit_result* res) {
  return static_cast<int>(res->runs.size());
}

int ripca_fit_best_run(const ripca_fit_result* res) { return res->best; }

double ripca_fit_run_objective(const ripca_fit_result* res, int run) {
  return res->runs[static_cast<size_t>(run)].objective;
}

int ripca_fit_run_termination(const ripca_fit_result* res, int run) {
  switch (res->runs[static_cast<size_t>(run)].termination) {
    case ripca::Termination::kGradZero: return RIPCA_TERM_GRAD_ZERO;
    case ripca::Termination::kStepSmall: return RIPCA_TERM_STEP_SMALL;
    case ripca::Termination::kMaxIter: return RIPCA_TERM_MAX_ITER;
    case ripca::Termination::kHitAnchor: return RIPCA_TERM_HIT_ANCHOR;
    case ripca::Termination::kAnchorDescentExhausted:
      return RIPCA_TERM_ANCHOR_DESCENT_EXHAUSTED;
  }
  return RIPCA_TERM_MAX_ITER;
}

int ripca_fit_run_iterations(const ripca_fit_result* res, int run) {
  return static_cast<int>(res->runs[static_cast<size_t>(run)].trace.size());
}

void ripca_fit_run_basis(const ripca_fit_result* res, int run, double* out) {
  to_row_major(res->runs[static_cast<size_t>(run)].basis.matrix(), out);
}

int ripca_fit_run_trace_length(const ripca_fit_result* res, int run) {
  return static_cast<int>(res->runs[static_cast<size_t>(run)].trace.size());
}

void ripca_fit_run_trace_row(const ripca_fit_result* res, int run, int i,
                             double* out) {
  const ripca::IterationRecord& rec =
      res->runs[static_cast<size_t>(run)].trace[static_cast<size_t>(i)];
  out[0] = static_cast<double>(rec.r);
  out[1] = rec.objective;
  out[2] = rec.step_norm;
  out[3] = rec.grad_norm;
  out[4] = rec.min_residual;
  out[5] = rec.decrease_ratio;
}

double ripca_fit_run_min_decrease_ratio(const ripca_fit_result* res, int run) {
  return res->runs[static_cast<size_t>(run)].diagnostics.min_decrease_ratio;
}

double ripca_fit_run_scheme_agreement(const ripca_fit_result* res, int run) {
  const auto& v = res->runs[static_cast<size_t>(run)].diagnostics.scheme_agreement;
  return v.has_value() ? *v : std::numeric_limits<double>::quiet_NaN();
}

double ripca_fit_run_final_grad_rel(const ripca_fit_result* res, int run) {
  return res->runs[static_cast<size_t>(run)].diagnostics.final_grad_rel;
}

int ripca_fit_run_has_anchor_report(const ripca_fit_result* res, int run) {
  return res->runs[static_cast<size_t>(run)].anchor_report.has_value() ? 1 : 0;
}

ripca_status ripca_fit_run_anchor_report(const ripca_fit_result* res, int run,
                                         ripca_certify_report** out) {
  if (!res || !out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  const ripca::FitResult& fr = res->runs[static_cast<size_t>(run)];
  if (!fr.anchor_report.has_value()) {
    return fail(RIPCA_ERR_NOT_ANCHOR, "run has no anchor report");
  }
  auto rep = std::make_unique<ripca_certify_report>();
  rep->d = res->d;
  rep->k = res->k;
  rep->basis = fr.basis.matrix();
  rep->objective = fr.objective;
  rep->min_residual = 0.0;
  const ripca::AnchorReport& ar = *fr.anchor_report;
  switch (ar.verdict) {
    case ripca::AnchorVerdict::kStrictLocalMin:
      rep->verdict = RIPCA_VERDICT_STRICT_LOCAL_MIN;
      break;
    case ripca::AnchorVerdict::kNotMinimizer:
      rep->verdict = RIPCA_VERDICT_NOT_MINIMIZER;
      break;
    case ripca::AnchorVerdict::kInconclusive:
      rep->verdict = RIPCA_VERDICT_INCONCLUSIVE;
      break;
  }
  rep->indices = ar.indices;
  switch (ar.structure) {
    case ripca::AnchorStructure::kSingleDirection:
      rep->structure = RIPCA_STRUCTURE_SINGLE_DIRECTION;
      break;
    case ripca::AnchorStructure::kIndependentPlusMultiples:
      rep->structure = RIPCA_STRUCTURE_INDEPENDENT_PLUS_MULTIPLES;
      break;
    case ripca::AnchorStructure::kGeneral:
      rep->structure = RIPCA_STRUCTURE_GENERAL;
      break;
  }
  rep->rank = ar.rank;
  rep->conditions = ar.conditions;
  if (ar.descent.has_value()) rep->descent = ar.descent->matrix();
  rep->descent_derivative = ar.descent_derivative;
  *out = rep.release();
  return RIPCA_OK;
}

ripca_status ripca_certify(const ripca_dataset* ds, const double* basis,
                           int k, double anchor_tol, double cert_tol,
                           ripca_certify_report** out) {
  if (!ds || !basis || !out) return fail(RIPCA_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const int d = static_cast<int>(ds->data.dim());
    const ripca::StiefelPoint A =
        ripca::polar_project(from_row_major(basis, d, k));
    const ripca::AnchorStatus status =
        ripca::anchor_status(A, ds->data, anchor_tol);
    if (!status.has_nonzero_anchor) {
      auto rep = std::make_unique<ripca_certify_report>();
      rep->d = d;
      rep->k = k;
      rep->basis = A.matrix();
      rep->objective = ripca::objective_value(A, ds->data);
      rep->min_residual = status.min_residual;
      rep->verdict = RIPCA_VERDICT_SMOOTH_POINT;
      rep->indices = status.indices;  // zero points only, if any
      if (k == d) {
        rep->critical = true;
        rep->grad_rel = 0.0;
      } else {
        const ripca::GradientBundle b =
            ripca::gradients(A, ds->data, anchor_tol);
        const double scale = b.ambient_gradient.norm();
        rep->grad_rel =
            scale > 0.0 ? b.riemannian_gradient.norm() / scale : 0.0;
        rep->critical = rep->grad_rel <= cert_tol;
      }
      *out = rep.release();
      return RIPCA_OK;
    }
    const ripca::AnchorReport ar =
        ripca::certify_anchor(A, ds->data, anchor_tol, cert_tol);
    *out = report_from_anchor(A, ds->data, status, ar).release();
    return RIPCA_OK;
  });
}

void ripca_certify_report_free(ripca_certify_report* rep) { delete rep; }

int ripca_certify_verdict(const ripca_certify_report* rep) {
  return rep->verdict;
}

int ripca_certify_anchor_count(const ripca_certify_report* rep) {
  return static_cast<int>(rep->indices.size());
}

void ripca_certify_anchor_indices(const ripca_certify_report* rep, int* out) {
  for (size_t i = 0; i < rep->indices.size(); ++i) out[i] = rep->indices[i];
}

int ripca_certify_structure(const ripca_certify_report* rep) {
  return rep->structure;
}

int ripca_certify_rank(const ripca_certify_report* rep) { return rep->rank; }

double ripca_certify_min_residual(const ripca_certify_report* rep) {
  return rep->min_residual;
}

double ripca_certify_objective(const ripca_certify_report* rep) {
  return rep->objective;
}

void ripca_certify_basis(const ripca_certify_report* rep, double* out) {
  to_row_major(rep->basis, out);
}

int ripca_certify_num_conditions(const ripca_certify_report* rep) {
  return static_cast<int>(rep->conditions.size());
}

const char* ripca_certify_condition_name(const ripca_certify_report* rep,
                                         int i) {
  return rep->conditions[static_cast<size_t>(i)].name.c_str();
}

double ripca_certify_condition_value(const ripca_certify_report* rep, int i) {
  return rep->conditions[static_cast<size_t>(i)].value;
}

int ripca_certify_has_descent(const ripca_certify_report* rep) {
  return rep->descent.has_value() ? 1 : 0;
}

void ripca_certify_descent_direction(const ripca_certify_report* rep,
                                     double* out) {
  if (rep->descent.has_value()) to_row_major(*rep->descent, out);
}

double ripca_certify_descent_derivative(const ripca_certify_report* rep) {
  return rep->descent_derivative;
}

int ripca_certify_critical(const ripca_certify_report* rep) {
  return rep->critical ? 1 : 0;
}

double ripca_certify_grad_rel(const ripca_certify_report* rep) {
  return rep->grad_rel;
}
