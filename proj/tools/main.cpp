// Command-line front end for the ripca shared library. Talks to the
// library exclusively through the C API in ripca/ripca.h.

#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ripca/ripca.h"

namespace {

constexpr int kExitData = 2;
constexpr int kExitSolver = 3;
constexpr int kExitBasis = 4;

int exit_code_for(ripca_status s) {
  switch (s) {
    case RIPCA_OK:
      return 0;
    case RIPCA_ERR_INVALID_ARG:
    case RIPCA_ERR_PARSE:
    case RIPCA_ERR_EMPTY_FILE:
    case RIPCA_ERR_IO:
    case RIPCA_ERR_DIMENSION_MISMATCH:
      return kExitData;
    default:
      return kExitSolver;
  }
}

[[noreturn]] void die(ripca_status s, const std::string& context) {
  std::cerr << "ripca: " << context << ": " << ripca_status_name(s);
  const char* msg = ripca_last_error();
  if (msg && msg[0]) std::cerr << " (" << msg << ")";
  std::cerr << "\n";
  std::exit(exit_code_for(s));
}

std::string fmt(double v, const char* format = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string fmt_cfg(double v) { return fmt(v, "%.12g"); }

std::string vec_str(const std::vector<double>& v, const char* format = "%.17g") {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i], format);
  }
  out += "]";
  return out;
}

struct DataFlags {
  std::string input;
  std::string generate;
  std::string center;  // "", "mean", "median", "none"
  int fig1_inliers = 50;
  int fig1_outliers = 2;
  double fig1_noise = 0.02;
};

void add_data_flags(CLI::App* cmd, DataFlags* flags) {
  auto* in = cmd->add_option("--input", flags->input, "CSV file, one point per row");
  auto* gen = cmd->add_option("--generate", flags->generate,
                              "named dataset: fig1 | fig2 | counterexample")
                  ->check(CLI::IsMember({"fig1", "fig2", "counterexample"}));
  in->excludes(gen);
  gen->excludes(in);
  cmd->add_option("--center", flags->center,
                  "offset subtracted from the points (default: mean for "
                  "--input and fig1, none for fig2/counterexample)")
      ->check(CLI::IsMember({"mean", "median", "none"}));
  cmd->add_option("--fig1-inliers", flags->fig1_inliers,
                  "fig1: number of on-line points");
  cmd->add_option("--fig1-outliers", flags->fig1_outliers,
                  "fig1: number of off-line points");
  cmd->add_option("--fig1-noise", flags->fig1_noise,
                  "fig1: orthogonal noise sigma");
}

int center_mode_from(const DataFlags& flags) {
  std::string mode = flags.center;
  if (mode.empty()) {
    // Generators other than fig1 emit already-centered points.
    if (!flags.generate.empty() && flags.generate != "fig1") {
      mode = "none";
    } else {
      mode = "mean";
    }
  }
  if (mode == "mean") return RIPCA_CENTER_MEAN;
  if (mode == "median") return RIPCA_CENTER_GEOMETRIC_MEDIAN;
  return RIPCA_CENTER_NONE;
}

const char* center_name(int mode) {
  switch (mode) {
    case RIPCA_CENTER_MEAN: return "mean";
    case RIPCA_CENTER_GEOMETRIC_MEDIAN: return "median";
    default: return "none";
  }
}

ripca_dataset* make_dataset(const DataFlags& flags, std::uint64_t seed) {
  if (flags.input.empty() && flags.generate.empty()) {
    std::cerr << "ripca: one of --input or --generate is required\n";
    std::exit(kExitData);
  }
  const int mode = center_mode_from(flags);
  ripca_dataset* ds = nullptr;
  ripca_status s;
  if (!flags.input.empty()) {
    s = ripca_dataset_from_csv(flags.input.c_str(), mode, &ds);
    if (s != RIPCA_OK) die(s, "reading " + flags.input);
  } else if (flags.generate == "fig1") {
    s = ripca_dataset_gen_fig1(flags.fig1_inliers, flags.fig1_outliers,
                               flags.fig1_noise, seed, mode, &ds);
    if (s != RIPCA_OK) die(s, "generating fig1");
  } else if (flags.generate == "fig2") {
    s = ripca_dataset_gen_fig2(mode, &ds);
    if (s != RIPCA_OK) die(s, "generating fig2");
  } else {
    s = ripca_dataset_gen_counterexample(mode, &ds);
    if (s != RIPCA_OK) die(s, "generating counterexample");
  }
  return ds;
}

std::string dataset_section(const ripca_dataset* ds, const DataFlags& flags) {
  const int d = ripca_dataset_dim(ds);
  std::vector<double> offset(static_cast<size_t>(d));
  ripca_dataset_offset(ds, offset.data());
  std::ostringstream os;
  os << "dataset:\n";
  os << "  source: "
     << (flags.input.empty() ? "generated:" + flags.generate : flags.input)
     << "\n";
  os << "  n: " << ripca_dataset_size(ds) << "\n";
  os << "  d: " << d << "\n";
  os << "  centering: " << center_name(ripca_dataset_center_mode(ds)) << "\n";
  os << "  offset: " << vec_str(offset) << "\n";
  os << "  zero_points: " << ripca_dataset_zero_points(ds) << "\n";
  return os.str();
}

std::string basis_lines(const std::vector<double>& basis, int d, int k,
                        const std::string& indent) {
  std::ostringstream os;
  for (int i = 0; i < d; ++i) {
    std::vector<double> row(basis.begin() + i * k, basis.begin() + (i + 1) * k);
    os << indent << "row " << i << ": " << vec_str(row) << "\n";
  }
  return os.str();
}

const char* termination_name(int t) {
  switch (t) {
    case RIPCA_TERM_GRAD_ZERO: return "grad_zero";
    case RIPCA_TERM_STEP_SMALL: return "step_small";
    case RIPCA_TERM_MAX_ITER: return "max_iter";
    case RIPCA_TERM_HIT_ANCHOR: return "hit_anchor";
    case RIPCA_TERM_ANCHOR_DESCENT_EXHAUSTED:
      return "anchor_descent_exhausted";
  }
  return "?";
}

const char* verdict_name(int v) {
  switch (v) {
    case RIPCA_VERDICT_STRICT_LOCAL_MIN: return "strict_local_min";
    case RIPCA_VERDICT_NOT_MINIMIZER: return "not_minimizer";
    case RIPCA_VERDICT_INCONCLUSIVE: return "inconclusive";
    case RIPCA_VERDICT_SMOOTH_POINT: return "smooth_point";
  }
  return "?";
}

const char* structure_name(int s) {
  switch (s) {
    case RIPCA_STRUCTURE_SINGLE_DIRECTION: return "single_direction";
    case RIPCA_STRUCTURE_INDEPENDENT_PLUS_MULTIPLES:
      return "independent_plus_multiples";
    case RIPCA_STRUCTURE_GENERAL: return "general";
  }
  return "?";
}

std::string anchor_section(const ripca_certify_report* rep, int d, int k,
                           const std::string& indent) {
  std::ostringstream os;
  const int count = ripca_certify_anchor_count(rep);
  std::vector<int> idx(static_cast<size_t>(count));
  if (count > 0) ripca_certify_anchor_indices(rep, idx.data());
  os << indent << "anchor_set: [";
  for (int i = 0; i < count; ++i) {
    if (i) os << ", ";
    os << idx[static_cast<size_t>(i)];
  }
  os << "]\n";
  const int verdict = ripca_certify_verdict(rep);
  os << indent << "verdict: " << verdict_name(verdict) << "\n";
  if (verdict == RIPCA_VERDICT_SMOOTH_POINT) {
    os << indent << "min_residual: " << fmt(ripca_certify_min_residual(rep))
       << "\n";
    os << indent << "critical_point: "
       << (ripca_certify_critical(rep) ? "true" : "false") << "\n";
    os << indent << "grad_rel: " << fmt(ripca_certify_grad_rel(rep)) << "\n";
    return os.str();
  }
  os << indent << "structure: " << structure_name(ripca_certify_structure(rep))
     << "\n";
  os << indent << "rank: " << ripca_certify_rank(rep) << "\n";
  const int nc = ripca_certify_num_conditions(rep);
  for (int i = 0; i < nc; ++i) {
    os << indent << "condition " << ripca_certify_condition_name(rep, i)
       << ": " << fmt(ripca_certify_condition_value(rep, i)) << "\n";
  }
  if (ripca_certify_has_descent(rep)) {
    std::vector<double> h(static_cast<size_t>(d * k));
    ripca_certify_descent_direction(rep, h.data());
    os << indent << "descent_derivative: "
       << fmt(ripca_certify_descent_derivative(rep)) << "\n";
    os << indent << "descent_direction:\n";
    os << basis_lines(h, d, k, indent + "  ");
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "ripca: cannot write " << path << "\n";
    std::exit(kExitData);
  }
  out << content;
}

struct FitFlags {
  DataFlags data;
  int k = 1;
  std::string scheme = "ding";
  int restarts = 0;
  std::uint64_t seed = 0;
  double tol_grad = 1e-8;
  double tol_step = 1e-10;
  double anchor_tol = 1e-9;
  double eps = 0.0;
  int max_iter = 1000;
  std::string init = "standard_pca";
  std::string out;
  std::string trace;
};

void add_fit_flags(CLI::App* cmd, FitFlags* f) {
  add_data_flags(cmd, &f->data);
  cmd->add_option("--k", f->k, "subspace dimension")->required();
  cmd->add_option("--scheme", f->scheme, "iteration scheme")
      ->check(CLI::IsMember({"ding", "precond"}));
  cmd->add_option("--restarts", f->restarts, "extra seeded random starts");
  cmd->add_option("--seed", f->seed, "RNG seed");
  cmd->add_option("--tol-grad", f->tol_grad, "relative gradient tolerance");
  cmd->add_option("--tol-step", f->tol_step, "step-norm tolerance");
  cmd->add_option("--anchor-tol", f->anchor_tol, "relative anchor band");
  cmd->add_option("--eps", f->eps, "smoothed-objective parameter (off when 0)");
  cmd->add_option("--max-iter", f->max_iter, "iteration cap per run");
  cmd->add_option("--init", f->init, "base-run initialization")
      ->check(CLI::IsMember({"standard_pca", "random"}));
  cmd->add_option("--out", f->out, "report file")->required();
  cmd->add_option("--trace", f->trace, "per-iteration CSV for the best run");
}

std::string config_section(const FitFlags& f, int center_mode) {
  std::ostringstream os;
  os << "config:\n";
  os << "  k: " << f.k << "\n";
  os << "  center: " << center_name(center_mode) << "\n";
  os << "  scheme: " << f.scheme << "\n";
  os << "  init: " << f.init << "\n";
  os << "  restarts: " << f.restarts << "\n";
  os << "  seed: " << f.seed << "\n";
  os << "  max_iter: " << f.max_iter << "\n";
  os << "  tol_grad: " << fmt_cfg(f.tol_grad) << "\n";
  os << "  tol_step: " << fmt_cfg(f.tol_step) << "\n";
  os << "  anchor_tol: " << fmt_cfg(f.anchor_tol) << "\n";
  os << "  eps: " << (f.eps > 0.0 ? fmt_cfg(f.eps) : "none") << "\n";
  return os.str();
}

ripca_config solver_config(const FitFlags& f) {
  ripca_config cfg;
  ripca_config_init(&cfg);
  cfg.max_iter = f.max_iter;
  cfg.tol_step = f.tol_step;
  cfg.tol_grad = f.tol_grad;
  cfg.anchor_tol = f.anchor_tol;
  cfg.scheme =
      f.scheme == "precond" ? RIPCA_SCHEME_PRECONDITIONED : RIPCA_SCHEME_DING;
  cfg.init = f.init == "random" ? RIPCA_INIT_RANDOM : RIPCA_INIT_STANDARD_PCA;
  cfg.restarts = f.restarts;
  cfg.seed = f.seed;
  cfg.eps_smoothing = f.eps;
  return cfg;
}

int run_fit(const FitFlags& f) {
  const auto t0 = std::chrono::steady_clock::now();
  ripca_dataset* ds = make_dataset(f.data, f.seed);
  const int d = ripca_dataset_dim(ds);
  const ripca_config cfg = solver_config(f);
  ripca_fit_result* res = nullptr;
  ripca_status s = ripca_fit(ds, f.k, &cfg, &res);
  if (s != RIPCA_OK) die(s, "fit");

  std::ostringstream report;
  report << "ripca fit report\n";
  report << config_section(f, ripca_dataset_center_mode(ds));
  report << dataset_section(ds, f.data);

  const int runs = ripca_fit_num_runs(res);
  const int best = ripca_fit_best_run(res);
  report << "runs:\n";
  for (int r = 0; r < runs; ++r) {
    report << "  run " << r << ": objective="
           << fmt(ripca_fit_run_objective(res, r))
           << " termination=" << termination_name(ripca_fit_run_termination(res, r))
           << " iterations=" << ripca_fit_run_iterations(res, r) << "\n";
  }
  // Distinct minimizing subspaces among the runs that tie with the
  // best objective (the model is non-convex; ties with different
  // subspaces do occur).
  {
    const double best_E = ripca_fit_run_objective(res, best);
    std::vector<std::vector<double>> reps;
    std::vector<int> rep_runs;
    std::vector<int> counts;
    for (int r = 0; r < runs; ++r) {
      if (ripca_fit_run_objective(res, r) > best_E + 1e-8) continue;
      std::vector<double> b(static_cast<size_t>(d * f.k));
      ripca_fit_run_basis(res, r, b.data());
      bool matched = false;
      for (size_t m = 0; m < reps.size() && !matched; ++m) {
        double dist = 0.0;
        if (ripca_grassmann_distance(d, f.k, reps[m].data(), b.data(),
                                     &dist) == RIPCA_OK &&
            dist <= 1e-3) {
          ++counts[m];
          matched = true;
        }
      }
      if (!matched) {
        reps.push_back(std::move(b));
        rep_runs.push_back(r);
        counts.push_back(1);
      }
    }
    report << "minima:\n";
    report << "  count: " << reps.size() << "\n";
    for (size_t m = 0; m < reps.size(); ++m) {
      report << "  minimum " << m << ": runs=" << counts[m]
             << " objective=" << fmt(ripca_fit_run_objective(res, rep_runs[m]))
             << "\n";
      report << basis_lines(reps[m], d, f.k, "    ");
    }
  }

  report << "best:\n";
  report << "  run: " << best << "\n";
  report << "  objective: " << fmt(ripca_fit_run_objective(res, best)) << "\n";
  report << "  termination: "
         << termination_name(ripca_fit_run_termination(res, best)) << "\n";
  const double agree = ripca_fit_run_scheme_agreement(res, best);
  if (!std::isnan(agree)) {
    report << "  scheme_agreement: " << fmt(agree) << "\n";
  }
  const double k1 = ripca_fit_run_min_decrease_ratio(res, best);
  if (!std::isnan(k1)) {
    report << "  min_decrease_ratio: " << fmt(k1) << "\n";
  }
  std::vector<double> basis(static_cast<size_t>(d * f.k));
  ripca_fit_run_basis(res, best, basis.data());
  report << "  basis:\n" << basis_lines(basis, d, f.k, "    ");
  if (ripca_fit_run_has_anchor_report(res, best)) {
    ripca_certify_report* rep = nullptr;
    if (ripca_fit_run_anchor_report(res, best, &rep) == RIPCA_OK) {
      report << "  anchor:\n" << anchor_section(rep, d, f.k, "    ");
      ripca_certify_report_free(rep);
    }
  }

  std::string trace_csv;
  if (!f.trace.empty()) {
    std::ostringstream tr;
    tr << "r,E,step_norm,grad_norm,min_residual,C1_ratio\n";
    const int len = ripca_fit_run_trace_length(res, best);
    for (int i = 0; i < len; ++i) {
      double row[6];
      ripca_fit_run_trace_row(res, best, i, row);
      tr << static_cast<long long>(row[0]) << "," << fmt(row[1]) << ","
         << fmt(row[2]) << "," << fmt(row[3]) << "," << fmt(row[4]) << ","
         << fmt(row[5]) << "\n";
    }
    trace_csv = tr.str();
  }

  write_file(f.out, report.str());
  if (!f.trace.empty()) write_file(f.trace, trace_csv);

  const auto t1 = std::chrono::steady_clock::now();
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  std::cout << "fit: best objective "
            << fmt(ripca_fit_run_objective(res, best)) << " over " << runs
            << " run(s); report written to " << f.out << " (" << ms
            << " ms)\n";

  ripca_fit_result_free(res);
  ripca_dataset_free(ds);
  return 0;
}

struct CertifyFlags {
  DataFlags data;
  std::string subspace;
  double anchor_tol = 1e-9;
  double cert_tol = 1e-8;
  std::uint64_t seed = 0;
  std::string out;
};

// The basis file is a headerless CSV with d rows and K columns.
std::vector<double> load_basis_csv(const std::string& path, int* d, int* k) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "ripca: cannot open subspace file " << path << "\n";
    std::exit(kExitData);
  }
  std::vector<double> values;
  int rows = 0;
  int cols = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    int c = 0;
    while (std::getline(ls, field, ',')) {
      char* end = nullptr;
      const double value = std::strtod(field.c_str(), &end);
      while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) {
        ++end;
      }
      if (end == field.c_str() || *end != '\0' || !std::isfinite(value)) {
        std::cerr << "ripca: bad number '" << field << "' in " << path << "\n";
        std::exit(kExitData);
      }
      values.push_back(value);
      ++c;
    }
    if (cols < 0) cols = c;
    if (c != cols) {
      std::cerr << "ripca: ragged rows in " << path << "\n";
      std::exit(kExitData);
    }
    ++rows;
  }
  if (rows == 0) {
    std::cerr << "ripca: empty subspace file " << path << "\n";
    std::exit(kExitData);
  }
  *d = rows;
  *k = cols;
  return values;
}

int run_certify(const CertifyFlags& f) {
  ripca_dataset* ds = make_dataset(f.data, f.seed);
  int d = 0;
  int k = 0;
  const std::vector<double> basis = load_basis_csv(f.subspace, &d, &k);
  if (d != ripca_dataset_dim(ds)) {
    std::cerr << "ripca: subspace has " << d << " rows, data dimension is "
              << ripca_dataset_dim(ds) << "\n";
    std::exit(kExitBasis);
  }
  ripca_certify_report* rep = nullptr;
  const ripca_status s =
      ripca_certify(ds, basis.data(), k, f.anchor_tol, f.cert_tol, &rep);
  if (s == RIPCA_ERR_RANK_DEFICIENT || s == RIPCA_ERR_DIMENSION_MISMATCH) {
    std::cerr << "ripca: certify: " << ripca_status_name(s) << " ("
              << ripca_last_error() << ")\n";
    std::exit(kExitBasis);
  }
  if (s != RIPCA_OK) die(s, "certify");

  std::ostringstream report;
  report << "ripca certify report\n";
  report << "config:\n";
  report << "  subspace: " << f.subspace << "\n";
  report << "  anchor_tol: " << fmt_cfg(f.anchor_tol) << "\n";
  report << "  cert_tol: " << fmt_cfg(f.cert_tol) << "\n";
  report << dataset_section(ds, f.data);
  std::vector<double> projected(static_cast<size_t>(d * k));
  ripca_certify_basis(rep, projected.data());
  report << "basis:\n" << basis_lines(projected, d, k, "  ");
  report << "objective: " << fmt(ripca_certify_objective(rep)) << "\n";
  report << "result:\n" << anchor_section(rep, d, k, "  ");
  write_file(f.out, report.str());

  std::cout << "certify: verdict "
            << verdict_name(ripca_certify_verdict(rep)) << "; report written to "
            << f.out << "\n";
  ripca_certify_report_free(rep);
  ripca_dataset_free(ds);
  return 0;
}

struct CompareFlags {
  FitFlags fit;
};

int run_compare(const CompareFlags& cf) {
  const FitFlags& f = cf.fit;
  ripca_dataset* ds = make_dataset(f.data, f.seed);
  const int d = ripca_dataset_dim(ds);

  std::vector<double> pca(static_cast<size_t>(d * f.k));
  ripca_status s = ripca_standard_pca(ds, f.k, pca.data());
  if (s != RIPCA_OK) die(s, "standard_pca");
  double pca_E = 0.0;
  s = ripca_objective_value(ds, pca.data(), f.k, &pca_E);
  if (s != RIPCA_OK) die(s, "objective");

  const ripca_config cfg = solver_config(f);
  ripca_fit_result* res = nullptr;
  s = ripca_fit(ds, f.k, &cfg, &res);
  if (s != RIPCA_OK) die(s, "fit");
  const int best = ripca_fit_best_run(res);
  std::vector<double> robust(static_cast<size_t>(d * f.k));
  ripca_fit_run_basis(res, best, robust.data());
  const double robust_E = ripca_fit_run_objective(res, best);

  double dist = 0.0;
  s = ripca_grassmann_distance(d, f.k, pca.data(), robust.data(), &dist);
  if (s != RIPCA_OK) die(s, "grassmann_distance");

  std::ostringstream report;
  report << "ripca compare report\n";
  report << config_section(f, ripca_dataset_center_mode(ds));
  report << dataset_section(ds, f.data);
  report << "standard_pca:\n";
  report << "  objective: " << fmt(pca_E) << "\n";
  report << "  basis:\n" << basis_lines(pca, d, f.k, "    ");
  report << "robust:\n";
  report << "  objective: " << fmt(robust_E) << "\n";
  report << "  termination: "
         << termination_name(ripca_fit_run_termination(res, best)) << "\n";
  report << "  basis:\n" << basis_lines(robust, d, f.k, "    ");
  report << "grassmann_distance: " << fmt(dist) << "\n";

  // Angle against the known line for the fig1 generator.
  if (f.data.generate == "fig1" && f.k == 1 && d == 2) {
    double truth[2];
    ripca_fig1_true_direction(truth);
    double dist_pca = 0.0;
    double dist_rob = 0.0;
    ripca_grassmann_distance(2, 1, pca.data(), truth, &dist_pca);
    ripca_grassmann_distance(2, 1, robust.data(), truth, &dist_rob);
    const double deg = 180.0 / M_PI;
    report << "truth:\n";
    report << "  direction: " << vec_str({truth[0], truth[1]}) << "\n";
    report << "  standard_angle_deg: "
           << fmt(std::asin(std::min(1.0, dist_pca)) * deg) << "\n";
    report << "  robust_angle_deg: "
           << fmt(std::asin(std::min(1.0, dist_rob)) * deg) << "\n";
  }

  // Nestedness check: fit the one-dimensional subspace as well and
  // measure how far its direction sticks out of the K-plane.
  if (f.k >= 2) {
    ripca_fit_result* res1 = nullptr;
    s = ripca_fit(ds, 1, &cfg, &res1);
    if (s == RIPCA_OK) {
      std::vector<double> dir(static_cast<size_t>(d));
      ripca_fit_run_basis(res1, ripca_fit_best_run(res1), dir.data());
      double resid = 0.0;
      if (ripca_subspace_residual(d, f.k, robust.data(), dir.data(), &resid) ==
          RIPCA_OK) {
        report << "nestedness:\n";
        report << "  k1_direction: " << vec_str(dir) << "\n";
        report << "  residual_outside_subspace: " << fmt(resid) << "\n";
        report << "  violation: " << (resid > 1e-6 ? "true" : "false") << "\n";
      }
      ripca_fit_result_free(res1);
    }
  }

  write_file(f.out, report.str());
  std::cout << "compare: standard objective " << fmt(pca_E)
            << ", robust objective " << fmt(robust_E)
            << "; report written to " << f.out << "\n";
  ripca_fit_result_free(res);
  ripca_dataset_free(ds);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust subspace fitting by L1 residual minimization"};
  app.require_subcommand(1);

  FitFlags fit_flags;
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "fit a K-dimensional subspace and write a report");
  add_fit_flags(fit_cmd, &fit_flags);

  CertifyFlags certify_flags;
  CLI::App* certify_cmd = app.add_subcommand(
      "certify", "test a given basis for anchor-point optimality");
  add_data_flags(certify_cmd, &certify_flags.data);
  certify_cmd
      ->add_option("--subspace", certify_flags.subspace,
                   "CSV with d rows and K columns")
      ->required();
  certify_cmd->add_option("--anchor-tol", certify_flags.anchor_tol,
                          "relative anchor band");
  certify_cmd->add_option("--cert-tol", certify_flags.cert_tol,
                          "certificate dead band");
  certify_cmd->add_option("--seed", certify_flags.seed,
                          "seed for generated datasets");
  certify_cmd->add_option("--out", certify_flags.out, "report file")
      ->required();

  CompareFlags compare_flags;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "fit standard PCA and the robust model side by side");
  add_fit_flags(compare_cmd, &compare_flags.fit);

  CLI11_PARSE(app, argc, argv);

  if (fit_cmd->parsed()) return run_fit(fit_flags);
  if (certify_cmd->parsed()) return run_certify(certify_flags);
  if (compare_cmd->parsed()) return run_compare(compare_flags);
  return 0;
}
