#include "ripca/data.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace ripca {

const char* to_string(CenterMode mode) {
  switch (mode) {
    case CenterMode::kNone: return "none";
    case CenterMode::kMean: return "mean";
    case CenterMode::kGeometricMedian: return "geometric_median";
  }
  return "?";
}

DataSet::DataSet(Eigen::MatrixXd Y, Eigen::VectorXd offset, CenterMode mode)
    : Y_(std::move(Y)), offset_(std::move(offset)), mode_(mode) {
  if (Y_.rows() < 1 || Y_.cols() < 1) {
    throw DimensionMismatch("dataset needs d >= 1 and N >= 1");
  }
  if (offset_.size() != Y_.rows()) {
    throw DimensionMismatch("offset length does not match dimension");
  }
  if (!Y_.allFinite()) throw Error("dataset contains non-finite entries");

  norms_ = Y_.colwise().norm();
  max_norm_ = norms_.maxCoeff();
  zero_.assign(static_cast<size_t>(Y_.cols()), 0);
  zero_count_ = 0;
  norm_sum_ = 0.0;
  const double zero_tol = 1e-14 * max_norm_;
  for (Eigen::Index i = 0; i < Y_.cols(); ++i) {
    if (norms_(i) <= zero_tol) {
      zero_[static_cast<size_t>(i)] = 1;
      ++zero_count_;
    } else {
      norm_sum_ += norms_(i);
    }
  }
  if (zero_count_ > 0) {
    std::cerr << "ripca: dropping " << zero_count_
              << " zero data point(s) from all sums\n";
  }
}

DataSet dataset_from_columns(Eigen::MatrixXd Y) {
  Eigen::VectorXd offset = Eigen::VectorXd::Zero(Y.rows());
  return DataSet(std::move(Y), std::move(offset), CenterMode::kNone);
}

namespace {

bool parse_double(const std::string& field, double* out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (*end != '\0') return false;
  if (!std::isfinite(value)) return false;
  *out = value;
  return true;
}

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

}  // namespace

RawPointCloud load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  Eigen::Index width = -1;
  std::string line;
  int lineno = 0;
  bool first_content_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);

    if (first_content_row) {
      first_content_row = false;
      double probe;
      if (!parse_double(fields[0], &probe)) continue;  // header row
    }

    std::vector<double> row;
    row.reserve(fields.size());
    for (size_t c = 0; c < fields.size(); ++c) {
      double value;
      if (!parse_double(fields[c], &value)) {
        throw ParseError(lineno, static_cast<int>(c) + 1, fields[c]);
      }
      row.push_back(value);
    }
    if (width < 0) {
      width = static_cast<Eigen::Index>(row.size());
    } else if (static_cast<Eigen::Index>(row.size()) != width) {
      throw ParseError(lineno, static_cast<int>(row.size()) + 1,
                       "row has " + std::to_string(row.size()) +
                           " fields, expected " + std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyFile("no data rows in " + path);

  RawPointCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(rows.size()), width);
  for (size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index c = 0; c < width; ++c) {
      cloud.points(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<size_t>(c)];
    }
  }
  cloud.source = "file:" + path;
  return cloud;
}

Eigen::VectorXd geometric_median(const Eigen::MatrixXd& points, double tol) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (n < 1) throw DimensionMismatch("geometric_median needs at least one point");

  Eigen::VectorXd y = points.colwise().mean();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    scale = std::max(scale, (points.row(i).transpose() - y).norm());
  }
  if (scale == 0.0) return y;  // all points identical

  const double coincide_tol = 1e-12 * scale;
  const int max_iter = 10000;
  for (int iter = 0; iter < max_iter; ++iter) {
    // Weighted mean over points not coinciding with the iterate, plus
    // the residual direction R used by the data-point guard.
    Eigen::VectorXd weighted = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd residual_dir = Eigen::VectorXd::Zero(d);
    double weight_sum = 0.0;
    int multiplicity = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd diff = points.row(i).transpose() - y;
      const double dist = diff.norm();
      if (dist <= coincide_tol) {
        ++multiplicity;
        continue;
      }
      weighted += points.row(i).transpose() / dist;
      residual_dir += diff / dist;
      weight_sum += 1.0 / dist;
    }
    if (multiplicity == n) return y;
    const Eigen::VectorXd target = weighted / weight_sum;
    Eigen::VectorXd next;
    if (multiplicity > 0) {
      const double r = residual_dir.norm();
      if (r <= static_cast<double>(multiplicity)) return y;  // optimal at a data point
      const double lambda = static_cast<double>(multiplicity) / r;
      next = (1.0 - lambda) * target + lambda * y;
    } else {
      next = target;
    }
    if ((next - y).norm() <= tol * scale) return next;
    y = next;
  }
  return y;
}

DataSet center(const RawPointCloud& cloud, CenterMode mode) {
  if (cloud.size() < 1 || cloud.dim() < 1) {
    throw DimensionMismatch("point cloud needs N >= 1 and d >= 1");
  }
  Eigen::VectorXd offset;
  switch (mode) {
    case CenterMode::kNone:
      offset = Eigen::VectorXd::Zero(cloud.dim());
      break;
    case CenterMode::kMean:
      offset = cloud.points.colwise().mean();
      break;
    case CenterMode::kGeometricMedian:
      offset = geometric_median(cloud.points);
      break;
  }
  Eigen::MatrixXd Y = (cloud.points.rowwise() - offset.transpose()).transpose();
  return DataSet(std::move(Y), std::move(offset), mode);
}

RawPointCloud gen_fig1(int n_inliers, int n_outliers, double noise,
                       std::uint64_t seed) {
  if (n_inliers < 0 || n_outliers < 0) {
    throw DimensionMismatch("gen_fig1 counts must be nonnegative");
  }
  const Eigen::Vector2d u = fig1_true_direction();
  const Eigen::Vector2d u_perp(-u(1), u(0));

  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), 0x1f2eu};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> along(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  RawPointCloud cloud;
  cloud.points.resize(n_inliers + n_outliers, 2);
  for (int i = 0; i < n_inliers; ++i) {
    const double t = along(rng);
    const double e = noise * gauss(rng);
    cloud.points.row(i) = (t * u + e * u_perp).transpose();
  }
  const Eigen::Vector2d outlier_base(0.9, -0.8);
  for (int j = 0; j < n_outliers; ++j) {
    const double stretch = 1.0 + 0.15 * j;
    Eigen::Vector2d p = stretch * outlier_base;
    p(0) += 0.02 * gauss(rng);
    p(1) += 0.02 * gauss(rng);
    cloud.points.row(n_inliers + j) = p.transpose();
  }
  cloud.source = "generator:fig1";
  return cloud;
}

Eigen::Vector2d fig1_true_direction() {
  return Eigen::Vector2d(2.0, 1.0).normalized();
}

RawPointCloud gen_fig2() {
  RawPointCloud cloud;
  cloud.points.resize(37, 3);
  for (int l = 0; l <= 30; ++l) {
    cloud.points.row(l) << 0.005 * l, 0.0, 0.005 * l;
  }
  const double s = 1.0 / std::sqrt(2.0);
  cloud.points.row(31) << 1.0, 0.0, 0.0;
  cloud.points.row(32) << -1.0, 0.0, 0.0;
  cloud.points.row(33) << s, s, 0.0;
  cloud.points.row(34) << -s, -s, 0.0;
  cloud.points.row(35) << s, -s, 0.0;
  cloud.points.row(36) << -s, s, 0.0;
  cloud.source = "generator:fig2";
  return cloud;
}

RawPointCloud gen_counterexample() {
  RawPointCloud cloud;
  cloud.points.resize(2, 2);
  const double h = std::sqrt(3.0) / 2.0;
  cloud.points.row(0) << -0.5, h;
  cloud.points.row(1) << 0.5, h;
  cloud.source = "generator:counterexample";
  return cloud;
}

}  // namespace ripca
