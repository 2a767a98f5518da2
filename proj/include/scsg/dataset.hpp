#ifndef SCSG_DATASET_HPP
#define SCSG_DATASET_HPP

// LIBSVM / CSV ingestion and a synthetic multiclass generator.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Sparse>

#include "scsg/objectives.hpp"
#include "scsg/sampling.hpp"

namespace scsg {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class DataFormat { libsvm, csv };

inline DataFormat parse_data_format(std::string_view s) {
  if (s == "libsvm") return DataFormat::libsvm;
  if (s == "csv") return DataFormat::csv;
  throw std::invalid_argument("unknown data format: " + std::string(s));
}

/// Rows in file order. `targets` holds the raw last-column / label values;
/// `labels` the same values as class ids when they are all positive
/// integers (classes = max label), otherwise empty.
struct Dataset {
  DataFormat format = DataFormat::libsvm;
  SparseRows features;
  Vector targets;
  std::vector<int> labels;
  int classes = 0;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(features.cols()); }
  bool is_classification() const { return !labels.empty(); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  // strtod accepts the full decimal / exponent grammar and round-trips %.17g.
  std::string tmp(s);
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return end == tmp.c_str() + tmp.size();
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline void finish_labels(Dataset& d) {
  d.labels.clear();
  d.classes = 0;
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(d.targets.size()));
  for (double t : d.targets) {
    if (!(t >= 1.0) || t != std::floor(t) || t > 1e9) return;
    labels.push_back(static_cast<int>(t));
  }
  d.classes = *std::max_element(labels.begin(), labels.end());
  d.labels = std::move(labels);
}

}  // namespace detail

inline Dataset parse_libsvm(std::istream& in, const std::string& name = "<libsvm>") {
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> targets;
  std::size_t max_col = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = detail::trim(line);
    if (const auto hash = sv.find('#'); hash != std::string_view::npos)
      sv = detail::trim(sv.substr(0, hash));
    if (sv.empty()) continue;
    const auto tok = detail::split_ws(sv);
    double label = 0.0;
    if (!detail::parse_double(tok[0], label))
      throw ParseError(name, lineno, "bad label '" + std::string(tok[0]) + "'");
    const auto row = static_cast<int>(targets.size());
    long prev = 0;
    for (std::size_t t = 1; t < tok.size(); ++t) {
      const auto colon = tok[t].find(':');
      if (colon == std::string_view::npos)
        throw ParseError(name, lineno, "expected index:value, got '" + std::string(tok[t]) + "'");
      long idx = 0;
      const auto is = tok[t].substr(0, colon);
      const auto [ptr, ec] = std::from_chars(is.data(), is.data() + is.size(), idx);
      if (ec != std::errc() || ptr != is.data() + is.size())
        throw ParseError(name, lineno, "bad feature index '" + std::string(is) + "'");
      if (idx < 1)
        throw ParseError(name, lineno, "feature indices are 1-based, got " + std::to_string(idx));
      if (idx <= prev)
        throw ParseError(name, lineno, "feature indices must be strictly increasing");
      prev = idx;
      double v = 0.0;
      if (!detail::parse_double(tok[t].substr(colon + 1), v) || !std::isfinite(v))
        throw ParseError(name, lineno, "bad feature value in '" + std::string(tok[t]) + "'");
      max_col = std::max<std::size_t>(max_col, static_cast<std::size_t>(idx));
      if (v != 0.0) trips.emplace_back(row, static_cast<int>(idx - 1), v);
    }
    targets.push_back(label);
  }
  if (targets.empty()) throw ParseError(name, lineno, "empty dataset");
  if (max_col == 0) throw ParseError(name, lineno, "dataset has no features");

  Dataset d;
  d.format = DataFormat::libsvm;
  d.features = SparseRows(static_cast<Eigen::Index>(targets.size()),
                          static_cast<Eigen::Index>(max_col));
  d.features.setFromTriplets(trips.begin(), trips.end());
  d.features.makeCompressed();
  d.targets = Eigen::Map<const Vector>(targets.data(), static_cast<Eigen::Index>(targets.size()));
  detail::finish_labels(d);
  return d;
}

/// Comma-separated rows, label in the last column. A first line whose
/// fields are not all numeric is treated as a header.
inline Dataset parse_csv(std::istream& in, const std::string& name = "<csv>") {
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> targets;
  std::size_t width = 0;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view sv = detail::trim(line);
    if (sv.empty()) continue;
    const auto fields = detail::split(sv, ',');
    std::vector<double> vals(fields.size());
    bool numeric = true;
    for (std::size_t f = 0; f < fields.size(); ++f)
      numeric = numeric && detail::parse_double(fields[f], vals[f]);
    if (first) {
      first = false;
      if (!numeric) {
        if (fields.size() < 2) throw ParseError(name, lineno, "need at least two columns");
        width = fields.size();
        continue;
      }
    }
    if (!numeric) throw ParseError(name, lineno, "non-numeric field");
    if (fields.size() < 2) throw ParseError(name, lineno, "need at least two columns");
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw ParseError(name, lineno, "expected " + std::to_string(width) + " columns, got " +
                                         std::to_string(fields.size()));
    const auto row = static_cast<int>(targets.size());
    for (std::size_t f = 0; f + 1 < width; ++f) {
      if (!std::isfinite(vals[f])) throw ParseError(name, lineno, "non-finite value");
      if (vals[f] != 0.0) trips.emplace_back(row, static_cast<int>(f), vals[f]);
    }
    targets.push_back(vals.back());
  }
  if (targets.empty()) throw ParseError(name, lineno, "empty dataset");

  Dataset d;
  d.format = DataFormat::csv;
  d.features = SparseRows(static_cast<Eigen::Index>(targets.size()),
                          static_cast<Eigen::Index>(width - 1));
  d.features.setFromTriplets(trips.begin(), trips.end());
  d.features.makeCompressed();
  d.targets = Eigen::Map<const Vector>(targets.data(), static_cast<Eigen::Index>(targets.size()));
  detail::finish_labels(d);
  return d;
}

inline Dataset load_dataset(const std::string& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path);
  return format == DataFormat::libsvm ? parse_libsvm(in, path) : parse_csv(in, path);
}

inline void write_libsvm(std::ostream& out, const Dataset& d) {
  char buf[64];
  for (Eigen::Index i = 0; i < d.features.rows(); ++i) {
    if (d.is_classification()) {
      out << d.labels[static_cast<std::size_t>(i)];
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", d.targets[i]);
      out << buf;
    }
    for (SparseRows::InnerIterator it(d.features, i); it; ++it) {
      std::snprintf(buf, sizeof buf, " %ld:%.17g", static_cast<long>(it.col() + 1), it.value());
      out << buf;
    }
    out << '\n';
  }
}

/// Unnormalized, correlated Gaussian features with per-column scales
/// log-uniform in [0.1, 10] (one shared factor, correlation 0.5), labels
/// drawn from a softmax of a random linear model, so classes overlap.
inline Dataset make_synthetic_multiclass(std::size_t n, std::size_t p, int classes,
                                         std::uint64_t seed) {
  if (n == 0 || p == 0 || classes < 2)
    throw std::invalid_argument("make_synthetic_multiclass: need n, p >= 1 and K >= 2");
  RngStream rng(seed);
  const auto pp = static_cast<Eigen::Index>(p);
  Eigen::VectorXd scale(pp);
  for (Eigen::Index j = 0; j < pp; ++j) scale[j] = std::pow(10.0, 2.0 * rng.uniform01() - 1.0);
  Eigen::MatrixXd w(pp, classes);
  for (Eigen::Index k = 0; k < w.cols(); ++k)
    for (Eigen::Index j = 0; j < pp; ++j)
      w(j, k) = 3.0 * rng.normal() / (scale[j] * std::sqrt(static_cast<double>(p)));

  const double rho = 0.5;
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> targets;
  Eigen::VectorXd a(pp);
  Eigen::VectorXd logits(classes);
  for (std::size_t i = 0; i < n; ++i) {
    const double shared = rng.normal();
    for (Eigen::Index j = 0; j < pp; ++j)
      a[j] = scale[j] * (std::sqrt(1.0 - rho) * rng.normal() + std::sqrt(rho) * shared);
    logits = w.transpose() * a;
    Eigen::VectorXd pr = (logits.array() - logits.maxCoeff()).exp();
    pr /= pr.sum();
    double u = rng.uniform01();
    int label = classes;
    for (int k = 0; k < classes; ++k) {
      u -= pr[k];
      if (u < 0.0) {
        label = k + 1;
        break;
      }
    }
    for (Eigen::Index j = 0; j < pp; ++j)
      trips.emplace_back(static_cast<int>(i), static_cast<int>(j), a[j]);
    targets.push_back(label);
  }
  Dataset d;
  d.features = SparseRows(static_cast<Eigen::Index>(n), pp);
  d.features.setFromTriplets(trips.begin(), trips.end());
  d.features.makeCompressed();
  d.targets = Eigen::Map<const Vector>(targets.data(), static_cast<Eigen::Index>(n));
  detail::finish_labels(d);
  d.classes = classes;
  return d;
}

}  // namespace scsg

#endif  // SCSG_DATASET_HPP
