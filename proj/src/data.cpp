#include "logicert/data.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace logicert {

void Dataset::validate() const {
  schema.validate();
  if (rows.size() != labels.size())
    throw std::invalid_argument("dataset: row/label count mismatch");
  for (size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != schema.size())
      throw std::invalid_argument("dataset: row " + std::to_string(i) + " has wrong width");
    if (labels[i] != 0 && labels[i] != 1)
      throw std::invalid_argument("dataset: label must be 0 or 1 at row " + std::to_string(i));
    for (int j = 0; j < schema.size(); ++j) {
      double v = rows[i][j];
      const Feature& f = schema.features[j];
      if (!std::isfinite(v))
        throw std::invalid_argument("dataset: non-finite value at row " + std::to_string(i));
      if (f.kind == FeatureKind::Integer && v != std::floor(v))
        throw std::invalid_argument("dataset: non-integer value for integer feature '" + f.name +
                                    "' at row " + std::to_string(i));
      if ((f.lower_bound && v < *f.lower_bound) || (f.upper_bound && v > *f.upper_bound))
        throw std::invalid_argument("dataset: value outside declared bounds for '" + f.name +
                                    "' at row " + std::to_string(i));
    }
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, int line_no) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0') || !std::isfinite(v))
    throw std::invalid_argument("csv: bad number '" + s + "' at line " + std::to_string(line_no));
  return v;
}

}  // namespace

Dataset load_csv(const std::string& path, const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty file " + path);
  std::vector<std::string> header = split_line(line);
  if (static_cast<int>(header.size()) != schema.size() + 1 || header.back() != "label")
    throw std::invalid_argument("csv: header must be schema features then 'label'");
  for (int j = 0; j < schema.size(); ++j)
    if (header[j] != schema.features[j].name)
      throw std::invalid_argument("csv: header column " + std::to_string(j) + " is '" + header[j] +
                                  "', expected '" + schema.features[j].name + "'");
  Dataset d;
  d.schema = schema;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells = split_line(line);
    if (static_cast<int>(cells.size()) != schema.size() + 1)
      throw std::invalid_argument("csv: wrong cell count at line " + std::to_string(line_no));
    std::vector<double> row(schema.size());
    for (int j = 0; j < schema.size(); ++j) row[j] = parse_number(cells[j], line_no);
    double lab = parse_number(cells.back(), line_no);
    d.rows.push_back(std::move(row));
    d.labels.push_back(static_cast<int>(lab));
  }
  d.validate();
  return d;
}

void save_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (int j = 0; j < d.schema.size(); ++j) out << d.schema.features[j].name << ',';
  out << "label\n";
  char buf[64];
  for (int i = 0; i < d.size(); ++i) {
    for (double v : d.rows[i]) {
      snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    out << d.labels[i] << '\n';
  }
}

std::vector<double> feature_std(const Dataset& d, std::vector<int>* degenerate) {
  if (d.size() == 0) throw std::invalid_argument("feature_std: empty dataset");
  int n = d.size(), k = d.schema.size();
  std::vector<double> sigma(k, 0.0);
  for (int j = 0; j < k; ++j) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += d.rows[i][j];
    mean /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      double dv = d.rows[i][j] - mean;
      var += dv * dv;
    }
    var /= n;
    sigma[j] = std::sqrt(var);
    if (sigma[j] == 0.0) {
      sigma[j] = 1.0;
      if (degenerate) degenerate->push_back(j);
    }
  }
  return sigma;
}

std::vector<int> seeded_permutation(int n, uint64_t seed) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    // Explicit draw keeps the permutation identical across standard libraries.
    uint64_t r = rng() % static_cast<uint64_t>(i + 1);
    std::swap(perm[i], perm[static_cast<int>(r)]);
  }
  return perm;
}

SplitResult split_dataset(const Dataset& d, const std::array<double, 3>& fractions, uint64_t seed) {
  double sum = 0.0;
  for (double f : fractions) {
    if (f < 0.0) throw std::invalid_argument("split: negative fraction");
    sum += f;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw std::invalid_argument("split: fractions must sum to 1");
  int n = d.size();
  std::vector<int> perm = seeded_permutation(n, seed);
  int n_train = static_cast<int>(std::llround(fractions[0] * n));
  int n_valid = static_cast<int>(std::llround(fractions[1] * n));
  n_train = std::min(n_train, n);
  n_valid = std::min(n_valid, n - n_train);
  SplitResult out;
  out.train.schema = out.valid.schema = out.test.schema = d.schema;
  for (int i = 0; i < n; ++i) {
    Dataset& dst = i < n_train ? out.train : (i < n_train + n_valid ? out.valid : out.test);
    dst.rows.push_back(d.rows[perm[i]]);
    dst.labels.push_back(d.labels[perm[i]]);
  }
  return out;
}

Metrics compute_metrics(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size())
    throw std::invalid_argument("metrics: label/score length mismatch");
  if (labels.empty()) throw std::invalid_argument("metrics: empty input");
  long tp = 0, fp = 0, tn = 0, fn = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    bool pred = scores[i] >= 0.0;
    if (labels[i] == 1) {
      pred ? ++tp : ++fn;
    } else {
      pred ? ++fp : ++tn;
    }
  }
  Metrics m;
  long pos = tp + fn, neg = fp + tn;
  m.tpr = pos > 0 ? double(tp) / pos : 0.0;
  m.fpr = neg > 0 ? double(fp) / neg : 0.0;
  m.accuracy = double(tp + tn) / labels.size();
  m.f1 = (2 * tp + fp + fn) > 0 ? double(2 * tp) / (2 * tp + fp + fn) : 0.0;
  if (pos > 0 && neg > 0) {
    // Pairwise concordance, ties 0.5.
    double conc = 0.0;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != 1) continue;
      for (size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] != 0) continue;
        if (scores[i] > scores[j]) conc += 1.0;
        else if (scores[i] == scores[j]) conc += 0.5;
      }
    }
    m.auc = conc / (double(pos) * double(neg));
  }
  return m;
}

Metrics evaluate(const LogicEnsemble& m, const Dataset& d) {
  std::vector<double> scores(d.size());
  for (int i = 0; i < d.size(); ++i) scores[i] = score(m, d.rows[i]);
  return compute_metrics(d.labels, scores);
}

}  // namespace logicert
