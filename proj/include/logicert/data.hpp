#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logicert/model.hpp"

namespace logicert {

struct Dataset {
  FeatureSchema schema;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;  // 0/1

  int size() const { return static_cast<int>(rows.size()); }
  // Throws std::invalid_argument on shape/label/kind/bound violations.
  void validate() const;
};

// CSV with a header: schema feature names in order, then "label".
Dataset load_csv(const std::string& path, const FeatureSchema& schema);
void save_csv(const Dataset& d, const std::string& path);

// Per-feature population standard deviation. A zero deviation is replaced
// by 1 and the feature index is reported in degenerate (for the caller to
// warn about).
std::vector<double> feature_std(const Dataset& d, std::vector<int>* degenerate = nullptr);

struct SplitResult {
  Dataset train, valid, test;
};

// Deterministic shuffle + partition by fractions (must be >= 0, sum to 1
// within 1e-9). Same seed gives the same split.
SplitResult split_dataset(const Dataset& d, const std::array<double, 3>& fractions, uint64_t seed);

struct Metrics {
  double tpr = 0.0;
  double fpr = 0.0;
  double accuracy = 0.0;
  std::optional<double> auc;  // absent when labels are single-class
  double f1 = 0.0;
};

// Threshold for the positive class is score >= 0. AUC uses pairwise
// concordance with ties counted 0.5.
Metrics compute_metrics(std::span<const int> labels, std::span<const double> scores);

Metrics evaluate(const LogicEnsemble& m, const Dataset& d);

// Deterministic Fisher-Yates permutation of [0, n).
std::vector<int> seeded_permutation(int n, uint64_t seed);

}  // namespace logicert
