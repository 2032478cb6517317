#pragma once

#include <optional>
#include <span>
#include <vector>

#include "logicert/data.hpp"
#include "logicert/model.hpp"

namespace logicert {

struct BoostConfig {
  int max_depth = 4;
  double lambda = 1.0;          // L2 regularizer on leaf values
  double min_split_gain = 1e-6;
  double malicious_weight = 1.0;  // sample weight on label-1 rows
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  double leaf = 0.0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // root at 0
};

// Second-order logistic gradients: g = w (p - y), h = w p (1 - p) with
// p = sigmoid(score) and w = malicious_weight on positives.
void compute_gradients(std::span<const int> labels, std::span<const double> scores,
                       double malicious_weight, std::vector<double>& g, std::vector<double>& h);

// Greedy depth-bounded regression tree on (g, h). Split candidates are
// midpoints of consecutive distinct values (integer features use k+0.5
// thresholds); gain ties break toward the lower feature index, then the
// lower threshold. Leaves carry -G/(H+lambda).
DecisionTree fit_tree(const std::vector<std::vector<double>>& rows, std::span<const double> g,
                      std::span<const double> h, const FeatureSchema& schema,
                      const BoostConfig& cfg,
                      const std::vector<int>* feature_mask = nullptr);

// One clause per leaf: a left edge (x_j < t) adds atom (1, j, t), a right
// edge adds (-1, j, -t). Clauses appear in left-to-right leaf order.
std::vector<Clause> tree_to_clauses(const DecisionTree& tree);

// Fits one more tree against the model's current scores and appends its
// clauses as a new round.
void boost_round(LogicEnsemble& model, const Dataset& train, const BoostConfig& cfg,
                 const std::vector<int>* feature_mask = nullptr);

}  // namespace logicert
