#include "logicert/booster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace logicert {

void compute_gradients(std::span<const int> labels, std::span<const double> scores,
                       double malicious_weight, std::vector<double>& g, std::vector<double>& h) {
  if (labels.size() != scores.size())
    throw std::invalid_argument("compute_gradients: length mismatch");
  size_t n = labels.size();
  g.resize(n);
  h.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double p = sigmoid(scores[i]);
    double w = labels[i] == 1 ? malicious_weight : 1.0;
    g[i] = w * (p - labels[i]);
    h[i] = w * p * (1.0 - p);
  }
}

namespace {

struct SplitChoice {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

double node_score_term(double G, double H, double lambda) { return G * G / (H + lambda); }

int build_node(DecisionTree& tree, const std::vector<std::vector<double>>& rows,
               std::span<const double> g, std::span<const double> h, const FeatureSchema& schema,
               const BoostConfig& cfg, const std::vector<int>& feats, std::vector<int>& idx,
               int depth) {
  double G = 0.0, H = 0.0;
  for (int i : idx) {
    G += g[i];
    H += h[i];
  }
  int self = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{});

  SplitChoice best;
  std::vector<int> order;
  if (depth < cfg.max_depth && idx.size() >= 2) {
    for (int f : feats) {
      order = idx;
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return rows[a][f] < rows[b][f]; });
      double GL = 0.0, HL = 0.0;
      for (size_t k = 0; k + 1 < order.size(); ++k) {
        GL += g[order[k]];
        HL += h[order[k]];
        double a = rows[order[k]][f], b = rows[order[k + 1]][f];
        if (a == b) continue;
        double t;
        if (schema.features[f].kind == FeatureKind::Integer)
          t = std::floor((a + b) / 2.0) + 0.5;
        else
          t = (a + b) / 2.0;
        double gain = 0.5 * (node_score_term(GL, HL, cfg.lambda) +
                             node_score_term(G - GL, H - HL, cfg.lambda) -
                             node_score_term(G, H, cfg.lambda));
        // Strict > keeps the first maximum: lowest feature, lowest threshold.
        if (gain > best.gain && gain > cfg.min_split_gain) {
          best.gain = gain;
          best.feature = f;
          best.threshold = t;
        }
      }
    }
  }

  if (best.feature < 0) {
    tree.nodes[self].leaf = -G / (H + cfg.lambda);
    return self;
  }
  std::vector<int> left, right;
  for (int i : idx)
    (rows[i][best.feature] < best.threshold ? left : right).push_back(i);
  int l = build_node(tree, rows, g, h, schema, cfg, feats, left, depth + 1);
  int r = build_node(tree, rows, g, h, schema, cfg, feats, right, depth + 1);
  tree.nodes[self].feature = best.feature;
  tree.nodes[self].threshold = best.threshold;
  tree.nodes[self].left = l;
  tree.nodes[self].right = r;
  return self;
}

void collect_clauses(const DecisionTree& tree, int node, std::vector<Atom>& path,
                     std::vector<Clause>& out) {
  const TreeNode& nd = tree.nodes[node];
  if (nd.feature < 0) {
    out.push_back(Clause{path, nd.leaf});
    return;
  }
  path.push_back(Atom{1.0, nd.feature, nd.threshold});
  collect_clauses(tree, nd.left, path, out);
  path.back() = Atom{-1.0, nd.feature, -nd.threshold};
  collect_clauses(tree, nd.right, path, out);
  path.pop_back();
}

}  // namespace

DecisionTree fit_tree(const std::vector<std::vector<double>>& rows, std::span<const double> g,
                      std::span<const double> h, const FeatureSchema& schema,
                      const BoostConfig& cfg, const std::vector<int>* feature_mask) {
  if (rows.empty()) throw std::invalid_argument("fit_tree: no rows");
  if (rows.size() != g.size() || g.size() != h.size())
    throw std::invalid_argument("fit_tree: gradient length mismatch");
  std::vector<int> feats;
  if (feature_mask) {
    feats = *feature_mask;
    for (int f : feats)
      if (f < 0 || f >= schema.size())
        throw std::invalid_argument("fit_tree: feature mask index out of range");
    std::sort(feats.begin(), feats.end());
    feats.erase(std::unique(feats.begin(), feats.end()), feats.end());
    if (feats.empty()) throw std::invalid_argument("fit_tree: empty feature mask");
  } else {
    feats.resize(schema.size());
    std::iota(feats.begin(), feats.end(), 0);
  }
  DecisionTree tree;
  std::vector<int> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  build_node(tree, rows, g, h, schema, cfg, feats, idx, 0);
  return tree;
}

std::vector<Clause> tree_to_clauses(const DecisionTree& tree) {
  if (tree.nodes.empty()) throw std::invalid_argument("tree_to_clauses: empty tree");
  std::vector<Clause> out;
  std::vector<Atom> path;
  collect_clauses(tree, 0, path, out);
  return out;
}

void boost_round(LogicEnsemble& model, const Dataset& train, const BoostConfig& cfg,
                 const std::vector<int>* feature_mask) {
  std::vector<double> scores(train.size());
  for (int i = 0; i < train.size(); ++i) scores[i] = score(model, train.rows[i]);
  std::vector<double> g, h;
  compute_gradients(train.labels, scores, cfg.malicious_weight, g, h);
  DecisionTree tree = fit_tree(train.rows, g, h, train.schema, cfg, feature_mask);
  std::vector<Clause> clauses = tree_to_clauses(tree);
  for (Clause& c : clauses) model.clauses.push_back(std::move(c));
  model.round_boundaries.push_back(model.num_clauses());
}

}  // namespace logicert
