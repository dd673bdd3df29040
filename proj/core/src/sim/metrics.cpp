#include "wscj/sim/metrics.hpp"

#include "wscj/core/errors.hpp"

namespace wscj::sim {

Scores make_scores(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  Scores s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  if (tp + fn == 0) {
    s.sensitivity = 1.0;
    s.sensitivity_degenerate = true;
  } else {
    s.sensitivity = static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  if (tp + fp == 0) {
    s.precision = 1.0;
    s.precision_degenerate = true;
  } else {
    s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  const double p = s.precision;
  const double r = s.sensitivity;
  s.f1 = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  s.f05 = 0.25 * p + r > 0.0 ? 1.25 * p * r / (0.25 * p + r) : 0.0;
  return s;
}

Evaluation score_reconstruction(const Tree& tree, const Labeling& truth, const Labeling& predicted) {
  if (truth.size() != tree.size() || predicted.size() != tree.size()) {
    throw InputError("labelings do not match the tree");
  }
  Evaluation out;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  for (NodeId v : tree.internal_nodes()) {
    const auto& t = truth[static_cast<std::size_t>(v)];
    const auto& p = predicted[static_cast<std::size_t>(v)];
    std::int64_t node_tp = 0;
    for (const auto& a : p) node_tp += t.contains(a) ? 1 : 0;
    const auto node_fp = static_cast<std::int64_t>(p.size()) - node_tp;
    const auto node_fn = static_cast<std::int64_t>(t.size()) - node_tp;
    out.nodes.push_back(v);
    out.per_node.push_back(make_scores(node_tp, node_fp, node_fn));
    tp += node_tp;
    fp += node_fp;
    fn += node_fn;
  }
  out.pooled = make_scores(tp, fp, fn);
  return out;
}

}  // namespace wscj::sim
