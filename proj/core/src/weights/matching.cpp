#include "wscj/weights/matching.hpp"

#include <algorithm>
#include <map>

#include "wscj/core/errors.hpp"

namespace wscj::weights {

namespace {

// Edmonds' blossom algorithm with dual variables (Galil's formulation). All
// weights are integers, so every slack stays even where it is halved.
class Blossom {
 public:
  Blossom(int n, const std::vector<WeightedEdge>& edges) : n_(n), edges_(edges) {
    const auto m = edges_.size();
    std::int64_t max_weight = 0;
    for (const auto& e : edges_) max_weight = std::max(max_weight, e.weight);
    endpoint_.resize(2 * m);
    neighbend_.resize(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < m; ++k) {
      endpoint_[2 * k] = edges_[k].u;
      endpoint_[2 * k + 1] = edges_[k].v;
      neighbend_[static_cast<std::size_t>(edges_[k].u)].push_back(static_cast<int>(2 * k + 1));
      neighbend_[static_cast<std::size_t>(edges_[k].v)].push_back(static_cast<int>(2 * k));
    }
    const auto n2 = static_cast<std::size_t>(2 * n);
    mate_.assign(static_cast<std::size_t>(n), -1);
    label_.assign(n2, 0);
    labelend_.assign(n2, -1);
    inblossom_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) inblossom_[static_cast<std::size_t>(i)] = i;
    blossomparent_.assign(n2, -1);
    blossomchilds_.assign(n2, {});
    blossombase_.assign(n2, -1);
    for (int i = 0; i < n; ++i) blossombase_[static_cast<std::size_t>(i)] = i;
    blossomendps_.assign(n2, {});
    bestedge_.assign(n2, -1);
    blossombestedges_.assign(n2, {});
    has_bestedges_.assign(n2, false);
    for (int b = n; b < 2 * n; ++b) unused_.push_back(b);
    dualvar_.assign(n2, 0);
    for (int i = 0; i < n; ++i) dualvar_[static_cast<std::size_t>(i)] = max_weight;
    allowedge_.assign(m, false);
  }

  std::vector<int> run() {
    const int n = n_;
    for (int stage = 0; stage < n; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (int b = n; b < 2 * n; ++b) {
        blossombestedges_[ix(b)].clear();
        has_bestedges_[ix(b)] = false;
      }
      std::fill(allowedge_.begin(), allowedge_.end(), false);
      queue_.clear();
      for (int v = 0; v < n; ++v) {
        if (mate_[ix(v)] == -1 && label_[ix(inblossom_[ix(v)])] == 0) assign_label(v, 1, -1);
      }
      bool augmented = false;
      while (true) {
        while (!queue_.empty() && !augmented) {
          const int v = queue_.back();
          queue_.pop_back();
          for (int p : neighbend_[ix(v)]) {
            const int k = p / 2;
            const int w = endpoint_[ix(p)];
            if (inblossom_[ix(v)] == inblossom_[ix(w)]) continue;
            std::int64_t kslack = 0;
            if (!allowedge_[ix(k)]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[ix(k)] = true;
            }
            if (allowedge_[ix(k)]) {
              if (label_[ix(inblossom_[ix(w)])] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[ix(inblossom_[ix(w)])] == 1) {
                const int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[ix(w)] == 0) {
                label_[ix(w)] = 2;
                labelend_[ix(w)] = p ^ 1;
              }
            } else if (label_[ix(inblossom_[ix(w)])] == 1) {
              const int b = inblossom_[ix(v)];
              if (bestedge_[ix(b)] == -1 || kslack < slack(bestedge_[ix(b)])) bestedge_[ix(b)] = k;
            } else if (label_[ix(w)] == 0) {
              if (bestedge_[ix(w)] == -1 || kslack < slack(bestedge_[ix(w)])) bestedge_[ix(w)] = k;
            }
          }
        }
        if (augmented) break;

        int deltatype = 1;
        std::int64_t delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n);
        int deltaedge = -1;
        int deltablossom = -1;
        for (int v = 0; v < n; ++v) {
          if (label_[ix(inblossom_[ix(v)])] == 0 && bestedge_[ix(v)] != -1) {
            const std::int64_t d = slack(bestedge_[ix(v)]);
            if (d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[ix(v)];
            }
          }
        }
        for (int b = 0; b < 2 * n; ++b) {
          if (blossomparent_[ix(b)] == -1 && label_[ix(b)] == 1 && bestedge_[ix(b)] != -1) {
            const std::int64_t s = slack(bestedge_[ix(b)]);
            if (s % 2 != 0) throw InternalError("odd slack in weighted matching");
            const std::int64_t d = s / 2;
            if (d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[ix(b)];
            }
          }
        }
        for (int b = n; b < 2 * n; ++b) {
          if (blossombase_[ix(b)] >= 0 && blossomparent_[ix(b)] == -1 && label_[ix(b)] == 2 &&
              dualvar_[ix(b)] < delta) {
            delta = dualvar_[ix(b)];
            deltatype = 4;
            deltablossom = b;
          }
        }
        for (int v = 0; v < n; ++v) {
          const int l = label_[ix(inblossom_[ix(v)])];
          if (l == 1) {
            dualvar_[ix(v)] -= delta;
          } else if (l == 2) {
            dualvar_[ix(v)] += delta;
          }
        }
        for (int b = n; b < 2 * n; ++b) {
          if (blossombase_[ix(b)] >= 0 && blossomparent_[ix(b)] == -1) {
            if (label_[ix(b)] == 1) {
              dualvar_[ix(b)] += delta;
            } else if (label_[ix(b)] == 2) {
              dualvar_[ix(b)] -= delta;
            }
          }
        }
        if (deltatype == 1) break;
        if (deltatype == 2) {
          allowedge_[ix(deltaedge)] = true;
          int i = edges_[ix(deltaedge)].u;
          if (label_[ix(inblossom_[ix(i)])] == 0) i = edges_[ix(deltaedge)].v;
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[ix(deltaedge)] = true;
          queue_.push_back(edges_[ix(deltaedge)].u);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;
      for (int b = n; b < 2 * n; ++b) {
        if (blossomparent_[ix(b)] == -1 && blossombase_[ix(b)] >= 0 && label_[ix(b)] == 1 &&
            dualvar_[ix(b)] == 0) {
          expand_blossom(b, true);
        }
      }
    }
    std::vector<int> mate(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v) {
      if (mate_[ix(v)] >= 0) mate[ix(v)] = endpoint_[ix(mate_[ix(v)])];
    }
    return mate;
  }

 private:
  static std::size_t ix(int i) { return static_cast<std::size_t>(i); }

  // Python-style index into a cyclic child list.
  static int& cyc(std::vector<int>& v, int j) {
    const int len = static_cast<int>(v.size());
    return v[ix(((j % len) + len) % len)];
  }

  std::int64_t slack(int k) const {
    const auto& e = edges_[ix(k)];
    return dualvar_[ix(e.u)] + dualvar_[ix(e.v)] - 2 * e.weight;
  }

  void leaves(int b, std::vector<int>& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (int t : blossomchilds_[ix(b)]) leaves(t, out);
  }

  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p) {
    const int b = inblossom_[ix(w)];
    label_[ix(w)] = label_[ix(b)] = t;
    labelend_[ix(w)] = labelend_[ix(b)] = p;
    bestedge_[ix(w)] = bestedge_[ix(b)] = -1;
    if (t == 1) {
      leaves(b, queue_);
    } else if (t == 2) {
      const int base = blossombase_[ix(b)];
      assign_label(endpoint_[ix(mate_[ix(base)])], 1, mate_[ix(base)] ^ 1);
    }
  }

  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[ix(v)];
      if (label_[ix(b)] & 4) {
        base = blossombase_[ix(b)];
        break;
      }
      path.push_back(b);
      label_[ix(b)] = 5;
      if (labelend_[ix(b)] == -1) {
        v = -1;
      } else {
        v = endpoint_[ix(labelend_[ix(b)])];
        b = inblossom_[ix(v)];
        v = endpoint_[ix(labelend_[ix(b)])];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[ix(b)] = 1;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = edges_[ix(k)].u;
    int w = edges_[ix(k)].v;
    const int bb = inblossom_[ix(base)];
    int bv = inblossom_[ix(v)];
    int bw = inblossom_[ix(w)];
    const int b = unused_.back();
    unused_.pop_back();
    blossombase_[ix(b)] = base;
    blossomparent_[ix(b)] = -1;
    blossomparent_[ix(bb)] = b;
    std::vector<int> path;
    std::vector<int> endps;
    while (bv != bb) {
      blossomparent_[ix(bv)] = b;
      path.push_back(bv);
      endps.push_back(labelend_[ix(bv)]);
      v = endpoint_[ix(labelend_[ix(bv)])];
      bv = inblossom_[ix(v)];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[ix(bw)] = b;
      path.push_back(bw);
      endps.push_back(labelend_[ix(bw)] ^ 1);
      w = endpoint_[ix(labelend_[ix(bw)])];
      bw = inblossom_[ix(w)];
    }
    label_[ix(b)] = 1;
    labelend_[ix(b)] = labelend_[ix(bb)];
    dualvar_[ix(b)] = 0;
    blossomchilds_[ix(b)] = path;
    blossomendps_[ix(b)] = endps;
    for (int x : leaves(b)) {
      if (label_[ix(inblossom_[ix(x)])] == 2) queue_.push_back(x);
      inblossom_[ix(x)] = b;
    }
    std::vector<int> bestedgeto(ix(2 * n_), -1);
    for (int sub : path) {
      std::vector<std::vector<int>> nblists;
      if (!has_bestedges_[ix(sub)]) {
        for (int x : leaves(sub)) {
          std::vector<int> list;
          for (int p : neighbend_[ix(x)]) list.push_back(p / 2);
          nblists.push_back(std::move(list));
        }
      } else {
        nblists.push_back(blossombestedges_[ix(sub)]);
      }
      for (const auto& list : nblists) {
        for (int kk : list) {
          int i = edges_[ix(kk)].u;
          int j = edges_[ix(kk)].v;
          if (inblossom_[ix(j)] == b) std::swap(i, j);
          const int bj = inblossom_[ix(j)];
          if (bj != b && label_[ix(bj)] == 1 &&
              (bestedgeto[ix(bj)] == -1 || slack(kk) < slack(bestedgeto[ix(bj)]))) {
            bestedgeto[ix(bj)] = kk;
          }
        }
      }
      blossombestedges_[ix(sub)].clear();
      has_bestedges_[ix(sub)] = false;
      bestedge_[ix(sub)] = -1;
    }
    auto& best = blossombestedges_[ix(b)];
    best.clear();
    for (int kk : bestedgeto) {
      if (kk != -1) best.push_back(kk);
    }
    has_bestedges_[ix(b)] = true;
    bestedge_[ix(b)] = -1;
    for (int kk : best) {
      if (bestedge_[ix(b)] == -1 || slack(kk) < slack(bestedge_[ix(b)])) bestedge_[ix(b)] = kk;
    }
  }

  void expand_blossom(int b, bool endstage) {
    const std::vector<int> childs = blossomchilds_[ix(b)];
    for (int s : childs) {
      blossomparent_[ix(s)] = -1;
      if (s < n_) {
        inblossom_[ix(s)] = s;
      } else if (endstage && dualvar_[ix(s)] == 0) {
        expand_blossom(s, endstage);
      } else {
        for (int x : leaves(s)) inblossom_[ix(x)] = s;
      }
    }
    if (!endstage && label_[ix(b)] == 2) {
      auto& ch = blossomchilds_[ix(b)];
      auto& endps = blossomendps_[ix(b)];
      const int entrychild = inblossom_[ix(endpoint_[ix(labelend_[ix(b)] ^ 1)])];
      int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
      int jstep;
      int endptrick;
      if (j & 1) {
        j -= static_cast<int>(ch.size());
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      int p = labelend_[ix(b)];
      while (j != 0) {
        label_[ix(endpoint_[ix(p ^ 1)])] = 0;
        label_[ix(endpoint_[ix(cyc(endps, j - endptrick) ^ endptrick ^ 1)])] = 0;
        assign_label(endpoint_[ix(p ^ 1)], 2, p);
        allowedge_[ix(cyc(endps, j - endptrick) / 2)] = true;
        j += jstep;
        p = cyc(endps, j - endptrick) ^ endptrick;
        allowedge_[ix(p / 2)] = true;
        j += jstep;
      }
      int bv = cyc(ch, j);
      label_[ix(endpoint_[ix(p ^ 1)])] = label_[ix(bv)] = 2;
      labelend_[ix(endpoint_[ix(p ^ 1)])] = labelend_[ix(bv)] = p;
      bestedge_[ix(bv)] = -1;
      j += jstep;
      while (cyc(ch, j) != entrychild) {
        bv = cyc(ch, j);
        if (label_[ix(bv)] == 1) {
          j += jstep;
          continue;
        }
        int labeled = -1;
        for (int x : leaves(bv)) {
          if (label_[ix(x)] != 0) {
            labeled = x;
            break;
          }
        }
        if (labeled != -1) {
          label_[ix(labeled)] = 0;
          label_[ix(endpoint_[ix(mate_[ix(blossombase_[ix(bv)])])])] = 0;
          assign_label(labeled, 2, labelend_[ix(labeled)]);
        }
        j += jstep;
      }
    }
    label_[ix(b)] = labelend_[ix(b)] = -1;
    blossomchilds_[ix(b)].clear();
    blossomendps_[ix(b)].clear();
    blossombase_[ix(b)] = -1;
    blossombestedges_[ix(b)].clear();
    has_bestedges_[ix(b)] = false;
    bestedge_[ix(b)] = -1;
    unused_.push_back(b);
  }

  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[ix(t)] != b) t = blossomparent_[ix(t)];
    if (t >= n_) augment_blossom(t, v);
    auto& ch = blossomchilds_[ix(b)];
    auto& endps = blossomendps_[ix(b)];
    const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
      j -= static_cast<int>(ch.size());
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = cyc(ch, j);
      const int p = cyc(endps, j - endptrick) ^ endptrick;
      if (t >= n_) augment_blossom(t, endpoint_[ix(p)]);
      j += jstep;
      t = cyc(ch, j);
      if (t >= n_) augment_blossom(t, endpoint_[ix(p ^ 1)]);
      mate_[ix(endpoint_[ix(p)])] = p ^ 1;
      mate_[ix(endpoint_[ix(p ^ 1)])] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[ix(b)] = blossombase_[ix(ch.front())];
  }

  void augment_matching(int k) {
    const int ends[2][2] = {{edges_[ix(k)].u, 2 * k + 1}, {edges_[ix(k)].v, 2 * k}};
    for (const auto& sp : ends) {
      int s = sp[0];
      int p = sp[1];
      while (true) {
        const int bs = inblossom_[ix(s)];
        if (bs >= n_) augment_blossom(bs, s);
        mate_[ix(s)] = p;
        if (labelend_[ix(bs)] == -1) break;
        const int t = endpoint_[ix(labelend_[ix(bs)])];
        const int bt = inblossom_[ix(t)];
        s = endpoint_[ix(labelend_[ix(bt)])];
        const int j = endpoint_[ix(labelend_[ix(bt)] ^ 1)];
        if (bt >= n_) augment_blossom(bt, j);
        mate_[ix(j)] = labelend_[ix(bt)];
        p = labelend_[ix(bt)] ^ 1;
      }
    }
  }

  int n_;
  const std::vector<WeightedEdge>& edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<int> unused_;
  std::vector<std::int64_t> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

using NodeEdges = std::map<NodeId, std::vector<std::pair<Adjacency, MicroWeight>>>;

MatchingLabeling label_by_matching(const Phylogeny& phylogeny, const NodeEdges& per_node) {
  const auto& tree = phylogeny.tree();
  MatchingLabeling out;
  out.labeling.resize(tree.size());
  out.kept.assign(tree.size(), 0);
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const auto id = static_cast<NodeId>(v);
    if (tree.is_leaf(id)) {
      out.labeling[v] = phylogeny.leaf_genome(id);
      continue;
    }
    std::vector<Adjacency> chosen;
    auto it = per_node.find(id);
    if (it != per_node.end()) {
      std::map<Extremity, int> index;
      for (const auto& [adj, w] : it->second) {
        index.emplace(adj.first(), 0);
        index.emplace(adj.second(), 0);
      }
      std::vector<Extremity> vertices;
      for (auto& [x, i] : index) {
        i = static_cast<int>(vertices.size());
        vertices.push_back(x);
      }
      std::vector<WeightedEdge> edges;
      for (const auto& [adj, w] : it->second) edges.push_back({index[adj.first()], index[adj.second()], w});
      const auto mate = max_weight_matching(static_cast<int>(vertices.size()), edges);
      for (const auto& [adj, w] : it->second) {
        if (mate[static_cast<std::size_t>(index[adj.first()])] == index[adj.second()]) {
          chosen.push_back(adj);
          out.kept[v] += w;
        }
      }
    }
    out.total_kept += out.kept[v];
    out.labeling[v] = AdjacencySet(std::move(chosen), phylogeny.universe());
  }
  return out;
}

}  // namespace

std::vector<int> max_weight_matching(int n_vertices, const std::vector<WeightedEdge>& edges) {
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n_vertices || e.v >= n_vertices || e.u == e.v) {
      throw InputError("matching edge has an invalid endpoint");
    }
  }
  if (n_vertices == 0 || edges.empty()) return std::vector<int>(static_cast<std::size_t>(n_vertices), -1);
  return Blossom(n_vertices, edges).run();
}

MatchingLabeling max_weight_matching_labeling(const Phylogeny& phylogeny, const WeightTable& weights) {
  NodeEdges per_node;
  for (const auto& [key, w] : weights.entries()) {
    if (w > 0 && !phylogeny.tree().is_leaf(key.first)) per_node[key.first].emplace_back(key.second, w);
  }
  return label_by_matching(phylogeny, per_node);
}

MatchingLabeling max_weight_matching_labeling(const Phylogeny& phylogeny, const WeightTable& weights,
                                              const graph::GlobalAdjacencyGraph& graph) {
  NodeEdges per_node;
  for (const auto& [adj, nodes] : graph.edges) {
    for (NodeId v : nodes) {
      if (const MicroWeight w = weights.get(v, adj); w > 0) per_node[v].emplace_back(adj, w);
    }
  }
  return label_by_matching(phylogeny, per_node);
}

}  // namespace wscj::weights
