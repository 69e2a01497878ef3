#include "icd/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace icd {

void WeightedGraph::validate() const {
  if (node_count < 1) {
    throw std::invalid_argument("graph: node_count must be positive");
  }
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v >= node_count || e.u >= e.v) {
      throw std::invalid_argument("graph: edge (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) +
                                  ") violates 0 <= u < v < node_count");
    }
    if (!(e.w >= 0.0 && e.w <= 1.0)) {
      throw std::invalid_argument("graph: weight " + std::to_string(e.w) +
                                  " outside [0,1] on edge (" +
                                  std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ")");
    }
    if (!seen.insert({e.u, e.v}).second) {
      throw std::invalid_argument("graph: duplicate edge (" +
                                  std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ")");
    }
  }
}

std::vector<std::vector<std::pair<int, double>>> WeightedGraph::adjacency()
    const {
  std::vector<std::vector<std::pair<int, double>>> adj(node_count);
  for (const Edge& e : edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

Partition canonical_partition(const std::vector<int>& raw_ids) {
  Partition p;
  p.assignment.resize(raw_ids.size());
  // First appearance order equals smallest-contained-node order.
  std::vector<int> relabel;
  std::vector<int> seen_raw;
  for (std::size_t i = 0; i < raw_ids.size(); ++i) {
    int id = -1;
    for (std::size_t j = 0; j < seen_raw.size(); ++j) {
      if (seen_raw[j] == raw_ids[i]) {
        id = static_cast<int>(j);
        break;
      }
    }
    if (id < 0) {
      id = static_cast<int>(seen_raw.size());
      seen_raw.push_back(raw_ids[i]);
    }
    p.assignment[i] = id;
  }
  p.cluster_count = static_cast<int>(seen_raw.size());
  return p;
}

UnionFind::UnionFind(int n) : parent_(n), size_(n, 1), set_count_(n) {
  for (int i = 0; i < n; ++i) parent_[i] = i;
}

int UnionFind::find(int i) {
  while (i != parent_[i]) {
    parent_[i] = parent_[parent_[i]];  // path halving
    i = parent_[i];
  }
  return i;
}

bool UnionFind::unite(int p, int q) {
  int a = find(p);
  int b = find(q);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  --set_count_;
  return true;
}

Partition components_at_threshold(const WeightedGraph& g, double t) {
  t = std::clamp(t, 0.0, 1.0);
  UnionFind uf(g.node_count);
  for (const Edge& e : g.edges) {
    if (e.w >= t) uf.unite(e.u, e.v);
  }
  std::vector<int> roots(g.node_count);
  for (int v = 0; v < g.node_count; ++v) roots[v] = uf.find(v);
  return canonical_partition(roots);
}

double tc_min_split_threshold(const WeightedGraph& g) {
  if (g.node_count == 1) return 1.0;  // a single node can never split

  // Kruskal on descending weights; the bottleneck of a maximum spanning tree
  // is the smallest accepted weight.
  std::vector<const Edge*> order;
  order.reserve(g.edges.size());
  for (const Edge& e : g.edges) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const Edge* a, const Edge* b) {
    if (a->w != b->w) return a->w > b->w;
    if (a->u != b->u) return a->u < b->u;
    return a->v < b->v;
  });

  UnionFind uf(g.node_count);
  double bottleneck = 1.0;
  int joined = 0;
  for (const Edge* e : order) {
    if (uf.unite(e->u, e->v)) {
      bottleneck = std::min(bottleneck, e->w);
      if (++joined == g.node_count - 1) break;
    }
  }
  if (joined < g.node_count - 1) return 0.0;  // already split with all edges
  return bottleneck;
}

std::vector<int> k_core(const WeightedGraph& g, int k, double t,
                        EdgeKeep keep) {
  if (k < 1) throw std::invalid_argument("k_core: k must be >= 1");

  std::vector<std::vector<int>> adj(g.node_count);
  for (const Edge& e : g.edges) {
    const bool kept =
        keep == EdgeKeep::kAtOrAbove ? e.w >= t : e.w > t;
    if (kept) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
  }

  std::vector<int> degree(g.node_count);
  std::vector<bool> removed(g.node_count, false);
  std::vector<int> queue;
  for (int v = 0; v < g.node_count; ++v) {
    degree[v] = static_cast<int>(adj[v].size());
    if (degree[v] < k) {
      removed[v] = true;
      queue.push_back(v);
    }
  }
  // The fixed point is order-independent; any processing order works.
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (int w : adj[v]) {
      if (removed[w]) continue;
      if (--degree[w] < k) {
        removed[w] = true;
        queue.push_back(w);
      }
    }
  }

  std::vector<int> survivors;
  for (int v = 0; v < g.node_count; ++v) {
    if (!removed[v]) survivors.push_back(v);
  }
  return survivors;
}

}  // namespace icd
