#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "icd/graph.hpp"
#include "icd/rng.hpp"

using icd::Edge;
using icd::EdgeKeep;
using icd::Partition;
using icd::Rng;
using icd::WeightedGraph;

namespace {

WeightedGraph triangle(double w) {
  return {3, {{0, 1, w}, {0, 2, w}, {1, 2, w}}};
}

WeightedGraph clique(int n, double w) {
  WeightedGraph g;
  g.node_count = n;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v, w});
  }
  return g;
}

// Two 3-cliques with internal weight `inner` joined by one bridge.
WeightedGraph bridged_cliques(double inner, double bridge) {
  WeightedGraph g = {6,
                     {{0, 1, inner},
                      {0, 2, inner},
                      {1, 2, inner},
                      {3, 4, inner},
                      {3, 5, inner},
                      {4, 5, inner},
                      {2, 3, bridge}}};
  return g;
}

// Oracle: tc_min_split_threshold by sweeping the sorted distinct weights.
double sweep_tmin(const WeightedGraph& g) {
  if (g.node_count == 1) return 1.0;
  if (icd::components_at_threshold(g, 0.0).cluster_count > 1) return 0.0;
  std::vector<double> weights;
  for (const Edge& e : g.edges) weights.push_back(e.w);
  std::sort(weights.begin(), weights.end());
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());
  double best = 0.0;
  for (double w : weights) {
    if (icd::components_at_threshold(g, w).cluster_count == 1) {
      best = std::max(best, w);
    }
  }
  return best;
}

// Oracle: one-at-a-time pruning in descending node order, degrees recomputed
// from scratch every pass.
std::vector<int> slow_k_core(const WeightedGraph& g, int k, double t) {
  std::set<int> alive;
  for (int v = 0; v < g.node_count; ++v) alive.insert(v);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = alive.rbegin(); it != alive.rend(); ++it) {
      const int v = *it;
      int degree = 0;
      for (const Edge& e : g.edges) {
        if (e.w < t) continue;
        if ((e.u == v && alive.count(e.v)) || (e.v == v && alive.count(e.u))) {
          ++degree;
        }
      }
      if (degree < k) {
        alive.erase(v);
        changed = true;
        break;
      }
    }
  }
  return {alive.begin(), alive.end()};
}

WeightedGraph random_complete(Rng& rng, int min_n = 2, int max_n = 12) {
  const int n = min_n + static_cast<int>(rng.uniform_int(max_n - min_n + 1));
  WeightedGraph g;
  g.node_count = n;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v, rng.uniform()});
  }
  return g;
}

// Sparse but connected: a random spanning tree plus extra edges.
WeightedGraph random_connected(Rng& rng) {
  const int n = 2 + static_cast<int>(rng.uniform_int(11));
  WeightedGraph g;
  g.node_count = n;
  std::set<std::pair<int, int>> present;
  for (int v = 1; v < n; ++v) {
    const int u = static_cast<int>(rng.uniform_int(v));
    present.insert({u, v});
    g.edges.push_back({u, v, rng.uniform()});
  }
  const int extras = static_cast<int>(rng.uniform_int(n + 1));
  for (int i = 0; i < extras; ++i) {
    int u = static_cast<int>(rng.uniform_int(n));
    int v = static_cast<int>(rng.uniform_int(n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (present.insert({u, v}).second) g.edges.push_back({u, v, rng.uniform()});
  }
  return g;
}

}  // namespace

TEST_CASE("validate rejects malformed graphs") {
  CHECK_NOTHROW(triangle(0.5).validate());
  CHECK_THROWS_AS((WeightedGraph{0, {}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((WeightedGraph{2, {{1, 0, 0.5}}}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((WeightedGraph{2, {{0, 0, 0.5}}}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((WeightedGraph{2, {{0, 1, 1.3}}}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((WeightedGraph{2, {{0, 1, 0.5}, {0, 1, 0.6}}}).validate(),
                  std::invalid_argument);
}

TEST_CASE("components_at_threshold worked examples") {
  const WeightedGraph tri = triangle(0.9);
  CHECK(icd::components_at_threshold(tri, 0.5).cluster_count == 1);
  CHECK(icd::components_at_threshold(tri, 0.95).cluster_count == 3);

  const WeightedGraph path = {4, {{0, 1, 0.9}, {1, 2, 0.2}, {2, 3, 0.8}}};
  const Partition p = icd::components_at_threshold(path, 0.5);
  CHECK(p.cluster_count == 2);
  CHECK(p.assignment == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("components clamps out-of-range thresholds") {
  const WeightedGraph tri = triangle(0.9);
  CHECK(icd::components_at_threshold(tri, -0.5).cluster_count == 1);
  CHECK(icd::components_at_threshold(tri, 1.5).cluster_count == 3);
}

TEST_CASE("tc_min_split_threshold worked examples") {
  CHECK(icd::tc_min_split_threshold(bridged_cliques(0.95, 0.2)) ==
        doctest::Approx(0.2));
  CHECK(icd::tc_min_split_threshold(triangle(0.9)) == doctest::Approx(0.9));

  const WeightedGraph tri = {3, {{0, 1, 0.8}, {0, 2, 0.6}, {1, 2, 0.3}}};
  CHECK(icd::tc_min_split_threshold(tri) == doctest::Approx(0.6));
  CHECK(sweep_tmin(tri) == icd::tc_min_split_threshold(tri));

  // Conventions: single node never splits; disconnected graphs split at 0.
  CHECK(icd::tc_min_split_threshold({1, {}}) == 1.0);
  CHECK(icd::tc_min_split_threshold({4, {{0, 1, 0.9}, {2, 3, 0.9}}}) == 0.0);
}

TEST_CASE("k_core worked examples") {
  WeightedGraph star = {5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}}};
  CHECK(icd::k_core(star, 2, 0.0).empty());

  CHECK(icd::k_core(clique(4, 1.0), 3, 0.0) == std::vector<int>{0, 1, 2, 3});

  WeightedGraph broken = clique(4, 1.0);
  broken.edges.erase(broken.edges.begin());  // drop one edge
  CHECK(icd::k_core(broken, 3, 0.0).empty());
}

TEST_CASE("k_core respects the threshold and filter mode") {
  const WeightedGraph g = clique(4, 0.5);
  CHECK(icd::k_core(g, 3, 0.5).size() == 4);  // w >= t keeps ties
  CHECK(icd::k_core(g, 3, 0.5, EdgeKeep::kStrictlyAbove).empty());
}

TEST_CASE("MST bottleneck equals the sweep oracle on 1000 random graphs") {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const WeightedGraph g =
        trial % 2 == 0 ? random_complete(rng) : random_connected(rng);
    CHECK(icd::tc_min_split_threshold(g) == sweep_tmin(g));  // exact
  }
}

TEST_CASE("graphs stay whole up to the bottleneck and split just above") {
  Rng rng(102);
  for (int trial = 0; trial < 1000; ++trial) {
    const WeightedGraph g = random_complete(rng);
    const double b = icd::tc_min_split_threshold(g);
    for (const Edge& e : g.edges) {
      if (e.w <= b) {
        CHECK(icd::components_at_threshold(g, e.w).cluster_count == 1);
      }
    }
    CHECK(icd::components_at_threshold(g, 0.0).cluster_count == 1);
    CHECK(icd::components_at_threshold(g, b).cluster_count == 1);
    if (b < 1.0) {
      CHECK(icd::components_at_threshold(g, b + 1e-9).cluster_count >= 2);
    }
  }
}

TEST_CASE("raising one edge weight never lowers the bottleneck") {
  Rng rng(103);
  for (int trial = 0; trial < 500; ++trial) {
    WeightedGraph g = random_connected(rng);
    const double before = icd::tc_min_split_threshold(g);
    const std::size_t pick = rng.uniform_int(g.edges.size());
    g.edges[pick].w = std::min(1.0, g.edges[pick].w + rng.uniform() * 0.5);
    CHECK(icd::tc_min_split_threshold(g) >= before);
  }
}

TEST_CASE("k_core fixed point is independent of pruning order") {
  Rng rng(104);
  for (int trial = 0; trial < 1000; ++trial) {
    const WeightedGraph g = random_complete(rng, 2, 10);
    const int k = 1 + static_cast<int>(rng.uniform_int(5));
    const double t = rng.uniform();
    CHECK(icd::k_core(g, k, t) == slow_k_core(g, k, t));
  }
}

TEST_CASE("components are stable under node relabeling") {
  Rng rng(105);
  for (int trial = 0; trial < 200; ++trial) {
    const WeightedGraph g = random_connected(rng);
    const int n = g.node_count;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
    }
    WeightedGraph h;
    h.node_count = n;
    for (const Edge& e : g.edges) {
      int u = perm[e.u], v = perm[e.v];
      if (u > v) std::swap(u, v);
      h.edges.push_back({u, v, e.w});
    }
    const double t = rng.uniform();
    const Partition pg = icd::components_at_threshold(g, t);
    const Partition ph = icd::components_at_threshold(h, t);
    CHECK(pg.cluster_count == ph.cluster_count);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        CHECK((pg.assignment[u] == pg.assignment[v]) ==
              (ph.assignment[perm[u]] == ph.assignment[perm[v]]));
      }
    }
  }
}

TEST_CASE("canonical_partition numbers clusters by smallest member") {
  const Partition p = icd::canonical_partition({7, 3, 7, 1, 3});
  CHECK(p.assignment == std::vector<int>{0, 1, 0, 2, 1});
  CHECK(p.cluster_count == 3);
}
