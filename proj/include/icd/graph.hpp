#pragma once

#include <utility>
#include <vector>

namespace icd {

// One undirected edge with a similarity weight in [0, 1].
// Canonical form: u < v.
struct Edge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

// Undirected simple graph of entity-similarity scores. Nodes are entities,
// edge weights are pairwise similarity probabilities.
struct WeightedGraph {
  int node_count = 0;
  std::vector<Edge> edges;

  // Throws std::invalid_argument if node_count < 1, an edge violates
  // 0 <= u < v < node_count, a (u,v) pair repeats, or a weight leaves [0,1].
  void validate() const;

  // Neighbor lists sorted by neighbor index; one entry per node.
  std::vector<std::vector<std::pair<int, double>>> adjacency() const;
};

// Cluster assignment, one id per node. Ids are 0..cluster_count-1 and every
// id is used at least once.
struct Partition {
  std::vector<int> assignment;
  int cluster_count = 0;
};

// Relabels arbitrary cluster ids so that clusters are numbered by their
// smallest contained node index, ascending.
Partition canonical_partition(const std::vector<int>& raw_ids);

// Union-find with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int i);
  // Returns true if p and q were in different sets.
  bool unite(int p, int q);
  int set_count() const { return set_count_; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int set_count_;
};

enum class EdgeKeep {
  kAtOrAbove,     // keep edges with w >= t
  kStrictlyAbove  // keep edges with w > t
};

// Connected components of the subgraph keeping exactly the edges with
// w >= t. t is clamped to [0, 1]. Cluster ids are assigned by smallest
// contained node index, ascending.
Partition components_at_threshold(const WeightedGraph& g, double t);

// Largest threshold b such that the graph stays one component for every
// t <= b under the keep-w>=t convention (the bottleneck weight of a maximum
// spanning tree). Returns 0.0 if the graph is already disconnected with all
// edges present, and 1.0 for a single-node graph, which can never split.
double tc_min_split_threshold(const WeightedGraph& g);

// Nodes surviving the k-core of the thresholded subgraph: edges are filtered
// by `keep` against t, then nodes with degree < k are removed until a fixed
// point. Returns the surviving node indices in ascending order (possibly
// empty). k must be >= 1.
std::vector<int> k_core(const WeightedGraph& g, int k, double t,
                        EdgeKeep keep = EdgeKeep::kAtOrAbove);

}  // namespace icd
