#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odopt/types.hpp"

namespace odopt {

/// Directed edge i -> j (information flows from `from` to `to`), 0-based.
struct WeightedEdge {
  int from = 0;
  int to = 0;
  double weight = 1.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Weighted directed graph G = (V, E, W) on nodes 0..n-1.
///
/// Self-loops are never stored; the self-confidence of an agent lives on the
/// diagonal of the communication matrix instead. The graph is immutable once
/// constructed and can be shared freely between readers.
class WeightedDigraph {
 public:
  WeightedDigraph() = default;
  explicit WeightedDigraph(int n);
  /// Throws ErrorKind::parameter on out-of-range endpoints, self-loops,
  /// duplicate edges or negative weights.
  WeightedDigraph(int n, std::span<const WeightedEdge> edges);

  int size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Edges sorted by (from, to).
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }

  bool has_edge(int from, int to) const;
  /// Weight of from->to, or 0 when the edge is absent.
  double weight(int from, int to) const;

  /// N_i = { j | (j, i) in E }, ascending.
  std::span<const int> in_neighbors(int i) const { return in_[i]; }
  std::span<const int> out_neighbors(int i) const { return out_[i]; }

  /// d_i, the weighted in-degree.
  double in_degree(int i) const;

  friend bool operator==(const WeightedDigraph& a, const WeightedDigraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int find(int from, int to) const;

  int n_ = 0;
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
};

enum class GraphFamily {
  path,
  erdos_renyi,
  random_tree,
  random_regular,
  directed_cycle,
  complete,
  explicit_edges,
};

std::string_view to_string(GraphFamily family) noexcept;
GraphFamily parse_graph_family(std::string_view name);

struct GraphFamilySpec {
  GraphFamily family = GraphFamily::path;
  int n = 2;
  /// Edge probability for erdos_renyi.
  double p = 0.0;
  /// Degree for random_regular.
  int k = 1;
  /// erdos_renyi only: sample each ordered pair independently instead of
  /// emitting symmetric pairs.
  bool directed = false;
  std::uint64_t seed = 0;
  /// explicit_edges only.
  std::vector<WeightedEdge> edges;
};

/// Builds a graph of the requested family. Undirected families come back as
/// symmetric directed pairs with unit weights.
WeightedDigraph generate(const GraphFamilySpec& spec);

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// All-pairs hop distances; entry [i][j] = dist(i, j), kUnreachable when j
/// cannot be reached from i.
std::vector<std::vector<int>> distances(const WeightedDigraph& g);

bool is_strongly_connected(const WeightedDigraph& g);

/// Union of edge sets; weights add on shared edges.
WeightedDigraph union_graph(std::span<const WeightedDigraph> graphs);

/// L = Delta - A with L(i, i) = d_i and L(i, j) = -w(j -> i).
RowMatrix laplacian(const WeightedDigraph& g);

/// Edge-list text format: `n=<int>` followed by one `i j w` line per edge,
/// nodes 1-indexed.
void write_edge_list(std::ostream& out, const WeightedDigraph& g);
WeightedDigraph read_edge_list(std::istream& in);

}  // namespace odopt
