#include "odopt/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include "odopt/csv.hpp"
#include "odopt/error.hpp"

namespace odopt {

namespace {

constexpr int kRegularRetries = 1000;

[[noreturn]] void parameter_error(const std::string& what) {
  throw Error(ErrorKind::parameter, what);
}

void add_symmetric(std::vector<WeightedEdge>& edges, int a, int b) {
  edges.push_back({a, b, 1.0});
  edges.push_back({b, a, 1.0});
}

std::vector<WeightedEdge> path_edges(int n) {
  std::vector<WeightedEdge> edges;
  for (int i = 0; i + 1 < n; ++i) add_symmetric(edges, i, i + 1);
  return edges;
}

std::vector<WeightedEdge> erdos_renyi_edges(const GraphFamilySpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution coin(spec.p);
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = spec.directed ? 0 : i + 1; j < spec.n; ++j) {
      if (i == j) continue;
      if (!coin(rng)) continue;
      if (spec.directed) {
        edges.push_back({i, j, 1.0});
      } else {
        add_symmetric(edges, i, j);
      }
    }
  }
  return edges;
}

// Uniform labeled tree from a uniformly drawn Pruefer sequence.
std::vector<WeightedEdge> random_tree_edges(const GraphFamilySpec& spec) {
  const int n = spec.n;
  std::vector<WeightedEdge> edges;
  if (n < 2) return edges;
  if (n == 2) {
    add_symmetric(edges, 0, 1);
    return edges;
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> node(0, n - 1);
  std::vector<int> code(n - 2);
  for (auto& c : code) c = node(rng);

  std::vector<int> degree(n, 1);
  for (int c : code) ++degree[c];
  std::priority_queue<int, std::vector<int>, std::greater<>> leaves;
  for (int v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push(v);
  for (int c : code) {
    const int leaf = leaves.top();
    leaves.pop();
    add_symmetric(edges, leaf, c);
    if (--degree[c] == 1) leaves.push(c);
  }
  const int u = leaves.top();
  leaves.pop();
  add_symmetric(edges, u, leaves.top());
  return edges;
}

// Configuration model with rejection of self-loops and multi-edges.
std::vector<WeightedEdge> random_regular_edges(const GraphFamilySpec& spec) {
  const int n = spec.n;
  const int k = spec.k;
  std::mt19937_64 rng(spec.seed);
  std::vector<int> stubs(static_cast<std::size_t>(n) * k);
  for (int v = 0; v < n; ++v) std::fill_n(stubs.begin() + static_cast<long>(v) * k, k, v);

  std::vector<char> adjacent(static_cast<std::size_t>(n) * n);
  for (int attempt = 0; attempt < kRegularRetries; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::fill(adjacent.begin(), adjacent.end(), 0);
    std::vector<WeightedEdge> edges;
    bool simple = true;
    for (std::size_t s = 0; s < stubs.size(); s += 2) {
      const int a = stubs[s];
      const int b = stubs[s + 1];
      auto& cell = adjacent[static_cast<std::size_t>(a) * n + b];
      if (a == b || cell) {
        simple = false;
        break;
      }
      cell = 1;
      adjacent[static_cast<std::size_t>(b) * n + a] = 1;
      add_symmetric(edges, a, b);
    }
    if (simple) return edges;
  }
  throw Error(ErrorKind::generation,
              "random_regular: no simple graph after " + std::to_string(kRegularRetries) +
                  " pairings (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
}

void validate(const GraphFamilySpec& spec) {
  if (spec.n < 1) parameter_error("graph needs at least one node");
  switch (spec.family) {
    case GraphFamily::erdos_renyi:
      if (!(spec.p >= 0.0 && spec.p <= 1.0)) parameter_error("erdos_renyi: p must lie in [0, 1]");
      break;
    case GraphFamily::random_regular:
      if (spec.k < 1 || spec.k >= spec.n)
        parameter_error("random_regular: need 1 <= k < n");
      if ((static_cast<long>(spec.n) * spec.k) % 2 != 0)
        parameter_error("random_regular: n*k must be even");
      break;
    case GraphFamily::directed_cycle:
      if (spec.n < 2) parameter_error("directed_cycle needs n >= 2");
      break;
    default:
      break;
  }
}

}  // namespace

WeightedDigraph::WeightedDigraph(int n) : n_(n), in_(n), out_(n) {
  if (n < 0) parameter_error("negative node count");
}

WeightedDigraph::WeightedDigraph(int n, std::span<const WeightedEdge> edges)
    : WeightedDigraph(n) {
  edges_.assign(edges.begin(), edges.end());
  for (const auto& e : edges_) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      parameter_error("edge endpoint out of range");
    if (e.from == e.to) parameter_error("self-loops are not stored in the edge set");
    if (!(e.weight >= 0.0)) parameter_error("edge weights must be non-negative");
  }
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].from == edges_[i - 1].from && edges_[i].to == edges_[i - 1].to)
      parameter_error("duplicate edge " + std::to_string(edges_[i].from + 1) + "->" +
                      std::to_string(edges_[i].to + 1));
  }
  for (const auto& e : edges_) {
    out_[e.from].push_back(e.to);
    in_[e.to].push_back(e.from);
  }
  for (auto& list : in_) std::sort(list.begin(), list.end());
}

int WeightedDigraph::find(int from, int to) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{from, to},
                             [](const WeightedEdge& e, const std::pair<int, int>& key) {
                               return e.from != key.first ? e.from < key.first
                                                          : e.to < key.second;
                             });
  if (it == edges_.end() || it->from != from || it->to != to) return -1;
  return static_cast<int>(it - edges_.begin());
}

bool WeightedDigraph::has_edge(int from, int to) const { return find(from, to) >= 0; }

double WeightedDigraph::weight(int from, int to) const {
  const int idx = find(from, to);
  return idx < 0 ? 0.0 : edges_[idx].weight;
}

double WeightedDigraph::in_degree(int i) const {
  double d = 0.0;
  for (int j : in_[i]) d += weight(j, i);
  return d;
}

std::string_view to_string(GraphFamily family) noexcept {
  switch (family) {
    case GraphFamily::path: return "path";
    case GraphFamily::erdos_renyi: return "erdos_renyi";
    case GraphFamily::random_tree: return "random_tree";
    case GraphFamily::random_regular: return "random_regular";
    case GraphFamily::directed_cycle: return "directed_cycle";
    case GraphFamily::complete: return "complete";
    case GraphFamily::explicit_edges: return "explicit";
  }
  return "unknown";
}

GraphFamily parse_graph_family(std::string_view name) {
  for (auto f : {GraphFamily::path, GraphFamily::erdos_renyi, GraphFamily::random_tree,
                 GraphFamily::random_regular, GraphFamily::directed_cycle,
                 GraphFamily::complete, GraphFamily::explicit_edges}) {
    if (to_string(f) == name) return f;
  }
  if (name == "tree") return GraphFamily::random_tree;
  if (name == "regular" || name == "k_regular") return GraphFamily::random_regular;
  if (name == "random" || name == "er") return GraphFamily::erdos_renyi;
  if (name == "cycle") return GraphFamily::directed_cycle;
  throw Error(ErrorKind::config, "unknown graph family '" + std::string(name) + "'");
}

WeightedDigraph generate(const GraphFamilySpec& spec) {
  validate(spec);
  const int n = spec.n;
  std::vector<WeightedEdge> edges;
  switch (spec.family) {
    case GraphFamily::path:
      edges = path_edges(n);
      break;
    case GraphFamily::erdos_renyi:
      edges = erdos_renyi_edges(spec);
      break;
    case GraphFamily::random_tree:
      edges = random_tree_edges(spec);
      break;
    case GraphFamily::random_regular:
      edges = random_regular_edges(spec);
      break;
    case GraphFamily::directed_cycle:
      for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
      break;
    case GraphFamily::complete:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) edges.push_back({i, j, 1.0});
      break;
    case GraphFamily::explicit_edges:
      edges = spec.edges;
      break;
  }
  return WeightedDigraph(n, edges);
}

std::vector<std::vector<int>> distances(const WeightedDigraph& g) {
  const int n = g.size();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, kUnreachable));
  std::deque<int> frontier;
  for (int s = 0; s < n; ++s) {
    auto& row = dist[s];
    row[s] = 0;
    frontier.assign(1, s);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop_front();
      for (int v : g.out_neighbors(u)) {
        if (row[v] == kUnreachable) {
          row[v] = row[u] + 1;
          frontier.push_back(v);
        }
      }
    }
  }
  return dist;
}

bool is_strongly_connected(const WeightedDigraph& g) {
  const int n = g.size();
  if (n <= 1) return true;
  // Forward and backward reachability from node 0.
  auto reaches_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : forward ? g.out_neighbors(u) : g.in_neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(true) && reaches_all(false);
}

WeightedDigraph union_graph(std::span<const WeightedDigraph> graphs) {
  if (graphs.empty()) parameter_error("union_graph: empty sequence");
  const int n = graphs.front().size();
  std::vector<WeightedEdge> merged;
  for (const auto& g : graphs) {
    if (g.size() != n) parameter_error("union_graph: node counts differ");
    merged.insert(merged.end(), g.edges().begin(), g.edges().end());
  }
  std::stable_sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  std::vector<WeightedEdge> edges;
  for (const auto& e : merged) {
    if (!edges.empty() && edges.back().from == e.from && edges.back().to == e.to) {
      edges.back().weight += e.weight;
    } else {
      edges.push_back(e);
    }
  }
  return WeightedDigraph(n, edges);
}

RowMatrix laplacian(const WeightedDigraph& g) {
  const int n = g.size();
  RowMatrix lap = RowMatrix::Zero(n, n);
  for (const auto& e : g.edges()) {
    lap(e.to, e.from) -= e.weight;
    lap(e.to, e.to) += e.weight;
  }
  return lap;
}

void write_edge_list(std::ostream& out, const WeightedDigraph& g) {
  out << "n=" << g.size() << '\n';
  for (const auto& e : g.edges())
    out << e.from + 1 << ' ' << e.to + 1 << ' ' << format_double(e.weight) << '\n';
}

WeightedDigraph read_edge_list(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<WeightedEdge> edges;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (n < 0) {
      if (line.compare(first, 2, "n=") != 0)
        throw Error(ErrorKind::config, "edge list: expected `n=<int>` header");
      n = std::stoi(line.substr(first + 2));
      continue;
    }
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    int i = 0, j = 0;
    double w = 1.0;
    if (!(fields >> i >> j)) {
      throw Error(ErrorKind::config, "edge list: malformed line " + std::to_string(line_no));
    }
    if (!(fields >> w)) w = 1.0;
    edges.push_back({i - 1, j - 1, w});
  }
  if (n < 0) throw Error(ErrorKind::config, "edge list: missing `n=<int>` header");
  return WeightedDigraph(n, edges);
}

}  // namespace odopt
