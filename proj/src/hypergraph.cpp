#include "wtensor/hypergraph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "wtensor/error.hpp"

namespace wtensor {

UniformHypergraph::UniformHypergraph(int uniformity, int num_vertices,
                                     std::vector<std::vector<int>> edges)
    : m_(uniformity), n_(num_vertices), edges_(std::move(edges)), degrees_(num_vertices, 0) {
  if (m_ < 2) throw Error(ErrorCode::InvalidHypergraph, "uniformity must be at least 2");
  if (n_ < 1) throw Error(ErrorCode::InvalidHypergraph, "need at least one vertex");
  std::set<std::vector<int>> seen;
  for (auto& e : edges_) {
    std::sort(e.begin(), e.end());
    if (static_cast<int>(e.size()) != m_) {
      throw Error(ErrorCode::InvalidHypergraph, "edge with " + std::to_string(e.size()) +
                                                    " vertices in a " + std::to_string(m_) +
                                                    "-uniform hypergraph");
    }
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
      throw Error(ErrorCode::InvalidHypergraph, "edge repeats a vertex");
    }
    if (e.front() < 1 || e.back() > n_) {
      throw Error(ErrorCode::InvalidHypergraph, "vertex id outside [1, n]");
    }
    if (!seen.insert(e).second) throw Error(ErrorCode::InvalidHypergraph, "duplicate edge");
    for (int v : e) ++degrees_[v - 1];
  }
}

namespace {

SymmetricTensor degree_plus_adjacency(const UniformHypergraph& g, double adj_sign,
                                      bool with_degrees) {
  const int m = g.uniformity();
  TensorBuilder b(m, g.num_vertices());
  if (with_degrees) {
    for (int i = 1; i <= g.num_vertices(); ++i) {
      if (g.degree(i) != 0) b.add(MultiIndex::diagonal(i, m), g.degree(i));
    }
  }
  // Entry 1/(m-1)! on each of m! permutations gives monomial coefficient m.
  for (const auto& e : g.edges()) b.add(MultiIndex::canonicalize(e, g.num_vertices()), adj_sign * m);
  return b.build();
}

}  // namespace

SymmetricTensor adjacency_tensor(const UniformHypergraph& g) {
  return degree_plus_adjacency(g, 1.0, false);
}

SymmetricTensor laplacian(const UniformHypergraph& g) { return degree_plus_adjacency(g, -1.0, true); }

SymmetricTensor signless_laplacian(const UniformHypergraph& g) {
  return degree_plus_adjacency(g, 1.0, true);
}

UniformHypergraph gen_hyper_star(int m, int k) {
  if (m < 2 || k < 1) throw Error(ErrorCode::InvalidArgument, "hyper-star needs m >= 2 and k >= 1");
  std::vector<std::vector<int>> edges;
  for (int j = 1; j <= k; ++j) {
    std::vector<int> e{1};
    for (int v = (m - 1) * (j - 1) + 2; v <= (m - 1) * j + 1; ++v) e.push_back(v);
    edges.push_back(std::move(e));
  }
  return UniformHypergraph(m, k * (m - 1) + 1, std::move(edges));
}

UniformHypergraph gen_hyper_path(int m, int k) {
  if (m < 2 || k < 1) throw Error(ErrorCode::InvalidArgument, "hyper-path needs m >= 2 and k >= 1");
  std::vector<std::vector<int>> edges;
  for (int l = 1; l <= k; ++l) {
    std::vector<int> e(m);
    std::iota(e.begin(), e.end(), (l - 1) * (m - 1) + 1);
    edges.push_back(std::move(e));
  }
  return UniformHypergraph(m, k * (m - 1) + 1, std::move(edges));
}

UniformHypergraph gen_hyper_tree(const std::vector<std::pair<int, int>>& tree_edges, int m) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "hyper-tree needs m >= 2");
  if (tree_edges.empty()) throw Error(ErrorCode::NotATree, "tree has no edges");
  std::set<int> tree_vertices;
  for (const auto& [u, v] : tree_edges) {
    if (u == v) throw Error(ErrorCode::NotATree, "self-loop in tree");
    tree_vertices.insert(u);
    tree_vertices.insert(v);
  }
  if (tree_edges.size() + 1 != tree_vertices.size()) {
    throw Error(ErrorCode::NotATree, std::to_string(tree_edges.size()) + " edges on " +
                                         std::to_string(tree_vertices.size()) + " vertices");
  }
  // Connectivity via union-find over the compacted vertex labels.
  std::map<int, int> pos;
  for (int v : tree_vertices) pos.emplace(v, static_cast<int>(pos.size()));
  std::vector<int> parent(pos.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& [u, v] : tree_edges) {
    const int a = find(pos[u]), b = find(pos[v]);
    if (a == b) throw Error(ErrorCode::NotATree, "tree edges contain a cycle");
    parent[a] = b;
  }

  const int n = static_cast<int>(tree_vertices.size() + (m - 2) * tree_edges.size());
  if (*tree_vertices.begin() < 1 || *tree_vertices.rbegin() > n) {
    throw Error(ErrorCode::InvalidHypergraph,
                "tree vertex labels must lie in [1, " + std::to_string(n) + "]");
  }
  int next_fresh = 1;
  auto fresh = [&] {
    while (tree_vertices.count(next_fresh)) ++next_fresh;
    return next_fresh++;
  };
  std::vector<std::vector<int>> edges;
  for (const auto& [u, v] : tree_edges) {
    std::vector<int> e{u, v};
    for (int r = 0; r < m - 2; ++r) e.push_back(fresh());
    edges.push_back(std::move(e));
  }
  return UniformHypergraph(m, n, std::move(edges));
}

WDecomposition laplacian_w_decomposition(const UniformHypergraph& g, bool signless) {
  const int m = g.uniformity();
  const auto& edges = g.edges();
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      std::vector<int> common;
      std::set_intersection(edges[a].begin(), edges[a].end(), edges[b].begin(), edges[b].end(),
                            std::back_inserter(common));
      if (common.size() >= 2) {
        throw Error(ErrorCode::UnsupportedTopology,
                    "edges " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                        " share " + std::to_string(common.size()) + " vertices");
      }
    }
  }
  std::vector<int> isolated;
  for (int i = 1; i <= g.num_vertices(); ++i) {
    if (g.degree(i) == 0) isolated.push_back(i);
  }
  if (!isolated.empty()) {
    throw Error(ErrorCode::UnsupportedTopology,
                "vertex " + std::to_string(isolated.front()) + " lies in no edge");
  }

  const SymmetricTensor target = signless ? signless_laplacian(g) : laplacian(g);
  std::vector<std::vector<int>> gamma;
  std::vector<SymmetricTensor> subs;
  for (const auto& e : edges) {
    TensorBuilder b(m, m);
    for (int k = 1; k <= m; ++k) b.add(MultiIndex::diagonal(k, m), 1.0);
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 1);
    b.add(MultiIndex::canonicalize(all, m), signless ? m : -m);
    gamma.push_back(e);
    subs.push_back(b.build());
  }
  try {
    return validate(target, std::move(gamma), std::move(subs));
  } catch (const Error& err) {
    if (err.code() == ErrorCode::OverlapTooLarge) {
      throw Error(ErrorCode::UnsupportedTopology, "edges do not form a hyper-star or hyper-tree");
    }
    throw;
  }
}

UniformHypergraph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      const auto p = line.find_first_not_of(" \t\r");
      if (p != std::string::npos && line[p] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw Error(ErrorCode::ParseError, "edge list is empty");
  int m = 0, n = 0;
  {
    std::istringstream hdr(line);
    if (!(hdr >> m >> n)) throw Error(ErrorCode::ParseError, "edge list header must be 'm n'");
  }
  std::vector<std::vector<int>> edges;
  while (next_line()) {
    std::istringstream row(line);
    std::vector<int> e;
    int v = 0;
    while (row >> v) e.push_back(v);
    if (!row.eof()) throw Error(ErrorCode::ParseError, "non-integer vertex id: " + line);
    edges.push_back(std::move(e));
  }
  return UniformHypergraph(m, n, std::move(edges));
}

UniformHypergraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const UniformHypergraph& g) {
  out << g.uniformity() << ' ' << g.num_vertices() << '\n';
  for (const auto& e : g.edges()) {
    for (std::size_t k = 0; k < e.size(); ++k) out << (k ? " " : "") << e[k];
    out << '\n';
  }
}

void write_edge_list_file(const std::string& path, const UniformHypergraph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  write_edge_list(out, g);
}

}  // namespace wtensor
