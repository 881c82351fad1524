#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wtensor/symmetric_tensor.hpp"
#include "wtensor/w_structure.hpp"

namespace wtensor {

/// Simple m-uniform hypergraph on vertices 1..n.
class UniformHypergraph {
 public:
  /// Edges are sorted internally; throws InvalidHypergraph on repeated vertices,
  /// wrong edge size, out-of-range ids or duplicate edges.
  UniformHypergraph(int uniformity, int num_vertices, std::vector<std::vector<int>> edges);

  int uniformity() const { return m_; }
  int num_vertices() const { return n_; }
  const std::vector<std::vector<int>>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  int degree(int vertex) const { return degrees_[vertex - 1]; }
  const std::vector<int>& degrees() const { return degrees_; }

 private:
  int m_;
  int n_;
  std::vector<std::vector<int>> edges_;
  std::vector<int> degrees_;
};

SymmetricTensor adjacency_tensor(const UniformHypergraph& g);
SymmetricTensor laplacian(const UniformHypergraph& g);
SymmetricTensor signless_laplacian(const UniformHypergraph& g);

/// Center is vertex 1; edge j adds vertices (m-1)(j-1)+2 .. (m-1)j+1.
UniformHypergraph gen_hyper_star(int m, int k);
/// Edge l covers (l-1)(m-1)+1 .. l(m-1)+1.
UniformHypergraph gen_hyper_path(int m, int k);
/// Each tree edge gains m-2 fresh vertices: the smallest labels not used by
/// the tree, handed out in tree-edge order. n = |V0| + (m-2)|E0|.
UniformHypergraph gen_hyper_tree(const std::vector<std::pair<int, int>>& tree_edges, int m);

/// One block per hyperedge; shared vertices split their degree equally.
/// `signless` selects D + A instead of D - A.
WDecomposition laplacian_w_decomposition(const UniformHypergraph& g, bool signless = false);

/// Text format: "m n" on the first line, then one edge per line.
UniformHypergraph read_edge_list(std::istream& in);
UniformHypergraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const UniformHypergraph& g);
void write_edge_list_file(const std::string& path, const UniformHypergraph& g);

}  // namespace wtensor
