#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "wtensor/hypergraph.hpp"
#include "wtensor/symmetric_tensor.hpp"
#include "wtensor/w_structure.hpp"

namespace wtensor::cli {

/// Which tensor a hypergraph instance turns into.
enum class GraphTensor { Adjacency, Laplacian, Signless };

/// A generator name plus key=value parameters, e.g. "hyperstar:m=4,k=10".
struct GenSpec {
  std::string kind;
  std::map<std::string, std::string> params;

  int get_int(const std::string& key, std::optional<int> fallback = std::nullopt) const;
  double get_real(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
};

GenSpec parse_gen_spec(const std::string& text);

struct Instance {
  std::string label;
  SymmetricTensor tensor{2, 1};
  std::optional<UniformHypergraph> graph;
  /// Natural W-decomposition when the generator knows one.
  std::optional<WDecomposition> decomposition;
};

/// Builds hyperstar, hyperpath, hypertree, example31 or randomz instances.
Instance make_instance(const GenSpec& spec, GraphTensor as);

/// "1-2;2-3" style edge lists.
std::vector<std::pair<int, int>> parse_tree_edges(const std::string& text);
/// Random recursive tree on vertices 1..n: vertex v attaches to a uniform earlier vertex.
std::vector<std::pair<int, int>> random_tree(int n, std::uint64_t seed);

}  // namespace wtensor::cli
