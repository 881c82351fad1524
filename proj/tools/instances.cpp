#include "instances.hpp"

#include <random>
#include <sstream>

#include "wtensor/copositivity.hpp"
#include "wtensor/error.hpp"
#include "wtensor/generators.hpp"

namespace wtensor::cli {

namespace {

Error bad(const std::string& what) { return Error(ErrorCode::InvalidArgument, what); }

}  // namespace

int GenSpec::get_int(const std::string& key, std::optional<int> fallback) const {
  auto it = params.find(key);
  if (it == params.end()) {
    if (!fallback) throw bad(kind + " needs parameter '" + key + "'");
    return *fallback;
  }
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) throw bad("parameter " + key + "=" + it->second + " is not an integer");
  return v;
}

double GenSpec::get_real(const std::string& key, std::optional<double> fallback) const {
  auto it = params.find(key);
  if (it == params.end()) {
    if (!fallback) throw bad(kind + " needs parameter '" + key + "'");
    return *fallback;
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) throw bad("parameter " + key + "=" + it->second + " is not a number");
  return v;
}

std::string GenSpec::get_string(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

GenSpec parse_gen_spec(const std::string& text) {
  GenSpec spec;
  const auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw bad("expected key=value in generator spec, got '" + item + "'");
    spec.params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return spec;
}

std::vector<std::pair<int, int>> parse_tree_edges(const std::string& text) {
  std::vector<std::pair<int, int>> edges;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    int a = 0, b = 0;
    char dash = 0;
    std::stringstream e(item);
    if (!(e >> a >> dash >> b) || dash != '-') throw bad("tree edges look like 1-2;2-3, got '" + item + "'");
    edges.emplace_back(a, b);
  }
  return edges;
}

std::vector<std::pair<int, int>> random_tree(int n, std::uint64_t seed) {
  if (n < 2) throw bad("a random tree needs at least 2 vertices");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int v = 2; v <= n; ++v) {
    std::uniform_int_distribution<int> parent(1, v - 1);
    edges.emplace_back(parent(rng), v);
  }
  return edges;
}

Instance make_instance(const GenSpec& spec, GraphTensor as) {
  Instance inst;
  if (spec.kind == "example31") {
    const int n = spec.get_int("n");
    inst.tensor = gen_product_block_tensor(n);
    inst.label = "example31 n=" + std::to_string(n);
    return inst;
  }
  if (spec.kind == "randomz") {
    const int m = spec.get_int("m", 3);
    const int s = spec.get_int("s");
    const int k = spec.get_int("k");
    const int n = spec.get_int("n", s * k);
    const double M = spec.get_real("M");
    const auto seed = static_cast<std::uint64_t>(spec.get_int("seed", 1));
    inst.tensor = gen_random_extended_z(m, n, s, k, M, seed);
    inst.label = "randomz m=" + std::to_string(m) + " n=" + std::to_string(n);
    return inst;
  }

  const int m = spec.get_int("m", 4);
  if (spec.kind == "hyperstar") {
    inst.graph = gen_hyper_star(m, spec.get_int("k"));
  } else if (spec.kind == "hyperpath") {
    inst.graph = gen_hyper_path(m, spec.get_int("k"));
  } else if (spec.kind == "hypertree") {
    const auto tree = spec.params.count("tree")
                          ? parse_tree_edges(spec.params.at("tree"))
                          : random_tree(spec.get_int("n"), static_cast<std::uint64_t>(spec.get_int("seed", 1)));
    inst.graph = gen_hyper_tree(tree, m);
  } else {
    throw bad("unknown generator '" + spec.kind + "' (hyperstar, hyperpath, hypertree, example31, randomz)");
  }
  inst.label = spec.kind + " m=" + std::to_string(m) + " n=" + std::to_string(inst.graph->num_vertices());
  switch (as) {
    case GraphTensor::Adjacency:
      inst.tensor = adjacency_tensor(*inst.graph);
      break;
    case GraphTensor::Laplacian:
      inst.tensor = laplacian(*inst.graph);
      inst.decomposition = laplacian_w_decomposition(*inst.graph, false);
      break;
    case GraphTensor::Signless:
      inst.tensor = signless_laplacian(*inst.graph);
      inst.decomposition = laplacian_w_decomposition(*inst.graph, true);
      break;
  }
  return inst;
}

}  // namespace wtensor::cli
