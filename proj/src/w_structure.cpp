#include "wtensor/w_structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "wtensor/error.hpp"
#include "wtensor/tensor_io.hpp"

namespace wtensor {

namespace {

std::string format_index(const MultiIndex& a) {
  std::ostringstream os;
  os << '(';
  for (int k = 0; k < a.order(); ++k) os << (k ? "," : "") << a[k];
  os << ')';
  return os.str();
}

int overlap(const std::vector<char>& in_union, const std::vector<int>& gamma) {
  int c = 0;
  for (int i : gamma) c += in_union[i - 1];
  return c;
}

bool overlap_ok(const std::vector<WBlock>& blocks, const std::vector<int>& order, int n) {
  std::vector<char> in_union(n, 0);
  for (std::size_t p = 0; p < order.size(); ++p) {
    const auto& g = blocks[order[p]].gamma;
    if (p > 0 && overlap(in_union, g) > 1) return false;
    for (int i : g) in_union[i - 1] = 1;
  }
  return true;
}

// Starts from the first block; prefers blocks touching the union in exactly one
// index, then disjoint ones, lowest position first.
std::optional<std::vector<int>> greedy_ordering(const std::vector<WBlock>& blocks, int n) {
  std::vector<char> in_union(n, 0), used(blocks.size(), 0);
  std::vector<int> order{0};
  used[0] = 1;
  for (int i : blocks[0].gamma) in_union[i - 1] = 1;
  while (order.size() < blocks.size()) {
    int pick = -1;
    for (int want : {1, 0}) {
      for (std::size_t l = 0; l < blocks.size() && pick < 0; ++l) {
        if (!used[l] && overlap(in_union, blocks[l].gamma) == want) pick = static_cast<int>(l);
      }
      if (pick >= 0) break;
    }
    if (pick < 0) return std::nullopt;
    used[pick] = 1;
    order.push_back(pick);
    for (int i : blocks[pick].gamma) in_union[i - 1] = 1;
  }
  return order;
}

std::optional<MultiIndex> single_mixed(const SymmetricTensor& sub) {
  for (const auto& t : sub.terms()) {
    if (!t.index.is_diagonal()) return t.index;
  }
  return std::nullopt;
}

void fill_coverage(WDecomposition& w) {
  w.coverage.assign(w.global_dim, {});
  for (std::size_t l = 0; l < w.blocks.size(); ++l) {
    for (int i : w.blocks[l].gamma) w.coverage[i - 1].push_back(static_cast<int>(l));
  }
}

}  // namespace

const char* to_string(BlockKind kind) {
  return kind == BlockKind::SingleMixedTerm ? "SingleMixedTerm" : "NonnegOffDiagonal";
}

int WBlock::local_of(int global) const {
  auto it = std::lower_bound(gamma.begin(), gamma.end(), global);
  return (it != gamma.end() && *it == global) ? static_cast<int>(it - gamma.begin()) + 1 : 0;
}

SymmetricTensor WDecomposition::assemble() const {
  TensorBuilder b(order, global_dim);
  for (const auto& blk : blocks) b.add_tensor(embed(blk.subtensor, blk.gamma, global_dim));
  return b.build();
}

std::optional<BlockKind> classify_block(const SymmetricTensor& sub) {
  const std::size_t mixed = sub.num_mixed_terms();
  if (mixed == 1) return BlockKind::SingleMixedTerm;
  if (sub.is_essentially_nonnegative()) return BlockKind::NonnegOffDiagonal;
  return std::nullopt;
}

SymmetricTensor embed(const SymmetricTensor& sub, const std::vector<int>& gamma, int global_dim) {
  TensorBuilder b(sub.order(), global_dim);
  std::vector<int> raw(sub.order());
  for (const auto& t : sub.terms()) {
    for (int k = 0; k < sub.order(); ++k) raw[k] = gamma[t.index[k] - 1];
    b.add(MultiIndex::canonicalize(raw, global_dim), t.coeff);
  }
  return b.build();
}

SymmetricTensor restrict_to(const SymmetricTensor& t, const std::vector<int>& gamma) {
  const int local_dim = static_cast<int>(gamma.size());
  TensorBuilder b(t.order(), local_dim);
  std::vector<int> raw(t.order());
  for (const auto& term : t.terms()) {
    bool inside = true;
    for (int k = 0; k < t.order() && inside; ++k) {
      auto it = std::lower_bound(gamma.begin(), gamma.end(), term.index[k]);
      if (it == gamma.end() || *it != term.index[k]) {
        inside = false;
      } else {
        raw[k] = static_cast<int>(it - gamma.begin()) + 1;
      }
    }
    if (inside) b.add(MultiIndex::canonicalize(raw, local_dim), term.coeff);
  }
  return b.build();
}

WDecomposition validate(const SymmetricTensor& t, std::vector<std::vector<int>> gamma,
                        std::vector<SymmetricTensor> subtensors) {
  const int n = t.dim();
  if (gamma.empty()) throw Error(ErrorCode::InvalidDecomposition, "no index sets given");
  if (gamma.size() != subtensors.size()) {
    throw Error(ErrorCode::InvalidDecomposition, "index set and subtensor counts differ");
  }
  WDecomposition w;
  w.order = t.order();
  w.global_dim = n;
  std::set<std::vector<int>> seen;
  for (std::size_t l = 0; l < gamma.size(); ++l) {
    auto g = gamma[l];
    std::sort(g.begin(), g.end());
    if (g.empty() || std::adjacent_find(g.begin(), g.end()) != g.end()) {
      throw Error(ErrorCode::InvalidDecomposition, "index set " + std::to_string(l + 1) +
                                                       " is empty or repeats an index");
    }
    if (g.front() < 1 || g.back() > n) {
      throw Error(ErrorCode::InvalidDecomposition, "index set " + std::to_string(l + 1) +
                                                       " leaves [1, n]");
    }
    if (!seen.insert(g).second) {
      throw Error(ErrorCode::InvalidDecomposition, "index sets must be pairwise distinct");
    }
    const auto& sub = subtensors[l];
    if (sub.order() != t.order()) {
      throw Error(ErrorCode::OrderMismatch, "subtensor " + std::to_string(l + 1) + " has wrong order");
    }
    if (sub.dim() != static_cast<int>(g.size())) {
      throw Error(ErrorCode::InvalidDecomposition,
                  "subtensor " + std::to_string(l + 1) + " dimension differs from its index set");
    }
    w.blocks.push_back({std::move(g), sub, BlockKind::NonnegOffDiagonal, std::nullopt});
  }

  std::vector<char> covered(n, 0);
  for (const auto& b : w.blocks) {
    for (int i : b.gamma) covered[i - 1] = 1;
  }
  for (int i = 1; i <= n; ++i) {
    if (!covered[i - 1]) {
      throw Error(ErrorCode::CoverageGap, "index " + std::to_string(i) + " is in no block");
    }
  }

  std::vector<int> natural(w.blocks.size());
  std::iota(natural.begin(), natural.end(), 0);
  if (overlap_ok(w.blocks, natural, n)) {
    w.ordering = natural;
  } else if (auto g = greedy_ordering(w.blocks, n)) {
    w.ordering = *g;
    w.reordered = true;
  } else {
    throw Error(ErrorCode::OverlapTooLarge,
                "no block ordering keeps every overlap with the preceding union at most one index");
  }

  // Condition (ii): exact comparison of monomial coefficient maps.
  const SymmetricTensor sum = w.assemble();
  std::map<MultiIndex, std::pair<double, double>> cmp;
  for (const auto& term : t.terms()) cmp[term.index].first = term.coeff;
  for (const auto& term : sum.terms()) cmp[term.index].second = term.coeff;
  for (const auto& [alpha, v] : cmp) {
    const double tol = 1e-12 * std::max(1.0, std::abs(v.first));
    if (std::abs(v.first - v.second) > tol) {
      std::ostringstream os;
      os.precision(17);
      os << "monomial " << format_index(alpha) << ": tensor " << v.first << ", blocks sum to "
         << v.second;
      throw Error(ErrorCode::SumMismatch, os.str());
    }
  }

  for (std::size_t l = 0; l < w.blocks.size(); ++l) {
    auto& b = w.blocks[l];
    auto kind = classify_block(b.subtensor);
    if (!kind) {
      throw Error(ErrorCode::BlockNotW, "block " + std::to_string(l + 1) +
                                            " has several mixed terms, some negative");
    }
    b.kind = *kind;
    if (b.kind == BlockKind::SingleMixedTerm) b.mixed = single_mixed(b.subtensor);
  }
  fill_coverage(w);
  return w;
}

std::optional<WDecomposition> detect(const SymmetricTensor& t) {
  const int n = t.dim();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::vector<char> touched(n, 0);
  for (const auto& term : t.terms()) {
    if (term.index.is_diagonal()) continue;
    const auto sup = term.index.support();
    for (int i : sup) touched[i - 1] = 1;
    for (std::size_t k = 1; k < sup.size(); ++k) {
      const int a = find(sup[0] - 1), b = find(sup[k] - 1);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  std::vector<std::vector<int>> gamma;
  if (std::none_of(touched.begin(), touched.end(), [](char c) { return c != 0; })) {
    gamma.emplace_back(n);
    std::iota(gamma.back().begin(), gamma.back().end(), 1);
  } else {
    // Roots are the smallest member of each component, so blocks come out
    // sorted by smallest index.
    std::map<int, std::vector<int>> comps;
    for (int i = 0; i < n; ++i) comps[touched[i] ? find(i) : i].push_back(i + 1);
    for (auto& [root, members] : comps) gamma.push_back(std::move(members));
  }

  std::vector<SymmetricTensor> subs;
  subs.reserve(gamma.size());
  for (const auto& g : gamma) {
    SymmetricTensor sub = restrict_to(t, g);
    if (!classify_block(sub)) return std::nullopt;
    subs.push_back(std::move(sub));
  }
  return validate(t, std::move(gamma), std::move(subs));
}

WDecomposition reallocate_diagonal(const WDecomposition& w,
                                   const std::vector<std::vector<double>>& weights) {
  const int n = w.global_dim;
  if (static_cast<int>(weights.size()) != n) {
    throw Error(ErrorCode::WeightSumMismatch, "one weight list per index is required");
  }
  const SymmetricTensor global = w.assemble();
  std::vector<TensorBuilder> builders;
  for (const auto& b : w.blocks) {
    TensorBuilder tb(w.order, static_cast<int>(b.gamma.size()));
    for (const auto& term : b.subtensor.terms()) {
      if (!term.index.is_diagonal()) tb.add(term.index, term.coeff);
    }
    builders.push_back(std::move(tb));
  }
  for (int i = 1; i <= n; ++i) {
    const auto& cov = w.coverage[i - 1];
    const auto& wi = weights[i - 1];
    if (wi.size() != cov.size()) {
      throw Error(ErrorCode::WeightSumMismatch,
                  "index " + std::to_string(i) + " needs " + std::to_string(cov.size()) + " weights");
    }
    const double total = std::accumulate(wi.begin(), wi.end(), 0.0);
    const double d = global.diagonal(i);
    if (std::abs(total - d) > 1e-12 * std::max(1.0, std::abs(d))) {
      throw Error(ErrorCode::WeightSumMismatch, "weights of index " + std::to_string(i) +
                                                    " sum to " + std::to_string(total) +
                                                    ", diagonal is " + std::to_string(d));
    }
    for (std::size_t k = 0; k < cov.size(); ++k) {
      const auto& blk = w.blocks[cov[k]];
      builders[cov[k]].add(MultiIndex::diagonal(blk.local_of(i), w.order), wi[k]);
    }
  }
  std::vector<std::vector<int>> gamma;
  std::vector<SymmetricTensor> subs;
  for (std::size_t l = 0; l < w.blocks.size(); ++l) {
    gamma.push_back(w.blocks[l].gamma);
    subs.push_back(builders[l].build());
  }
  return validate(global, std::move(gamma), std::move(subs));
}

nlohmann::json decomposition_to_json(const WDecomposition& w) {
  nlohmann::json gamma = nlohmann::json::array(), subs = nlohmann::json::array();
  for (const auto& b : w.blocks) {
    gamma.push_back(b.gamma);
    subs.push_back(tensor_to_json(b.subtensor));
  }
  return {{"gamma", gamma}, {"subtensors", subs}};
}

WDecomposition decomposition_from_json(const SymmetricTensor& t, const nlohmann::json& j) {
  try {
    auto gamma = j.at("gamma").get<std::vector<std::vector<int>>>();
    std::vector<SymmetricTensor> subs;
    for (const auto& s : j.at("subtensors")) subs.push_back(tensor_from_json(s));
    return validate(t, std::move(gamma), std::move(subs));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace wtensor
