#include "wtensor/copositivity.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "wtensor/baselines.hpp"
#include "wtensor/error.hpp"
#include "wtensor/w_structure.hpp"

namespace wtensor {

const char* to_string(ZBlockKind k) {
  return k == ZBlockKind::OneMixedTerm ? "OneMixedTerm" : "AllNonpositiveMixed";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Copositive: return "Copositive";
    case Verdict::NotCopositive: return "NotCopositive";
    case Verdict::NotExtendedZ: return "NotExtendedZ";
  }
  return "?";
}

namespace {

std::optional<ZBlockKind> classify(const std::vector<double>& mixed_coeffs) {
  if (mixed_coeffs.size() == 1) return ZBlockKind::OneMixedTerm;
  for (double c : mixed_coeffs) {
    if (c > 0.0) return std::nullopt;
  }
  return ZBlockKind::AllNonpositiveMixed;
}

}  // namespace

std::optional<ExtendedZStructure> detect_extended_z(const SymmetricTensor& t, std::string* reason) {
  const int n = t.dim();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& term : t.terms()) {
    if (term.index.is_diagonal()) continue;
    const auto sup = term.index.support();
    for (std::size_t k = 1; k < sup.size(); ++k) {
      int a = find(sup[0] - 1), b = find(sup[k] - 1);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  // Roots are the smallest member of each component, so ordering by root
  // orders blocks by their smallest index.
  std::vector<int> block_of_root(n, -1);
  ExtendedZStructure s;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (block_of_root[r] < 0) {
      block_of_root[r] = static_cast<int>(s.blocks.size());
      s.blocks.emplace_back();
    }
    s.blocks[block_of_root[r]].push_back(i + 1);
  }
  std::vector<std::vector<double>> mixed(s.blocks.size());
  s.diagonal.assign(n, 0.0);
  for (const auto& term : t.terms()) {
    if (term.index.is_diagonal()) {
      s.diagonal[term.index[0] - 1] = term.coeff;
    } else {
      mixed[block_of_root[find(term.index[0] - 1)]].push_back(term.coeff);
    }
  }
  for (std::size_t l = 0; l < s.blocks.size(); ++l) {
    auto kind = classify(mixed[l]);
    if (!kind) {
      if (reason) {
        *reason = "block starting at index " + std::to_string(s.blocks[l][0]) + " has " +
                  std::to_string(mixed[l].size()) + " mixed terms, some positive";
      }
      return std::nullopt;
    }
    s.kinds.push_back(*kind);
  }
  return s;
}

bool check_extended_z(const SymmetricTensor& t, const ExtendedZStructure& s) {
  const int n = t.dim();
  if (s.kinds.size() != s.blocks.size() || static_cast<int>(s.diagonal.size()) != n) return false;
  std::vector<int> owner(n, -1);
  for (std::size_t l = 0; l < s.blocks.size(); ++l) {
    for (int i : s.blocks[l]) {
      if (i < 1 || i > n || owner[i - 1] >= 0) return false;
      owner[i - 1] = static_cast<int>(l);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) return false;
  std::vector<std::vector<double>> mixed(s.blocks.size());
  for (const auto& term : t.terms()) {
    if (term.index.is_diagonal()) {
      if (s.diagonal[term.index[0] - 1] != term.coeff) return false;
      continue;
    }
    const int l = owner[term.index[0] - 1];
    for (int i : term.index.indices()) {
      if (owner[i - 1] != l) return false;
    }
    mixed[l].push_back(term.coeff);
  }
  for (int i = 1; i <= n; ++i) {
    if (t.diagonal(i) != s.diagonal[i - 1]) return false;
  }
  for (std::size_t l = 0; l < s.blocks.size(); ++l) {
    const auto kind = s.kinds[l];
    if (kind == ZBlockKind::OneMixedTerm && mixed[l].size() != 1) return false;
    if (kind == ZBlockKind::AllNonpositiveMixed &&
        std::any_of(mixed[l].begin(), mixed[l].end(), [](double c) { return c > 0.0; })) {
      return false;
    }
  }
  return true;
}

SymmetricTensor lift_even(const SymmetricTensor& t) {
  TensorBuilder b(2 * t.order(), t.dim());
  for (const auto& term : t.terms()) b.add(term.index.doubled(), term.coeff);
  return b.build();
}

CopositivityVerdict is_copositive(const SymmetricTensor& t, const EigConfig& cfg) {
  CopositivityVerdict out;
  std::string reason;
  out.structure = detect_extended_z(t, &reason);
  if (!out.structure) {
    out.verdict = Verdict::NotExtendedZ;
    out.message = reason + "; the SOS test is exact only for extended Z-tensors (a simplex ascent gives a heuristic)";
    return out;
  }
  // Extended Z makes the negated lift a W-tensor over the same (disjoint) blocks.
  const SymmetricTensor neg = -lift_even(t);
  std::vector<SymmetricTensor> subs;
  for (const auto& g : out.structure->blocks) subs.push_back(restrict_to(neg, g));
  const WDecomposition w = validate(neg, out.structure->blocks, subs);
  EigConfig c = cfg;
  if (c.method != Method::ClosedForm) c.method = Method::Block;
  out.eig = max_h_eigenvalue(w, c);
  out.bound = out.eig->lambda;
  out.borderline = std::abs(out.bound) <= kCopositiveThreshold;
  out.verdict = out.bound <= kCopositiveThreshold ? Verdict::Copositive : Verdict::NotCopositive;
  if (out.borderline) out.message = "bound within the verdict threshold of zero";
  if (out.verdict == Verdict::NotCopositive) {
    AscentConfig ac;
    ac.starts = 20;
    const auto asc = projected_ascent(neg, ac);
    std::vector<double> y(asc.x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sum += y[i] = asc.x[i] * asc.x[i];
    for (double& v : y) v /= sum;
    if (t.eval(y) < 0.0) out.witness = std::move(y);
  }
  return out;
}

SymmetricTensor gen_random_extended_z(int m, int n, int s, int k, double M, std::uint64_t seed) {
  if (m < 2 || s < 1 || k < 1) throw Error(ErrorCode::InvalidArgument, "need m >= 2, s >= 1, k >= 1");
  if (n != s * k) {
    throw Error(ErrorCode::DimensionMismatch,
                "n = " + std::to_string(n) + " is not s*k = " + std::to_string(s * k));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  std::shuffle(perm.begin(), perm.end(), rng);

  TensorBuilder b(m, n);
  for (int i = 1; i <= n; ++i) b.add(MultiIndex::diagonal(i, m), M);
  for (int l = 0; l < s; ++l) {
    std::vector<int> gamma(perm.begin() + l * k, perm.begin() + (l + 1) * k);
    std::sort(gamma.begin(), gamma.end());
    if (k == 1) continue;  // a single index carries no mixed term
    if (l + 1 < s) {
      std::uniform_int_distribution<int> pick(0, k - 1);
      std::vector<int> raw(m);
      MultiIndex alpha;
      do {
        for (int& v : raw) v = gamma[pick(rng)];
        alpha = MultiIndex::canonicalize(raw, n);
      } while (alpha.is_diagonal());
      b.add(alpha, alpha.multinomial() * unit(rng));
    } else {
      // Every non-diagonal multiset over the block, in lexicographic order.
      std::vector<int> pos(m, 0);
      while (true) {
        std::vector<int> raw(m);
        for (int j = 0; j < m; ++j) raw[j] = gamma[pos[j]];
        auto alpha = MultiIndex::canonicalize(raw, n);
        if (!alpha.is_diagonal()) b.add(alpha, -alpha.multinomial() * unit(rng));
        int j = m - 1;
        while (j >= 0 && pos[j] == k - 1) --j;
        if (j < 0) break;
        ++pos[j];
        for (int q = j + 1; q < m; ++q) pos[q] = pos[j];
      }
    }
  }
  return b.build();
}

}  // namespace wtensor
