#pragma once

#include <compare>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace wtensor {

/// Sorted (nondecreasing) list of 1-based coordinates; identifies one monomial
/// x_{i1} x_{i2} ... x_{im} of a homogeneous polynomial.
class MultiIndex {
 public:
  MultiIndex() = default;

  /// Sorts `raw` and checks every coordinate lies in [1, dim].
  static MultiIndex canonicalize(std::span<const int> raw, int dim);
  static MultiIndex canonicalize(std::initializer_list<int> raw, int dim) {
    return canonicalize(std::span<const int>(raw.begin(), raw.size()), dim);
  }
  /// The pure power x_i^order.
  static MultiIndex diagonal(int i, int order);

  int order() const { return static_cast<int>(idx_.size()); }
  std::span<const int> indices() const { return idx_; }
  int operator[](std::size_t k) const { return idx_[k]; }

  bool is_diagonal() const;
  /// (index, multiplicity) pairs, sorted by index.
  std::vector<std::pair<int, int>> exponents() const;
  /// Distinct indices, sorted.
  std::vector<int> support() const;
  /// m! / prod_j mult_j! : number of index tuples that collapse onto this monomial.
  double multinomial() const;
  /// Each coordinate repeated twice (x^alpha -> x^{2 alpha}).
  MultiIndex doubled() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  explicit MultiIndex(std::vector<int> sorted) : idx_(std::move(sorted)) {}
  std::vector<int> idx_;
};

}  // namespace wtensor
