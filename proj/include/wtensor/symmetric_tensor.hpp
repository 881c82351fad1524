#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "wtensor/multi_index.hpp"

namespace wtensor {

struct Term {
  MultiIndex index;
  double coeff = 0.0;  ///< coefficient of x^index in A x^m
};

/// Sparse symmetric tensor of order m and dimension n, stored as the
/// coefficients of its homogeneous polynomial A x^m ("monomial form").
/// Symmetric entries a_{i1...im} are a derived view: coeff = multinomial * entry.
///
/// Immutable after construction. Terms are sorted by multi-index and nonzero.
class SymmetricTensor {
 public:
  SymmetricTensor(int order, int dim);

  /// Coefficients keyed by canonical multi-index; duplicates are rejected.
  static SymmetricTensor from_monomials(int order, int dim,
                                        std::vector<std::pair<MultiIndex, double>> coeffs);
  /// Symmetric entries keyed by canonical multi-index; duplicates are rejected.
  static SymmetricTensor from_entries(int order, int dim,
                                      std::vector<std::pair<MultiIndex, double>> entries);
  static SymmetricTensor identity(int order, int dim);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }

  double coeff(const MultiIndex& alpha) const;
  /// Coefficient of x_i^m (1-based i).
  double diagonal(int i) const;
  /// Symmetric-entry view of one multi-index.
  double entry(const MultiIndex& alpha) const;
  std::vector<std::pair<MultiIndex, double>> to_entries() const;

  /// A x^m.
  double eval(std::span<const double> x) const;
  /// A x^{m-1}; satisfies dot(x, apply(x)) == eval(x).
  std::vector<double> apply(std::span<const double> x) const;

  SymmetricTensor add_scaled_identity(double c) const;
  SymmetricTensor scaled(double s) const;
  SymmetricTensor operator+(const SymmetricTensor& other) const;
  SymmetricTensor operator-() const { return scaled(-1.0); }

  /// True when every off-diagonal coefficient is >= 0 (and the diagonal is unrestricted).
  bool is_essentially_nonnegative() const;
  bool is_nonnegative() const;
  std::size_t num_mixed_terms() const;

 private:
  friend class TensorBuilder;
  int order_;
  int dim_;
  std::vector<Term> terms_;
};

/// Accumulates monomial coefficients (summing repeated keys) and emits a tensor.
class TensorBuilder {
 public:
  TensorBuilder(int order, int dim) : order_(order), dim_(dim) {}

  TensorBuilder& add(const MultiIndex& alpha, double coeff);
  TensorBuilder& add(std::initializer_list<int> raw, double coeff) {
    return add(MultiIndex::canonicalize(raw, dim_), coeff);
  }
  TensorBuilder& add_tensor(const SymmetricTensor& t);

  /// Drops coefficients with |c| <= drop_below.
  SymmetricTensor build(double drop_below = 0.0) const;

 private:
  int order_;
  int dim_;
  std::map<MultiIndex, double> acc_;
};

}  // namespace wtensor
