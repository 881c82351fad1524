#include "wtensor/symmetric_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wtensor/error.hpp"

namespace wtensor {

namespace {

void check_shape(int order, int dim) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "order must be positive");
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
}

void check_key(const MultiIndex& alpha, int order, int dim) {
  if (alpha.order() != order) {
    throw Error(ErrorCode::OrderMismatch, "multi-index of length " + std::to_string(alpha.order()) +
                                              " in a tensor of order " + std::to_string(order));
  }
  for (int i : alpha.indices()) {
    if (i < 1 || i > dim) {
      throw Error(ErrorCode::InvalidIndex, "coordinate " + std::to_string(i) + " outside [1, " +
                                               std::to_string(dim) + "]");
    }
  }
}

std::vector<Term> sorted_unique(std::vector<std::pair<MultiIndex, double>> kv, int order, int dim,
                                bool entries) {
  for (const auto& [alpha, v] : kv) check_key(alpha, order, dim);
  std::sort(kv.begin(), kv.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(kv.size());
  for (std::size_t k = 0; k < kv.size(); ++k) {
    if (k > 0 && kv[k].first == kv[k - 1].first) {
      throw Error(ErrorCode::DuplicateEntry, "multi-index listed twice");
    }
    const double c = entries ? kv[k].second * kv[k].first.multinomial() : kv[k].second;
    if (c != 0.0) out.push_back({kv[k].first, c});
  }
  return out;
}

}  // namespace

SymmetricTensor::SymmetricTensor(int order, int dim) : order_(order), dim_(dim) {
  check_shape(order, dim);
}

SymmetricTensor SymmetricTensor::from_monomials(int order, int dim,
                                                std::vector<std::pair<MultiIndex, double>> coeffs) {
  SymmetricTensor t(order, dim);
  t.terms_ = sorted_unique(std::move(coeffs), order, dim, false);
  return t;
}

SymmetricTensor SymmetricTensor::from_entries(int order, int dim,
                                              std::vector<std::pair<MultiIndex, double>> entries) {
  SymmetricTensor t(order, dim);
  t.terms_ = sorted_unique(std::move(entries), order, dim, true);
  return t;
}

SymmetricTensor SymmetricTensor::identity(int order, int dim) {
  SymmetricTensor t(order, dim);
  for (int i = 1; i <= dim; ++i) t.terms_.push_back({MultiIndex::diagonal(i, order), 1.0});
  return t;
}

double SymmetricTensor::coeff(const MultiIndex& alpha) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), alpha,
                             [](const Term& t, const MultiIndex& a) { return t.index < a; });
  return (it != terms_.end() && it->index == alpha) ? it->coeff : 0.0;
}

double SymmetricTensor::diagonal(int i) const { return coeff(MultiIndex::diagonal(i, order_)); }

double SymmetricTensor::entry(const MultiIndex& alpha) const {
  return coeff(alpha) / alpha.multinomial();
}

std::vector<std::pair<MultiIndex, double>> SymmetricTensor::to_entries() const {
  std::vector<std::pair<MultiIndex, double>> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.emplace_back(t.index, t.coeff / t.index.multinomial());
  return out;
}

double SymmetricTensor::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw Error(ErrorCode::DimMismatch, "vector of length " + std::to_string(x.size()) +
                                            " for dimension " + std::to_string(dim_));
  }
  double sum = 0.0;
  for (const auto& t : terms_) {
    double p = t.coeff;
    for (int i : t.index.indices()) p *= x[i - 1];
    sum += p;
  }
  return sum;
}

std::vector<double> SymmetricTensor::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw Error(ErrorCode::DimMismatch, "vector of length " + std::to_string(x.size()) +
                                            " for dimension " + std::to_string(dim_));
  }
  std::vector<double> y(x.size(), 0.0);
  std::vector<double> prefix(order_ + 1), suffix(order_ + 1);
  const double inv_m = 1.0 / order_;
  for (const auto& t : terms_) {
    auto idx = t.index.indices();
    prefix[0] = 1.0;
    for (int k = 0; k < order_; ++k) prefix[k + 1] = prefix[k] * x[idx[k] - 1];
    suffix[order_] = 1.0;
    for (int k = order_ - 1; k >= 0; --k) suffix[k] = suffix[k + 1] * x[idx[k] - 1];
    // (1/m) d/dx_i of coeff * x^alpha: multiplicity * product without one copy of x_i.
    int k = 0;
    while (k < order_) {
      int j = k;
      while (j < order_ && idx[j] == idx[k]) ++j;
      const double without_one = prefix[k] * suffix[k + 1];
      y[idx[k] - 1] += t.coeff * inv_m * (j - k) * without_one;
      k = j;
    }
  }
  return y;
}

SymmetricTensor SymmetricTensor::add_scaled_identity(double c) const {
  TensorBuilder b(order_, dim_);
  b.add_tensor(*this);
  for (int i = 1; i <= dim_; ++i) b.add(MultiIndex::diagonal(i, order_), c);
  return b.build();
}

SymmetricTensor SymmetricTensor::scaled(double s) const {
  SymmetricTensor t(order_, dim_);
  if (s == 0.0) return t;
  t.terms_ = terms_;
  for (auto& term : t.terms_) term.coeff *= s;
  return t;
}

SymmetricTensor SymmetricTensor::operator+(const SymmetricTensor& other) const {
  if (other.order_ != order_) throw Error(ErrorCode::OrderMismatch, "adding tensors of different order");
  if (other.dim_ != dim_) throw Error(ErrorCode::DimMismatch, "adding tensors of different dimension");
  TensorBuilder b(order_, dim_);
  b.add_tensor(*this).add_tensor(other);
  return b.build();
}

bool SymmetricTensor::is_essentially_nonnegative() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.index.is_diagonal() || t.coeff >= 0.0; });
}

bool SymmetricTensor::is_nonnegative() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff >= 0.0; });
}

std::size_t SymmetricTensor::num_mixed_terms() const {
  return static_cast<std::size_t>(std::count_if(
      terms_.begin(), terms_.end(), [](const Term& t) { return !t.index.is_diagonal(); }));
}

TensorBuilder& TensorBuilder::add(const MultiIndex& alpha, double coeff) {
  check_key(alpha, order_, dim_);
  acc_[alpha] += coeff;
  return *this;
}

TensorBuilder& TensorBuilder::add_tensor(const SymmetricTensor& t) {
  if (t.order() != order_) throw Error(ErrorCode::OrderMismatch, "builder order differs");
  if (t.dim() > dim_) throw Error(ErrorCode::DimMismatch, "builder dimension too small");
  for (const auto& term : t.terms()) acc_[term.index] += term.coeff;
  return *this;
}

SymmetricTensor TensorBuilder::build(double drop_below) const {
  SymmetricTensor t(order_, dim_);
  t.terms_.reserve(acc_.size());
  for (const auto& [alpha, c] : acc_) {
    if (c != 0.0 && std::abs(c) > drop_below) t.terms_.push_back({alpha, c});
  }
  return t;
}

}  // namespace wtensor
