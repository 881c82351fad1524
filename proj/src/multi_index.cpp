#include "wtensor/multi_index.hpp"

#include <algorithm>
#include <string>

#include "wtensor/error.hpp"

namespace wtensor {

MultiIndex MultiIndex::canonicalize(std::span<const int> raw, int dim) {
  if (raw.empty()) throw Error(ErrorCode::InvalidIndex, "empty multi-index");
  std::vector<int> v(raw.begin(), raw.end());
  for (int i : v) {
    if (i < 1 || i > dim) {
      throw Error(ErrorCode::InvalidIndex,
                  "coordinate " + std::to_string(i) + " outside [1, " + std::to_string(dim) + "]");
    }
  }
  std::sort(v.begin(), v.end());
  return MultiIndex(std::move(v));
}

MultiIndex MultiIndex::diagonal(int i, int order) {
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(order), i));
}

bool MultiIndex::is_diagonal() const {
  return !idx_.empty() && idx_.front() == idx_.back();
}

std::vector<std::pair<int, int>> MultiIndex::exponents() const {
  std::vector<std::pair<int, int>> out;
  for (int i : idx_) {
    if (!out.empty() && out.back().first == i) {
      ++out.back().second;
    } else {
      out.emplace_back(i, 1);
    }
  }
  return out;
}

std::vector<int> MultiIndex::support() const {
  std::vector<int> out;
  for (const auto& [i, a] : exponents()) out.push_back(i);
  return out;
}

double MultiIndex::multinomial() const {
  // Product of binomials keeps intermediate values exact for the orders used here.
  double result = 1.0;
  int placed = 0;
  for (const auto& [i, a] : exponents()) {
    for (int k = 1; k <= a; ++k) {
      result = result * static_cast<double>(placed + k) / static_cast<double>(k);
    }
    placed += a;
  }
  return result;
}

MultiIndex MultiIndex::doubled() const {
  std::vector<int> v;
  v.reserve(idx_.size() * 2);
  for (int i : idx_) {
    v.push_back(i);
    v.push_back(i);
  }
  return MultiIndex(std::move(v));
}

}  // namespace wtensor
