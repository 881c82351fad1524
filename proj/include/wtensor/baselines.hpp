#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wtensor/symmetric_tensor.hpp"

namespace wtensor {

struct NqzConfig {
  std::vector<double> start;  ///< strictly positive; empty means all ones
  double tol = 1e-9;          ///< stop once the eigenvalue bracket is this narrow
  int max_iter = 100000;
};

struct NqzResult {
  double lambda = 0.0;  ///< bracket midpoint
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> x;  ///< final iterate, normalized to unit m-norm
  int iterations = 0;
  bool converged = false;  ///< false: bracket still wider than tol after max_iter
};

/// Power-type iteration for nonnegative tensors with min/max ratio brackets.
NqzResult nqz(const SymmetricTensor& t, const NqzConfig& cfg = {});

struct AscentConfig {
  int starts = 50;
  std::uint64_t seed = 42;
  int max_iter = 2000;
  int threads = 1;
};

struct AscentResult {
  double lambda = 0.0;    ///< best value of T x^m with ||x||_m = 1 (a lower bound)
  std::vector<double> x;
};

/// Multi-start gradient ascent of T x^m on the unit m-norm sphere.
AscentResult projected_ascent(const SymmetricTensor& t, const AscentConfig& cfg = {});

/// Largest Laplacian H-eigenvalue of the m-uniform hyper-star with k edges:
/// the root of (1 - x)^{m-1} (x - k) + k in (k, k + 1]. Requires even m.
double hyper_star_lambda(int m, int k);

}  // namespace wtensor
