#pragma once

// Reference computations used only by the tests. None of these call the SDP
// path, so they can serve as independent checks on it.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "wtensor/symmetric_tensor.hpp"
#include "wtensor/w_structure.hpp"

namespace oracle {

/// Largest eigenvalue of the symmetric matrix of an order-2 tensor.
double matrix_max_eig(const wtensor::SymmetricTensor& t);
Eigen::MatrixXd to_dense_matrix(const wtensor::SymmetricTensor& t);

/// Entry-form sum over every index tuple in [n]^m (brute force, tiny n only).
double eval_entry_form(const wtensor::SymmetricTensor& t, const std::vector<double>& x);

/// Multi-start projected gradient descent of T x^m over the standard simplex.
/// Returns the smallest value found.
double simplex_min(const wtensor::SymmetricTensor& t, int starts, std::uint64_t seed);

/// min of f(x) = sum_i b_i x_i^{2d} - mu * prod_i x_i^{a_i} over the unit
/// Euclidean sphere, by multi-start projected gradient descent.
double sphere_min_single_term(const std::vector<double>& b, const std::vector<int>& a, double mu,
                              int starts, std::uint64_t seed);

/// Maximum of T x^m / ||x||_m^m by dense random sampling plus local polish.
/// A lower bound on the maximum H-eigenvalue for even m.
double sampled_rayleigh_max(const wtensor::SymmetricTensor& t, int samples, std::uint64_t seed);

/// Hyper-star root of (1-x)^{m-1}(x-k)+k on (k, k+1], by plain bisection.
double bisect_star_root(int m, int k);

struct RandomW {
  wtensor::SymmetricTensor tensor;
  wtensor::WDecomposition decomposition;
};

/// Random order-4 W-tensor on `n` variables, built block by block so each new
/// block meets the earlier ones in at most one index. Mixes single-mixed-term
/// blocks of either sign with nonnegative off-diagonal blocks.
RandomW random_w_tensor(int n, std::mt19937_64& rng);

}  // namespace oracle
