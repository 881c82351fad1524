#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wtensor::sdp {

/// Entry (i, j) of PSD block `block`, 0-based with i <= j. In a linear form it
/// stands for the symmetric matrix with value v at (i, j) and (j, i), so its
/// inner product with X is 2 v X_ij off the diagonal and v X_ii on it.
struct PsdEntry {
  int block = 0;
  int i = 0;
  int j = 0;
  double value = 0.0;
};

/// A linear functional over (PSD blocks, nonnegative vector, free vector).
struct LinearForm {
  std::vector<PsdEntry> psd;
  std::vector<std::pair<int, double>> nonneg;
  std::vector<std::pair<int, double>> free;

  LinearForm& add_psd(int block, int i, int j, double v);
  LinearForm& add_nonneg(int k, double v);
  LinearForm& add_free(int k, double v);
  bool empty() const { return psd.empty() && nonneg.empty() && free.empty(); }
};

/// minimize <objective, (X, x, f)>
/// subject to <rows[r], (X, x, f)> = rhs[r], X_k PSD, x >= 0, f free.
struct Problem {
  std::vector<int> psd_sizes;
  int nonneg_dim = 0;
  int free_dim = 0;
  LinearForm objective;
  std::vector<LinearForm> rows;
  std::vector<double> rhs;

  int add_psd_block(int size);
  /// Returns the index of the first of `count` new variables.
  int add_nonneg(int count = 1);
  int add_free(int count = 1);
  int add_row(LinearForm form, double b);
  int num_rows() const { return static_cast<int>(rows.size()); }
};

enum class Status { Solved, PrimalInfeasible, DualInfeasible, IterationLimit, NumericalTrouble };
const char* to_string(Status s);

struct Config {
  double tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
  /// On a numerical breakdown, an iterate within reduced_accuracy * tol on
  /// every measure is still reported as Solved (with a message saying so).
  double reduced_accuracy = 100.0;
};

struct Solution {
  Status status = Status::NumericalTrouble;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  std::vector<Eigen::MatrixXd> X;  ///< primal PSD blocks
  Eigen::VectorXd x_nonneg;
  Eigen::VectorXd x_free;
  Eigen::VectorXd y;               ///< equality multipliers (zero for dropped rows)
  std::vector<Eigen::MatrixXd> Z;  ///< dual slack blocks
  Eigen::VectorXd z_nonneg;
  int iterations = 0;
  /// Relative residuals of the row-normalized problem, infinity norm.
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  std::vector<int> dropped_rows;  ///< numerically dependent rows removed by presolve
  std::string message;
};

/// Primal-dual interior-point method with Nesterov-Todd scaling and Mehrotra
/// predictor-corrector steps. Deterministic; never throws on infeasibility.
Solution solve(const Problem& problem, const Config& config = {});

/// Plain-text dump (see docs/sdp_dump_format.md).
void write_problem(std::ostream& out, const Problem& problem);
Problem read_problem(std::istream& in);

}  // namespace wtensor::sdp
