#include <gtest/gtest.h>

#include <sstream>

#include "wtensor/sdp.hpp"

using namespace wtensor::sdp;

namespace {

// min t  s.t.  t I - [[0,1],[1,0]] = X, X PSD.
Problem spectral_norm_problem() {
  Problem p;
  const int blk = p.add_psd_block(2);
  const int t = p.add_free();
  p.objective.add_free(t, 1.0);
  p.add_row(LinearForm().add_psd(blk, 0, 0, 1.0).add_free(t, -1.0), 0.0);
  p.add_row(LinearForm().add_psd(blk, 1, 1, 1.0).add_free(t, -1.0), 0.0);
  p.add_row(LinearForm().add_psd(blk, 0, 1, 0.5), -1.0);
  return p;
}

// min t  s.t.  t(x1^4 + x2^4) - 4 x1^2 x2^2 is a Gram form over [x1^2, x1 x2, x2^2].
Problem quartic_gram_problem() {
  Problem p;
  const int blk = p.add_psd_block(3);
  const int t = p.add_free();
  p.objective.add_free(t, 1.0);
  p.add_row(LinearForm().add_psd(blk, 0, 0, 1.0).add_free(t, -1.0), 0.0);  // x1^4
  p.add_row(LinearForm().add_psd(blk, 0, 1, 1.0), 0.0);                     // x1^3 x2
  p.add_row(LinearForm().add_psd(blk, 0, 2, 1.0).add_psd(blk, 1, 1, 1.0), -4.0);
  p.add_row(LinearForm().add_psd(blk, 1, 2, 1.0), 0.0);                     // x1 x2^3
  p.add_row(LinearForm().add_psd(blk, 2, 2, 1.0).add_free(t, -1.0), 0.0);  // x2^4
  return p;
}

}  // namespace

TEST(Sdp, SpectralNorm) {
  auto s = solve(spectral_norm_problem());
  ASSERT_EQ(s.status, Status::Solved) << s.message;
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);
  EXPECT_NEAR(s.dual_objective, 1.0, 1e-7);
  EXPECT_LT(s.iterations, 50);
}

TEST(Sdp, LinearProgramCorner) {
  Problem p;
  const int y = p.add_free();
  const int s = p.add_nonneg();
  p.objective.add_free(y, 1.0);
  p.add_row(LinearForm().add_free(y, 1.0).add_nonneg(s, -1.0), 3.0);
  auto sol = solve(p);
  ASSERT_EQ(sol.status, Status::Solved) << sol.message;
  EXPECT_NEAR(sol.primal_objective, 3.0, 1e-7);
  EXPECT_NEAR(sol.x_free[0], 3.0, 1e-7);
}

TEST(Sdp, QuarticGramForm) {
  auto s = solve(quartic_gram_problem());
  ASSERT_EQ(s.status, Status::Solved) << s.message;
  EXPECT_NEAR(s.primal_objective, 2.0, 1e-7);
  EXPECT_LE(std::abs(s.primal_objective - s.dual_objective), 1e-8 * (1 + std::abs(s.primal_objective)));
}

TEST(Sdp, SlackMatricesNearlyPsd) {
  const Problem p = quartic_gram_problem();
  auto s = solve(p);
  ASSERT_EQ(s.status, Status::Solved);
  // Rebuild Z = C - A^T y from the multipliers alone.
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(3, 3);
  for (int r = 0; r < p.num_rows(); ++r) {
    for (const auto& e : p.rows[r].psd) {
      Z(e.i, e.j) -= s.y[r] * e.value;
      if (e.i != e.j) Z(e.j, e.i) -= s.y[r] * e.value;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Z);
  EXPECT_GE(es.eigenvalues().minCoeff(), -10 * 1e-8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(s.X[0]);
  EXPECT_GE(ex.eigenvalues().minCoeff(), -1e-10);
}

TEST(Sdp, Deterministic) {
  auto a = solve(quartic_gram_problem());
  auto b = solve(quartic_gram_problem());
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.primal_objective, b.primal_objective);
  EXPECT_EQ(a.dual_objective, b.dual_objective);
}

TEST(Sdp, ScalingRobustness) {
  Problem p = quartic_gram_problem();
  for (auto& row : p.rows) {
    for (auto& e : row.psd) e.value *= 1e3;
    for (auto& [k, v] : row.free) v *= 1e3;
  }
  for (double& b : p.rhs) b *= 1e3;
  p.objective.free[0].second *= 1e3;
  auto s = solve(p);
  ASSERT_EQ(s.status, Status::Solved);
  EXPECT_NEAR(s.primal_objective, 2e3, 2e3 * 1e-8 + 1e-6);
}

TEST(Sdp, DependentRowsDropped) {
  Problem p = spectral_norm_problem();
  // Sum of the first two rows: consistent, so it is dropped and the optimum is unchanged.
  p.add_row(LinearForm().add_psd(0, 0, 0, 1.0).add_psd(0, 1, 1, 1.0).add_free(0, -2.0), 0.0);
  auto s = solve(p);
  ASSERT_EQ(s.status, Status::Solved) << s.message;
  EXPECT_EQ(s.dropped_rows.size(), 1u);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);

  p.rhs.back() = 1.0;
  EXPECT_EQ(solve(p).status, Status::PrimalInfeasible);
}

TEST(Sdp, PrimalInfeasible) {
  Problem p;
  const int s = p.add_nonneg();
  p.add_row(LinearForm().add_nonneg(s, 1.0), -1.0);
  EXPECT_EQ(solve(p).status, Status::PrimalInfeasible);

  // X PSD with X_00 = -1.
  Problem q;
  const int blk = q.add_psd_block(2);
  q.objective.add_psd(blk, 1, 1, 1.0);
  q.add_row(LinearForm().add_psd(blk, 0, 0, 1.0), -1.0);
  EXPECT_EQ(solve(q).status, Status::PrimalInfeasible);
}

TEST(Sdp, DualInfeasible) {
  Problem p;
  const int f = p.add_free();
  const int s = p.add_nonneg();
  p.objective.add_free(f, -1.0);
  p.add_row(LinearForm().add_free(f, 1.0).add_nonneg(s, -1.0), 0.0);
  EXPECT_EQ(solve(p).status, Status::DualInfeasible);
}

TEST(Sdp, DumpRoundtrip) {
  Problem p = quartic_gram_problem();
  p.add_nonneg(2);
  p.rows[1].add_nonneg(1, 0.5);
  std::stringstream ss;
  write_problem(ss, p);
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("wtensor-sdp 1\npsd 1 3\nnonneg 2\nfree 1\nrows 5\nrhs 3 -4\n", 0), 0u) << text;
  Problem back = read_problem(ss);
  std::stringstream again;
  write_problem(again, back);
  EXPECT_EQ(again.str(), text);
  EXPECT_NEAR(solve(back).primal_objective, solve(p).primal_objective, 1e-12);
}
