#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "wtensor/baselines.hpp"
#include "wtensor/eigen_sos.hpp"
#include "wtensor/error.hpp"
#include "wtensor/generators.hpp"
#include "wtensor/hypergraph.hpp"

using namespace wtensor;

namespace {

SymmetricTensor matrix2(double a, double b, double c) {
  TensorBuilder t(2, 2);
  t.add({1, 1}, a).add({1, 2}, 2.0 * b).add({2, 2}, c);
  return t.build();
}

}  // namespace

TEST(Nqz, PerronValue) {
  auto r = nqz(matrix2(2, 1, 2));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.lambda, 3.0, 1e-8);
}

TEST(Nqz, SingleEdgeAdjacency) {
  auto r = nqz(adjacency_tensor(UniformHypergraph(4, 4, {{1, 2, 3, 4}})));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.lambda, 1.0, 1e-6);
}

TEST(Nqz, SignlessHyperPath) {
  auto r = nqz(signless_laplacian(gen_hyper_path(4, 100)));
  EXPECT_TRUE(r.converged) << r.iterations;
  EXPECT_NEAR(r.lambda, 2.9997, 1e-3);
}

TEST(Nqz, BracketNeverWidens) {
  auto q = signless_laplacian(gen_hyper_star(4, 3));
  NqzConfig cfg;
  double prev_lo = -1e300, prev_hi = 1e300;
  for (int it = 0; it <= 25; ++it) {
    cfg.max_iter = it;
    auto r = nqz(q, cfg);
    EXPECT_LE(r.lower, r.upper + 1e-14);
    EXPECT_GE(r.lower, prev_lo - 1e-12) << it;
    EXPECT_LE(r.upper, prev_hi + 1e-12) << it;
    prev_lo = r.lower;
    prev_hi = r.upper;
  }
}

TEST(Nqz, ReportsNonConvergence) {
  NqzConfig cfg;
  cfg.max_iter = 50;
  auto r = nqz(matrix2(2, 0, 1), cfg);  // reducible: the ratios stay at 2 and 1
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 50);
  EXPECT_NEAR(r.upper - r.lower, 1.0, 1e-12);
}

TEST(Nqz, RejectsNegativeCoefficients) {
  try {
    nqz(laplacian(gen_hyper_star(4, 2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeCoefficient);
  }
  NqzConfig bad;
  bad.start = {1.0, 0.0};
  EXPECT_THROW(nqz(matrix2(2, 1, 2), bad), Error);
}

TEST(ProjectedAscent, Examples) {
  EXPECT_GE(projected_ascent(gen_product_block_tensor(4)).lambda, 5.0 - 1e-6);
  EXPECT_NEAR(projected_ascent(SymmetricTensor::identity(4, 5)).lambda, 1.0, 1e-8);
  EXPECT_GE(projected_ascent(laplacian(gen_hyper_star(4, 2))).lambda, 2.5437 - 1e-4);
}

TEST(ProjectedAscent, DeterministicAcrossThreadCounts) {
  auto t = laplacian(gen_hyper_path(4, 4));
  AscentConfig one, three;
  three.threads = 3;
  auto a = projected_ascent(t, one), b = projected_ascent(t, three);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.x, b.x);
}

TEST(ProjectedAscent, NeverExceedsSdpValue) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 6; ++rep) {
    auto rw = oracle::random_w_tensor(5 + rep, rng);
    AscentConfig cfg;
    cfg.starts = 20;
    const double lb = projected_ascent(rw.tensor, cfg).lambda;
    const double sdp = max_h_eigenvalue(rw.tensor).lambda;
    EXPECT_LE(lb, sdp + 1e-5);
  }
}

TEST(HyperStarLambda, Values) {
  EXPECT_EQ(hyper_star_lambda(4, 1), 2.0);
  EXPECT_NEAR(hyper_star_lambda(4, 10), 10.0137, 5e-5);
  for (int k : {2, 3, 5, 10, 50}) {
    const double x = hyper_star_lambda(4, k);
    EXPECT_NEAR(x, oracle::bisect_star_root(4, k), 1e-10);
    EXPECT_GT(x, k);
    EXPECT_LT(x, k + 1);
    // Relative to the size of the two terms, which grow like k^3.
    EXPECT_NEAR(std::pow(1 - x, 3) * (x - k) + k, 0.0, 1e-10 * k);
  }
  EXPECT_NEAR(hyper_star_lambda(6, 3), oracle::bisect_star_root(6, 3), 1e-10);
  EXPECT_THROW(hyper_star_lambda(3, 2), Error);
}

TEST(HyperStarLambda, MatchesSdp) {
  auto w = laplacian_w_decomposition(gen_hyper_star(4, 5));
  EigConfig cfg;
  cfg.method = Method::Block;
  EXPECT_NEAR(max_h_eigenvalue(w, cfg).lambda, hyper_star_lambda(4, 5), 1e-6);
}
