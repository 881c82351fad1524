#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wtensor/error.hpp"
#include "wtensor/generators.hpp"
#include "wtensor/hypergraph.hpp"
#include "wtensor/w_structure.hpp"

using namespace wtensor;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

SymmetricTensor local_block(int n_total) {
  TensorBuilder b(4, 4);
  for (int i = 1; i <= 4; ++i) b.add(MultiIndex::diagonal(i, 4), n_total);
  b.add({1, 2, 3, 4}, -4.0);
  return b.build();
}

}  // namespace

TEST(Validate, ProductBlocksAreSingleMixedTerm) {
  auto t = gen_product_block_tensor(8);
  auto w = validate(t, {{1, 2, 3, 4}, {5, 6, 7, 8}}, {local_block(8), local_block(8)});
  ASSERT_EQ(w.size(), 2u);
  for (const auto& b : w.blocks) {
    EXPECT_EQ(b.kind, BlockKind::SingleMixedTerm);
    ASSERT_TRUE(b.mixed.has_value());
  }
  EXPECT_FALSE(w.reordered);
  EXPECT_EQ(w.coverage[4], (std::vector<int>{1}));
}

TEST(Validate, EssentiallyNonnegativeSingleBlock) {
  TensorBuilder b(4, 3);
  b.add({1, 1, 1, 1}, -2.0).add({1, 2, 2, 3}, 0.5).add({1, 1, 2, 3}, 1.0).add({3, 3, 3, 3}, 1.0);
  auto t = b.build();
  auto w = validate(t, {{1, 2, 3}}, {t});
  EXPECT_EQ(w.blocks[0].kind, BlockKind::NonnegOffDiagonal);
}

TEST(Validate, OverlapTooLarge) {
  auto t = laplacian(UniformHypergraph(2, 3, {{1, 2}, {2, 3}, {1, 3}}));
  // Triangle: the third edge meets {1,2,3} in two indices under every ordering.
  auto edge = [](double diag) {
    TensorBuilder b(2, 2);
    b.add({1, 1}, diag).add({2, 2}, diag).add({1, 2}, -2.0);
    return b.build();
  };
  EXPECT_EQ(code_of([&] { validate(t, {{1, 2}, {2, 3}, {1, 3}}, {edge(1), edge(1), edge(1)}); }),
            ErrorCode::OverlapTooLarge);

  TensorBuilder b(4, 3);
  for (int i = 1; i <= 3; ++i) b.add(MultiIndex::diagonal(i, 4), 1.0);
  auto id = b.build();
  auto id2 = SymmetricTensor::identity(4, 2).scaled(0.5);
  EXPECT_EQ(code_of([&] { validate(id, {{1, 2}, {1, 2, 3}}, {id2, id.scaled(0.5)}); }),
            ErrorCode::OverlapTooLarge);
}

TEST(Validate, GreedyReorderRecordsOrdering) {
  // Given order {1,2},{3,4},{2,3} fails: {2,3} meets {1,2,3,4} in two indices.
  // {1,2},{2,3},{3,4} works and the greedy pass must find it.
  auto g = gen_hyper_path(2, 3);
  auto t = laplacian(g);
  auto edge = [](double d1, double d2) {
    TensorBuilder b(2, 2);
    b.add({1, 1}, d1).add({2, 2}, d2).add({1, 2}, -2.0);
    return b.build();
  };
  auto w = validate(t, {{1, 2}, {3, 4}, {2, 3}}, {edge(1, 1), edge(1, 1), edge(1, 1)});
  EXPECT_TRUE(w.reordered);
  EXPECT_EQ(w.ordering, (std::vector<int>{0, 2, 1}));
}

TEST(Validate, CoverageGapAndSumMismatch) {
  auto t = gen_product_block_tensor(8);
  EXPECT_EQ(code_of([&] { validate(t, {{1, 2, 3, 4}}, {local_block(8)}); }), ErrorCode::CoverageGap);
  EXPECT_EQ(code_of([&] { validate(t, {{1, 2, 3, 4}, {5, 6, 7, 8}}, {local_block(8), local_block(7)}); }),
            ErrorCode::SumMismatch);
  try {
    validate(t, {{1, 2, 3, 4}, {5, 6, 7, 8}}, {local_block(8), local_block(7)});
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("(5,5,5,5)"), std::string::npos) << e.what();
  }
}

TEST(Validate, BlockNotW) {
  TensorBuilder b(4, 3);
  b.add({1, 1, 2, 2}, -1.0).add({2, 2, 3, 3}, -1.0);
  for (int i = 1; i <= 3; ++i) b.add(MultiIndex::diagonal(i, 4), 1.0);
  auto t = b.build();
  EXPECT_EQ(code_of([&] { validate(t, {{1, 2, 3}}, {t}); }), ErrorCode::BlockNotW);
}

TEST(Detect, RecoversDisjointBlocks) {
  auto t = gen_product_block_tensor(8);
  auto w = detect(t);
  ASSERT_TRUE(w.has_value());
  ASSERT_EQ(w->size(), 2u);
  EXPECT_EQ(w->blocks[0].gamma, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(w->blocks[1].gamma, (std::vector<int>{5, 6, 7, 8}));
}

TEST(Detect, IdentityIsOneDiagonalBlock) {
  auto w = detect(SymmetricTensor::identity(4, 5));
  ASSERT_TRUE(w.has_value());
  ASSERT_EQ(w->size(), 1u);
  EXPECT_EQ(w->blocks[0].gamma.size(), 5u);
  EXPECT_EQ(w->blocks[0].kind, BlockKind::NonnegOffDiagonal);
}

TEST(Detect, HyperStarLaplacianNotDetected) {
  EXPECT_FALSE(detect(laplacian(gen_hyper_star(4, 2))).has_value());
}

TEST(Detect, RandomDetectedTensorsRevalidate) {
  std::mt19937_64 rng(8);
  int detected = 0;
  for (int rep = 0; rep < 30; ++rep) {
    auto rw = oracle::random_w_tensor(6 + rep % 5, rng);
    if (auto w = detect(rw.tensor)) {
      ++detected;
      std::vector<std::vector<int>> gamma;
      std::vector<SymmetricTensor> subs;
      for (const auto& b : w->blocks) {
        gamma.push_back(b.gamma);
        subs.push_back(b.subtensor);
      }
      EXPECT_NO_THROW(validate(rw.tensor, gamma, subs));
    }
  }
  EXPECT_GT(detected, 0);
}

TEST(Reallocate, HyperStarCenterSplits) {
  auto w = laplacian_w_decomposition(gen_hyper_star(4, 2));
  std::vector<std::vector<double>> weights(7, std::vector<double>{1.0});
  weights[0] = {1.0, 1.0};
  EXPECT_NO_THROW(reallocate_diagonal(w, weights));
  weights[0] = {2.0, 0.0};
  auto skewed = reallocate_diagonal(w, weights);
  EXPECT_EQ(skewed.blocks[0].subtensor.diagonal(1), 2.0);
  EXPECT_EQ(skewed.blocks[1].subtensor.diagonal(1), 0.0);
  weights[0] = {1.5, 1.5};
  EXPECT_EQ(code_of([&] { reallocate_diagonal(w, weights); }), ErrorCode::WeightSumMismatch);
}

TEST(DecompositionJson, Roundtrip) {
  auto t = gen_product_block_tensor(8);
  auto w = *detect(t);
  auto back = decomposition_from_json(t, decomposition_to_json(w));
  ASSERT_EQ(back.size(), w.size());
  EXPECT_EQ(back.blocks[1].gamma, w.blocks[1].gamma);
}
