#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "wtensor/error.hpp"
#include "wtensor/generators.hpp"
#include "wtensor/hypergraph.hpp"
#include "wtensor/symmetric_tensor.hpp"
#include "wtensor/tensor_io.hpp"

using namespace wtensor;

namespace {

SymmetricTensor random_sparse(int m, int n, int terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> idx(1, n);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  TensorBuilder b(m, n);
  for (int k = 0; k < terms; ++k) {
    std::vector<int> raw(m);
    for (int& r : raw) r = idx(rng);
    b.add(MultiIndex::canonicalize(raw, n), val(rng));
  }
  return b.build();
}

std::vector<double> random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

}  // namespace

TEST(MultiIndex, CanonicalizeSorts) {
  EXPECT_EQ(MultiIndex::canonicalize({3, 1, 2, 1}, 3), MultiIndex::canonicalize({1, 1, 2, 3}, 3));
  auto a = MultiIndex::canonicalize({4, 3, 2, 1}, 4);
  EXPECT_EQ(std::vector<int>(a.indices().begin(), a.indices().end()), (std::vector<int>{1, 2, 3, 4}));
  auto fixed = MultiIndex::canonicalize({1, 1, 1, 1}, 1);
  EXPECT_TRUE(fixed.is_diagonal());
  EXPECT_EQ(MultiIndex::canonicalize(fixed.indices(), 1), fixed);
}

TEST(MultiIndex, OutOfRangeRejected) {
  try {
    MultiIndex::canonicalize({1, 5}, 4);
    FAIL() << "expected InvalidIndex";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidIndex);
  }
  EXPECT_THROW(MultiIndex::canonicalize({0, 1}, 4), Error);
}

TEST(MultiIndex, Multinomial) {
  EXPECT_DOUBLE_EQ(MultiIndex::canonicalize({1, 2, 3, 4}, 4).multinomial(), 24.0);
  EXPECT_DOUBLE_EQ(MultiIndex::canonicalize({1, 1, 2, 2}, 2).multinomial(), 6.0);
  EXPECT_DOUBLE_EQ(MultiIndex::diagonal(3, 6).multinomial(), 1.0);
  EXPECT_DOUBLE_EQ(MultiIndex::canonicalize({1, 1, 1, 2, 2, 3}, 3).multinomial(), 60.0);
}

TEST(SymmetricTensor, FromEntriesScalesByMultinomial) {
  auto t = SymmetricTensor::from_entries(4, 4, {{MultiIndex::canonicalize({1, 2, 3, 4}, 4), -1.0 / 6.0}});
  EXPECT_NEAR(t.coeff(MultiIndex::canonicalize({1, 2, 3, 4}, 4)), -4.0, 1e-15);

  auto mat = SymmetricTensor::from_entries(2, 2, {{MultiIndex::canonicalize({1, 2}, 2), -1.0}});
  EXPECT_DOUBLE_EQ(mat.coeff(MultiIndex::canonicalize({1, 2}, 2)), -2.0);

  auto diag = SymmetricTensor::from_entries(4, 1, {{MultiIndex::diagonal(1, 4), 5.0}});
  EXPECT_DOUBLE_EQ(diag.diagonal(1), 5.0);
}

TEST(SymmetricTensor, FromEntriesErrors) {
  const auto a = MultiIndex::canonicalize({1, 2}, 2);
  try {
    SymmetricTensor::from_entries(2, 2, {{a, 1.0}, {a, 2.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateEntry);
  }
  try {
    SymmetricTensor::from_entries(4, 2, {{a, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderMismatch);
  }
}

TEST(SymmetricTensor, EntryRoundtrip) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    auto t = random_sparse(4, 5, 12, rng);
    auto back = SymmetricTensor::from_entries(4, 5, t.to_entries());
    ASSERT_EQ(back.num_terms(), t.num_terms());
    for (std::size_t k = 0; k < t.num_terms(); ++k) {
      EXPECT_EQ(back.terms()[k].index, t.terms()[k].index);
      EXPECT_NEAR(back.terms()[k].coeff, t.terms()[k].coeff, 1e-12 * std::abs(t.terms()[k].coeff));
    }
  }
  // Entries that are exact binary fractions roundtrip exactly.
  auto exact = SymmetricTensor::from_entries(4, 3, {{MultiIndex::canonicalize({1, 1, 2, 3}, 3), 0.25}});
  EXPECT_EQ(exact.to_entries().front().second, 0.25);
}

TEST(SymmetricTensor, EvalExamples) {
  auto id = SymmetricTensor::identity(4, 2);
  EXPECT_DOUBLE_EQ(id.eval(std::vector<double>{1, 1}), 2.0);
  auto t = gen_product_block_tensor(4);
  EXPECT_DOUBLE_EQ(t.eval(std::vector<double>{1, 1, 1, -1}), 20.0);
  auto lap = laplacian(gen_hyper_star(4, 2));
  EXPECT_DOUBLE_EQ(lap.eval(std::vector<double>(7, 1.0)), 0.0);
}

TEST(SymmetricTensor, EvalDimMismatch) {
  auto id = SymmetricTensor::identity(4, 2);
  try {
    id.eval(std::vector<double>{1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
  }
  EXPECT_THROW(id.apply(std::vector<double>{1}), Error);
}

TEST(SymmetricTensor, ApplyExamples) {
  TensorBuilder b(2, 2);
  b.add({1, 1}, 2.0).add({2, 2}, 2.0).add({1, 2}, 2.0);
  auto y = b.build().apply(std::vector<double>{1, 0});
  EXPECT_DOUBLE_EQ(y[0], 2.0);
  EXPECT_DOUBLE_EQ(y[1], 1.0);

  auto yi = SymmetricTensor::identity(4, 2).apply(std::vector<double>{2, 1});
  EXPECT_DOUBLE_EQ(yi[0], 8.0);
  EXPECT_DOUBLE_EQ(yi[1], 1.0);

  auto ye = gen_product_block_tensor(4).apply(std::vector<double>(4, 1.0));
  for (double v : ye) EXPECT_DOUBLE_EQ(v, 3.0);
}

TEST(SymmetricTensor, EulerIdentity) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + rep % 5, n = 2 + rep % 6;
    auto t = random_sparse(m, n, 10, rng);
    auto x = random_vector(n, rng);
    auto y = t.apply(x);
    const double dot = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    const double f = t.eval(x);
    EXPECT_NEAR(dot, f, 1e-10 * std::max(1.0, std::abs(f)));
  }
}

TEST(SymmetricTensor, EvalAgreesWithEntryFormSum) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 2 + rep % 3, n = 2 + rep % 4;
    auto t = random_sparse(m, n, 6, rng);
    auto x = random_vector(n, rng);
    const double f = t.eval(x);
    EXPECT_NEAR(oracle::eval_entry_form(t, x), f, 1e-12 * std::max(1.0, std::abs(f)));
  }
}

TEST(SymmetricTensor, PermutationInvariance) {
  std::vector<int> raw{3, 1, 2, 2};
  TensorBuilder a(4, 3), b(4, 3);
  a.add(MultiIndex::canonicalize(raw, 3), 1.5);
  std::reverse(raw.begin(), raw.end());
  b.add(MultiIndex::canonicalize(raw, 3), 1.5);
  const std::vector<double> x{0.3, -1.2, 2.0};
  EXPECT_EQ(a.build().eval(x), b.build().eval(x));
}

TEST(SymmetricTensor, AddScaledIdentity) {
  auto zero = SymmetricTensor(4, 3);
  auto id = zero.add_scaled_identity(1.0);
  EXPECT_EQ(id.num_terms(), 3u);
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(id.diagonal(i), 1.0);

  auto t = gen_product_block_tensor(8);
  auto same = t.add_scaled_identity(0.0);
  ASSERT_EQ(same.num_terms(), t.num_terms());
  auto shifted = t.add_scaled_identity(-9.0);
  EXPECT_EQ(shifted.diagonal(1), -1.0);
  EXPECT_EQ(shifted.coeff(MultiIndex::canonicalize({1, 2, 3, 4}, 8)), -4.0);
}

TEST(TensorIo, JsonRoundtripAndRationals) {
  nlohmann::json j = nlohmann::json::parse(R"({"order": 4, "dim": 4, "form": "entries",
      "terms": [{"idx": [1,2,3,4], "val": "-1/6"}, {"idx": [1,1,1,1], "val": 4}]})");
  auto t = tensor_from_json(j);
  EXPECT_NEAR(t.coeff(MultiIndex::canonicalize({1, 2, 3, 4}, 4)), -4.0, 1e-15);
  EXPECT_EQ(t.diagonal(1), 4.0);
  auto back = tensor_from_json(tensor_to_json(t));
  EXPECT_EQ(tensor_digest(back), tensor_digest(t));
}

TEST(TensorIo, RejectsUnsortedIndex) {
  nlohmann::json j = nlohmann::json::parse(
      R"({"order": 2, "dim": 2, "terms": [{"idx": [2,1], "val": 1}]})");
  try {
    tensor_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}
