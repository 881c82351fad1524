#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "wtensor/error.hpp"
#include "wtensor/hypergraph.hpp"

using namespace wtensor;

TEST(Hypergraph, RejectsMalformedEdges) {
  EXPECT_THROW(UniformHypergraph(3, 4, {{1, 2}}), Error);
  EXPECT_THROW(UniformHypergraph(3, 4, {{1, 1, 2}}), Error);
  EXPECT_THROW(UniformHypergraph(3, 4, {{1, 2, 5}}), Error);
  EXPECT_THROW(UniformHypergraph(3, 4, {{1, 2, 3}, {3, 2, 1}}), Error);
}

TEST(Hypergraph, AdjacencyCoefficient) {
  UniformHypergraph g(4, 4, {{1, 2, 3, 4}});
  auto a = adjacency_tensor(g);
  EXPECT_DOUBLE_EQ(a.coeff(MultiIndex::canonicalize({1, 2, 3, 4}, 4)), 4.0);
  EXPECT_NEAR(a.entry(MultiIndex::canonicalize({1, 2, 3, 4}, 4)), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(adjacency_tensor(UniformHypergraph(3, 5, {})).num_terms(), 0u);

  auto p = adjacency_tensor(gen_hyper_path(2, 2));
  EXPECT_DOUBLE_EQ(p.entry(MultiIndex::canonicalize({1, 2}, 3)), 1.0);
  EXPECT_DOUBLE_EQ(p.entry(MultiIndex::canonicalize({2, 3}, 3)), 1.0);
  EXPECT_DOUBLE_EQ(p.entry(MultiIndex::canonicalize({1, 3}, 3)), 0.0);
}

TEST(Hypergraph, GraphLaplacian) {
  auto l = laplacian(UniformHypergraph(2, 2, {{1, 2}}));
  EXPECT_DOUBLE_EQ(l.entry(MultiIndex::canonicalize({1, 1}, 2)), 1.0);
  EXPECT_DOUBLE_EQ(l.entry(MultiIndex::canonicalize({1, 2}, 2)), -1.0);
  EXPECT_DOUBLE_EQ(l.entry(MultiIndex::canonicalize({2, 2}, 2)), 1.0);
}

TEST(Hypergraph, AllOnesIdentities) {
  std::vector<UniformHypergraph> graphs{gen_hyper_star(4, 3), gen_hyper_path(6, 5), gen_hyper_star(3, 4),
                                        gen_hyper_tree({{1, 4}, {4, 7}, {4, 10}, {1, 13}}, 4)};
  for (const auto& g : graphs) {
    std::vector<double> ones(g.num_vertices(), 1.0);
    EXPECT_NEAR(laplacian(g).eval(ones), 0.0, 1e-12);
    EXPECT_NEAR(signless_laplacian(g).eval(ones), 2.0 * g.uniformity() * g.num_edges(), 1e-9);
    int sum = 0;
    for (int d : g.degrees()) sum += d;
    EXPECT_EQ(sum, g.uniformity() * static_cast<int>(g.num_edges()));
  }
}

TEST(Generators, HyperStar) {
  auto g = gen_hyper_star(4, 2);
  EXPECT_EQ(g.num_vertices(), 7);
  EXPECT_EQ(g.edges(), (std::vector<std::vector<int>>{{1, 2, 3, 4}, {1, 5, 6, 7}}));
  EXPECT_EQ(gen_hyper_star(4, 10).num_vertices(), 31);
  auto k13 = gen_hyper_star(2, 3);
  EXPECT_EQ(k13.edges(), (std::vector<std::vector<int>>{{1, 2}, {1, 3}, {1, 4}}));
}

TEST(Generators, HyperPath) {
  EXPECT_EQ(gen_hyper_path(4, 100).num_vertices(), 301);
  EXPECT_EQ(gen_hyper_path(6, 100).num_vertices(), 501);
  EXPECT_EQ(gen_hyper_path(4, 1).edges(), gen_hyper_star(4, 1).edges());
  auto g = gen_hyper_path(4, 3);
  for (int v = 1; v <= g.num_vertices(); ++v) {
    EXPECT_EQ(g.degree(v), (v == 4 || v == 7) ? 2 : 1) << v;
  }
}

TEST(Generators, HyperTreeWorkedExample) {
  auto g = gen_hyper_tree({{1, 4}, {4, 7}, {4, 10}, {1, 13}, {13, 16}, {16, 19}}, 4);
  EXPECT_EQ(g.num_vertices(), 19);
  const std::vector<std::vector<int>> expected{{1, 2, 3, 4},     {4, 5, 6, 7},     {4, 8, 9, 10},
                                               {1, 11, 12, 13}, {13, 14, 15, 16}, {16, 17, 18, 19}};
  EXPECT_EQ(g.edges(), expected);
  EXPECT_EQ(gen_hyper_tree({{1, 2}}, 4).edges(), (std::vector<std::vector<int>>{{1, 2, 3, 4}}));
}

TEST(Generators, PathTreeMatchesHyperPath) {
  // Relabel: a path tree on junction labels 1, m, 2m-1, ... gives the hyper-path exactly.
  const int m = 4, k = 5;
  std::vector<std::pair<int, int>> tree;
  for (int l = 1; l <= k; ++l) tree.emplace_back((l - 1) * (m - 1) + 1, l * (m - 1) + 1);
  EXPECT_EQ(gen_hyper_tree(tree, m).edges(), gen_hyper_path(m, k).edges());
}

TEST(Generators, HyperTreeRejectsNonTrees) {
  try {
    gen_hyper_tree({{1, 2}, {2, 3}, {3, 1}}, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotATree);
  }
  EXPECT_THROW(gen_hyper_tree({{1, 2}, {3, 4}}, 3), Error);
}

TEST(LaplacianDecomposition, HyperStarBlocks) {
  auto w = laplacian_w_decomposition(gen_hyper_star(4, 2));
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w.blocks[0].gamma, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(w.blocks[1].gamma, (std::vector<int>{1, 5, 6, 7}));
  for (const auto& b : w.blocks) {
    EXPECT_EQ(b.kind, BlockKind::SingleMixedTerm);
    EXPECT_EQ(b.subtensor.diagonal(1), 1.0);
    EXPECT_EQ(b.subtensor.coeff(MultiIndex::canonicalize({1, 2, 3, 4}, 4)), -4.0);
  }
  EXPECT_EQ(w.coverage[0], (std::vector<int>{0, 1}));
}

TEST(LaplacianDecomposition, PathAndTreeValidate) {
  auto w = laplacian_w_decomposition(gen_hyper_path(4, 2));
  EXPECT_EQ(w.coverage[3], (std::vector<int>{0, 1}));
  EXPECT_EQ(w.blocks[0].subtensor.diagonal(4), 1.0);
  auto single = laplacian_w_decomposition(gen_hyper_path(4, 1));
  ASSERT_EQ(single.size(), 1u);
  for (int i = 1; i <= 4; ++i) EXPECT_EQ(single.blocks[0].subtensor.diagonal(i), 1.0);
  // Tree edges listed out of BFS order still validate via reordering.
  auto tree = gen_hyper_tree({{13, 16}, {1, 4}, {16, 19}, {4, 7}, {1, 13}, {4, 10}}, 4);
  auto wt = laplacian_w_decomposition(tree, true);
  for (const auto& b : wt.blocks) EXPECT_EQ(b.kind, BlockKind::SingleMixedTerm);
}

TEST(LaplacianDecomposition, RejectsHeavyOverlap) {
  UniformHypergraph g(3, 4, {{1, 2, 3}, {2, 3, 4}});
  try {
    laplacian_w_decomposition(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedTopology);
  }
  EXPECT_THROW(laplacian_w_decomposition(UniformHypergraph(2, 3, {{1, 2}, {2, 3}, {1, 3}})), Error);
}

TEST(EdgeList, Roundtrip) {
  auto g = gen_hyper_star(3, 3);
  std::stringstream ss;
  write_edge_list(ss, g);
  EXPECT_EQ(ss.str().substr(0, 4), "3 7\n");
  auto back = read_edge_list(ss);
  EXPECT_EQ(back.edges(), g.edges());
  std::istringstream bad("4 5\n1 2 x 4\n");
  EXPECT_THROW(read_edge_list(bad), Error);
}
