#include <random>

#include <gtest/gtest.h>

#include "mpx/core.hpp"
#include "support.hpp"

namespace mpx {
namespace {

MultiplexTensor two_layer_edge() {
  // N = 2, L = 2, undirected edge (1,2) of weight 3 in layer 1 only.
  return MultiplexTensor(2, 2, {{0, 0, 1, 3.0}, {0, 1, 0, 3.0}}, Directedness::undirected);
}

TEST(MultiplexTensor, RejectsInvalidEntries) {
  EXPECT_THROW(MultiplexTensor(2, 1, {{0, 0, 1, 0.0}}, Directedness::directed), DataError);
  EXPECT_THROW(MultiplexTensor(2, 1, {{0, 0, 1, -1.0}}, Directedness::directed), DataError);
  EXPECT_THROW(MultiplexTensor(2, 1, {{0, 1, 1, 1.0}}, Directedness::directed), DataError);
  EXPECT_THROW(MultiplexTensor(2, 1, {{0, 0, 1, 1.0}, {0, 0, 1, 1.0}}, Directedness::directed),
               DataError);
  EXPECT_THROW(MultiplexTensor(2, 1, {{0, 0, 1, 1.0}}, Directedness::undirected), DataError);
  EXPECT_THROW(MultiplexTensor(2, 1, {{0, 0, 1, 1.0}, {0, 1, 0, 2.0}}, Directedness::undirected),
               DataError);
  EXPECT_THROW(MultiplexTensor(2, 1, {{1, 0, 1, 1.0}}, Directedness::directed), DataError);
  EXPECT_THROW(MultiplexTensor(0, 1, {}, Directedness::directed), DataError);
}

TEST(MultiplexTensor, StoresCanonicalOrderAndLabels) {
  MultiplexTensor t(3, 2, {{1, 2, 0, 1.0}, {0, 1, 2, 2.0}, {0, 0, 1, 0.5}}, Directedness::directed);
  ASSERT_EQ(t.entries().size(), 3u);
  EXPECT_EQ(t.entries()[0], (Entry{0, 0, 1, 0.5}));
  EXPECT_EQ(t.entries()[2], (Entry{1, 2, 0, 1.0}));
  EXPECT_EQ(t.vertex_label(2), "3");
  EXPECT_EQ(t.layer_label(1), "2");
  EXPECT_EQ(t.weight(0, 1, 2), 2.0);
  EXPECT_FALSE(t.weight(1, 1, 2).has_value());
}

TEST(CouplingParameter, MustBePositive) {
  EXPECT_THROW(CouplingParameter(0.0), DataError);
  EXPECT_THROW(CouplingParameter(-1.0), DataError);
  EXPECT_DOUBLE_EQ(CouplingParameter(4.0).switch_cost(), 0.25);
}

TEST(Aggregate, SingleLayerIsIdentity) {
  MultiplexTensor t(3, 1, {{0, 0, 1, 2.0}, {0, 2, 1, 0.5}}, Directedness::directed);
  DenseMatrix expect = DenseMatrix::Zero(3, 3);
  expect(0, 1) = 2.0;
  expect(2, 1) = 0.5;
  EXPECT_EQ(aggregate(t), expect);
}

TEST(Aggregate, SumsLayers) {
  MultiplexTensor t(2, 2, {{0, 0, 1, 1.0}, {1, 0, 1, 1.0}}, Directedness::directed);
  EXPECT_EQ(aggregate(t)(0, 1), 2.0);
  EXPECT_EQ(aggregate(t)(1, 0), 0.0);
}

TEST(BuildSupra, PureCoupling) {
  MultiplexTensor t(1, 2, {}, Directedness::directed);
  const auto b = build_supra(t, CouplingParameter(0.5));
  DenseMatrix expect(2, 2);
  expect << 0, 0.5, 0.5, 0;
  EXPECT_EQ(DenseMatrix(b.matrix), expect);
}

TEST(BuildSupra, SingleLayerEqualsLayerMatrix) {
  MultiplexTensor t(3, 1, {{0, 0, 1, 2.0}, {0, 1, 2, 0.5}}, Directedness::directed);
  for (double g : {0.1, 1.0, 7.0})
    EXPECT_EQ(DenseMatrix(build_supra(t, CouplingParameter(g)).matrix), DenseMatrix(t.layer_matrix(0)));
}

TEST(BuildSupra, TwoLayerExample) {
  const auto b = build_supra(two_layer_edge(), CouplingParameter(1.0));
  DenseMatrix expect(4, 4);
  expect << 0, 3, 1, 0,
            3, 0, 0, 1,
            1, 0, 0, 0,
            0, 1, 0, 0;
  EXPECT_EQ(DenseMatrix(b.matrix), expect);
  EXPECT_EQ(b.index(1, 0), 2);
}

TEST(BuildSupra, BlocksReproduceLayersAndCoupling) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = test::random_multiplex(rng, {});
    const double g = 0.3 + trial * 0.1;
    const auto b = build_supra(t, CouplingParameter(g));
    EXPECT_EQ(b.matrix.diagonal().cwiseAbs().sum(), 0.0);
    for (Index r = 0; r < t.n_layers(); ++r)
      for (Index c = 0; c < t.n_layers(); ++c) {
        const DenseMatrix expect = r == c ? DenseMatrix(t.layer_matrix(r))
                                          : DenseMatrix(g * DenseMatrix::Identity(t.n_vertices(), t.n_vertices()));
        EXPECT_EQ(b.block(r, c), expect);
      }
  }
}

TEST(SparsityPattern, SetSemanticsAndBounds) {
  SparsityPattern s(3, {{1, 2}, {0, 1}, {1, 2}});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains(1, 2));
  EXPECT_FALSE(s.contains(2, 1));
  EXPECT_THROW(SparsityPattern(2, {{0, 2}}), DimensionError);
  EXPECT_EQ(SparsityPattern::full(3).size(), 9u);
}

TEST(PatternOf, ZeroAndBlockDiagonal) {
  EXPECT_EQ(pattern_of(DenseMatrix::Zero(3, 3)).size(), 0u);
  const auto t = two_layer_edge();
  const auto s = pattern_of(block_diagonal(t));
  EXPECT_EQ(s.dimension(), 4);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains(0, 1));
  EXPECT_TRUE(s.contains(1, 0));
  const auto sa = pattern_of(aggregate(t));
  EXPECT_EQ(sa.dimension(), 2);
  EXPECT_EQ(sa.size(), 2u);
}

TEST(ProjectOntoCone, Examples) {
  const DenseMatrix m = DenseMatrix::Constant(2, 2, 0.5);
  EXPECT_EQ(project_onto_cone(m, SparsityPattern::full(2)), m);
  EXPECT_EQ(project_onto_cone(m, SparsityPattern(2, {})), DenseMatrix::Zero(2, 2));
  DenseMatrix expect(2, 2);
  expect << 0, 0.5, 0, 0;
  EXPECT_EQ(project_onto_cone(m, SparsityPattern(2, {{0, 1}})), expect);
  EXPECT_THROW(project_onto_cone(m, SparsityPattern(3, {})), DimensionError);
}

TEST(ProjectOntoCone, Idempotent) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix m = test::random_irreducible(rng, 6);
    const SparsityPattern s(6, {{0, 1}, {2, 3}, {5, 5}, {4, 0}});
    const DenseMatrix once = project_onto_cone(m, s);
    EXPECT_EQ(project_onto_cone(once, s), once);
  }
}

TEST(IsIrreducible, Examples) {
  DenseMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  DenseMatrix upper(2, 2);
  upper << 0, 1, 0, 0;
  EXPECT_TRUE(is_irreducible(swap));
  EXPECT_FALSE(is_irreducible(upper));
}

// Brute-force reachability by Floyd-Warshall transitive closure.
bool strongly_connected(const DenseMatrix& m) {
  const Index n = m.rows();
  std::vector<std::vector<bool>> r(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) r[i][j] = i == j || m(i, j) > 0;
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) r[i][j] = r[i][j] || (r[i][k] && r[k][j]);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!r[i][j]) return false;
  return true;
}

TEST(IsIrreducible, SupraMatchesAggregateReachability) {
  std::mt19937_64 rng(99);
  int connected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    test::RandomSpec spec;
    spec.max_vertices = 8;
    spec.density = 0.25;
    const auto t = test::random_multiplex(rng, spec);
    const DenseMatrix a = aggregate(t);
    const bool expect = strongly_connected(a);
    connected += expect;
    EXPECT_EQ(is_irreducible(a), expect);
    // Every vertex needs an edge somewhere for B to inherit irreducibility.
    bool all_touched = true;
    for (Index v = 0; v < t.n_vertices(); ++v)
      all_touched = all_touched && (a.row(v).sum() > 0 || a.col(v).sum() > 0);
    if (all_touched) {
      const auto b = build_supra(t, CouplingParameter(1.0));
      EXPECT_EQ(is_irreducible(b.matrix), expect);
      EXPECT_EQ(strongly_connected(DenseMatrix(b.matrix)), expect);
    }
  }
  EXPECT_GT(connected, 20);
  EXPECT_LT(connected, 280);
}

TEST(Aggregate, PermutationEquivariant) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = test::random_multiplex(rng, {});
    const Index n = t.n_vertices();
    std::vector<Index> perm(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Entry> moved;
    for (const Entry& e : t.entries()) moved.push_back({e.layer, perm[e.src], perm[e.dst], e.weight});
    const MultiplexTensor u(n, t.n_layers(), moved, t.directedness());
    const DenseMatrix a = aggregate(t);
    const DenseMatrix b = aggregate(u);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) EXPECT_EQ(b(perm[i], perm[j]), a(i, j));
  }
}

}  // namespace
}  // namespace mpx
