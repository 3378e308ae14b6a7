#include <random>

#include <gtest/gtest.h>

#include "mpx/oracle.hpp"
#include "mpx/tropical.hpp"
#include "support.hpp"

namespace mpx {
namespace {

// Chain v1 -> v2 in layer 1 and v2 -> v3 in layer `second`, unit weights.
MultiplexTensor chain(Index second) {
  return MultiplexTensor(3, 2, {{0, 0, 1, 1.0}, {second, 1, 2, 1.0}}, Directedness::directed);
}

// Directed 4-vertex, 2-layer fixture shared with the spectral and
// communicability tests.
MultiplexTensor fixture() {
  return MultiplexTensor(4, 2,
                         {{0, 0, 1, 1.0}, {0, 1, 2, 2.0}, {0, 2, 0, 0.5},
                          {1, 1, 3, 1.0}, {1, 3, 0, 1.0}, {1, 0, 2, 0.25}},
                         Directedness::directed);
}

TEST(MinPlus, IdentityIsUnit) {
  RowMatrix a(2, 3);
  a << 0, 3, infinity, 2, 0, 1.5;
  EXPECT_EQ(minplus_multiply(a, tropical_identity(3)), a);
  EXPECT_EQ(minplus_multiply(tropical_identity(2), a), a);
}

TEST(MinPlus, Example) {
  RowMatrix a(2, 2), b(2, 2), c(2, 2);
  a << 0, 3, 2, 0;
  b << 0, 1, 4, 0;
  c << 0, 1, 2, 0;
  EXPECT_EQ(minplus_multiply(a, b), c);
}

TEST(MinPlus, InfiniteRowAbsorbs) {
  RowMatrix a(2, 2), b(2, 2);
  a << infinity, infinity, 1, 0;
  b << 0, 1, 4, 0;
  const RowMatrix c = minplus_multiply(a, b);
  EXPECT_EQ(c(0, 0), infinity);
  EXPECT_EQ(c(0, 1), infinity);
}

TEST(MinPlus, DimensionMismatch) {
  EXPECT_THROW(minplus_multiply(RowMatrix::Zero(2, 3), RowMatrix::Zero(2, 2)), DimensionError);
}

TEST(ReciprocalLengths, Values) {
  const auto t = fixture();
  const ReciprocalLengthTensor r(t);
  EXPECT_EQ(r.value(0, 1, 2), 0.5);
  EXPECT_EQ(r.value(1, 0, 2), 4.0);
  EXPECT_EQ(r.value(1, 1, 2), infinity);
  EXPECT_EQ(r.value(1, 3, 3), 0.0);
}

TEST(OnePathMatrix, UndirectedEdge) {
  MultiplexTensor t(2, 1, {{0, 0, 1, 1.0}, {0, 1, 0, 1.0}}, Directedness::undirected);
  const auto p = one_path_matrix(t, CouplingParameter(1.0));
  EXPECT_EQ(p.length(0, 1), 1.0);
  EXPECT_EQ(p.length(1, 0), 1.0);
  EXPECT_EQ(p.length(0, 0), 0.0);
  EXPECT_EQ(p.last_layers(0, 1), std::vector<Index>{0});
  EXPECT_TRUE(p.last_layers(0, 0).empty());
}

TEST(OnePathMatrix, MinimumOverLayersAndTies) {
  MultiplexTensor t(2, 2, {{0, 0, 1, 2.0}, {1, 0, 1, 5.0}}, Directedness::directed);
  auto p = one_path_matrix(t, CouplingParameter(1.0));
  EXPECT_DOUBLE_EQ(p.length(0, 1), 0.2);
  EXPECT_EQ(p.last_layers(0, 1), std::vector<Index>{1});
  EXPECT_EQ(p.length(1, 0), infinity);
  EXPECT_TRUE(p.last_layers(1, 0).empty());

  MultiplexTensor u(2, 2, {{0, 0, 1, 4.0}, {1, 0, 1, 4.0}}, Directedness::directed);
  p = one_path_matrix(u, CouplingParameter(1.0));
  EXPECT_EQ(p.length(0, 1), 0.25);
  EXPECT_EQ(p.last_layers(0, 1), (std::vector<Index>{0, 1}));
}

TEST(ExtendPathMatrix, LayerSwitchCost) {
  const auto two = path_length_matrix(chain(1), CouplingParameter(1.0), 2).matrix;
  EXPECT_EQ(two.length(0, 2), 3.0);
  EXPECT_EQ(two.last_layers(0, 2), std::vector<Index>{1});
  const auto half = path_length_matrix(chain(1), CouplingParameter(2.0), 2).matrix;
  EXPECT_EQ(half.length(0, 2), 2.5);
  for (double g : {0.1, 1.0, 2.0, 1e9})
    EXPECT_EQ(path_length_matrix(chain(0), CouplingParameter(g), 2).matrix.length(0, 2), 2.0);
  // The walk enumerator agrees on all three.
  EXPECT_EQ(test::enumerate_walk_cost(chain(1), 1.0, 0, 2, 2), 3.0);
  EXPECT_EQ(test::enumerate_walk_cost(chain(1), 2.0, 0, 2, 2), 2.5);
  EXPECT_EQ(test::enumerate_walk_cost(chain(0), 2.0, 0, 2, 2), 2.0);
}

TEST(ExtendPathMatrix, GammaMismatch) {
  const auto t = chain(1);
  const auto p = one_path_matrix(t, CouplingParameter(1.0));
  EXPECT_THROW(extend_path_matrix(p, ReciprocalLengthTensor(t), CouplingParameter(2.0)),
               DimensionError);
}

TEST(ExtendPathMatrix, TieWithCarriedValueUnitesLayers) {
  // Direct edge 1 -> 3 of length 2 in layer 1; two-edge path through v2 of
  // the same length ending in layer 2 (no switch: both edges in layer 2).
  MultiplexTensor t(3, 2, {{0, 0, 2, 0.5}, {1, 0, 1, 1.0}, {1, 1, 2, 1.0}}, Directedness::directed);
  const auto p = path_length_matrix(t, CouplingParameter(1.0), 2).matrix;
  EXPECT_EQ(p.length(0, 2), 2.0);
  EXPECT_EQ(p.last_layers(0, 2), (std::vector<Index>{0, 1}));
}

TEST(PathLengthMatrix, FixtureMatchesWalkEnumeration) {
  // Reference lengths from exhaustive enumeration of layer-assigned walks.
  const auto t = fixture();
  const double ref_g1_k3[4][4] = {{0, 1, 1.5, 3}, {2, 0, 0.5, 1}, {2, 3, 0, 5}, {1, 3, 3.5, 0}};
  const double ref_g05_k3[4][4] = {{0, 1, 1.5, 4}, {2, 0, 0.5, 1}, {2, 3, 0, 6}, {1, 4, 4.5, 0}};
  const auto r1 = path_length_matrix(t, CouplingParameter(1.0));
  const auto r05 = path_length_matrix(t, CouplingParameter(0.5));
  EXPECT_EQ(r1.matrix.k(), 3);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      EXPECT_EQ(r1.matrix.length(i, j), ref_g1_k3[i][j]) << i << "," << j;
      EXPECT_EQ(r05.matrix.length(i, j), ref_g05_k3[i][j]) << i << "," << j;
      EXPECT_EQ(r1.matrix.length(i, j), test::enumerate_walk_cost(t, 1.0, i, j, 3));
    }
}

TEST(PathLengthMatrix, StopsAtFixedPoint) {
  // A path graph on 6 vertices in one layer needs all 5 extensions; a star
  // stabilizes after 2.
  std::vector<Entry> path, star;
  for (Index i = 0; i + 1 < 6; ++i) {
    path.push_back({0, i, i + 1, 1.0});
    path.push_back({0, i + 1, i, 1.0});
  }
  for (Index i = 1; i < 6; ++i) {
    star.push_back({0, 0, i, 1.0});
    star.push_back({0, i, 0, 1.0});
  }
  const CouplingParameter g(1.0);
  const auto rp = path_length_matrix(MultiplexTensor(6, 1, path, Directedness::undirected), g);
  EXPECT_EQ(rp.matrix.k(), 5);
  EXPECT_EQ(rp.stabilization_k, 5);
  const auto rs = path_length_matrix(MultiplexTensor(6, 1, star, Directedness::undirected), g);
  EXPECT_EQ(rs.stabilization_k, 2);
  EXPECT_EQ(rs.matrix.k(), 2);
  EXPECT_EQ(rs.matrix.length(1, 2), 2.0);
  const auto capped = path_length_matrix(MultiplexTensor(6, 1, path, Directedness::undirected), g, 2);
  EXPECT_EQ(capped.matrix.k(), 2);
  EXPECT_FALSE(capped.stabilization_k.has_value());
  EXPECT_THROW(path_length_matrix(MultiplexTensor(6, 1, path, Directedness::undirected), g, 0),
               DimensionError);
}

TEST(PathLengthMatrix, ReportsEveryLevel) {
  std::vector<int> seen;
  path_length_matrix(fixture(), CouplingParameter(1.0), {}, 1,
                     [&](const PathLengthMatrix& p) { seen.push_back(p.k()); });
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3}));
}

// Properties over random instances.

class TropicalProperties : public ::testing::TestWithParam<double> {};

TEST_P(TropicalProperties, InvariantsHold) {
  const double gamma = GetParam();
  const CouplingParameter g(gamma);
  std::mt19937_64 rng(static_cast<std::uint64_t>(gamma * 1000) + 7);
  for (int trial = 0; trial < 150; ++trial) {
    test::RandomSpec spec;
    spec.undirected = trial % 3 == 0;
    const auto t = test::random_multiplex(rng, spec);
    const Index n = t.n_vertices();
    const ReciprocalLengthTensor recip(t);
    PathLengthMatrix p = one_path_matrix(t, g);
    for (int k = 1; k <= 5; ++k) {
      const DenseMatrix exact = oracle::exact_k_path_lengths(t, g, k);
      for (Index i = 0; i < n; ++i) {
        EXPECT_EQ(p.length(i, i), 0.0);
        EXPECT_TRUE(p.last_layers(i, i).empty());
        for (Index j = 0; j < n; ++j) {
          const double v = p.length(i, j);
          // Achievable and never below the exact optimum.
          if (exact(i, j) == infinity)
            EXPECT_EQ(v, infinity);
          else
            EXPECT_GE(v - exact(i, j), -1e-12);
          if (i != j) {
            EXPECT_EQ(v == infinity, p.last_layers(i, j).empty());
            if (v != infinity) EXPECT_GT(v, 0.0);
          }
          if (spec.undirected && t.n_layers() == 1) EXPECT_DOUBLE_EQ(v, p.length(j, i));
          if (t.n_layers() == 1) EXPECT_EQ(v, exact(i, j));
        }
      }
      if (t.n_layers() == 1) {
        const DenseMatrix plain = test::minplus_power_lengths(t, k);
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j) EXPECT_EQ(p.length(i, j), plain(i, j));
      }
      if (gamma >= 1e9) {
        const DenseMatrix plain = test::minplus_power_lengths(t, k);
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j) {
            if (plain(i, j) == infinity) {
              EXPECT_EQ(p.length(i, j), infinity);
            } else {
              EXPECT_NEAR(p.length(i, j), plain(i, j), 10.0 * static_cast<double>(n) / gamma);
            }
          }
      }
      const PathLengthMatrix q = extend_path_matrix(p, recip, g);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) EXPECT_LE(q.length(i, j), p.length(i, j));
      p = q;
    }
  }
}

TEST(PathLengthMatrix, UndirectedMultiplexCanBeAsymmetric) {
  // Layer 0 is the path 0-1-2-3; layer 1 adds a 1.5 shortcut 3-1. From 3 the
  // minimal prefix to 1 ends in layer 1, so the all-layer-0 walk 3-2-1-0 is
  // never extended and the return trip pays a switch.
  const MultiplexTensor t(4, 2,
                          {{0, 0, 1, 1.0}, {0, 1, 0, 1.0}, {0, 1, 2, 1.0}, {0, 2, 1, 1.0},
                           {0, 2, 3, 1.0}, {0, 3, 2, 1.0}, {1, 1, 3, 2.0 / 3.0}, {1, 3, 1, 2.0 / 3.0}},
                          Directedness::undirected);
  const auto p = path_length_matrix(t, CouplingParameter(1.0)).matrix;
  EXPECT_EQ(p.length(0, 3), 3.0);
  EXPECT_EQ(p.length(3, 0), 3.5);
  EXPECT_EQ(oracle::exact_k_path_lengths(t, CouplingParameter(1.0), 3)(3, 0), 3.0);
}

INSTANTIATE_TEST_SUITE_P(Gammas, TropicalProperties, ::testing::Values(0.5, 1.0, 2.0, 1e9));

TEST(PathLengthMatrix, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(23);
  test::RandomSpec spec;
  spec.max_vertices = 30;
  spec.max_layers = 4;
  spec.density = 0.1;
  for (int trial = 0; trial < 5; ++trial) {
    const auto t = test::random_multiplex(rng, spec);
    const auto a = path_length_matrix(t, CouplingParameter(1.0), {}, 1);
    const auto b = path_length_matrix(t, CouplingParameter(1.0), {}, 4);
    EXPECT_TRUE(a.matrix == b.matrix);
    EXPECT_EQ(a.stabilization_k, b.stabilization_k);
  }
}

}  // namespace
}  // namespace mpx
