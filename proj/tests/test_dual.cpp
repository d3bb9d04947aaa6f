#include "cubecx/dual.hpp"
#include "cubecx/fixtures.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cubecx;
namespace fx = cubecx::fixtures;

namespace {

// x -> principal vertex is an isomorphism of 1-skeleta with equal cube counts.
void expect_reproduces(const CubeComplex& x) {
  auto ws = hyperplane_wallspace(x);
  auto d = dual_complex(ws);
  EXPECT_TRUE(validate_complex(*d.complex).passed());
  ASSERT_EQ(d.complex->vertex_count(), x.vertex_count());
  for (int k = 1; k <= std::max(x.dim(), d.complex->dim()); ++k) EXPECT_EQ(d.complex->count(k), x.count(k)) << "dim " << k;
  std::vector<CubeId> phi;
  std::set<CubeId> image;
  for (std::size_t v = 0; v < x.vertex_count(); ++v) {
    auto p = d.find(principal_orientation(ws, static_cast<int>(v)));
    ASSERT_TRUE(p.has_value());
    phi.push_back(*p);
    image.insert(*p);
  }
  EXPECT_EQ(image.size(), x.vertex_count());
  std::set<std::pair<CubeId, CubeId>> dual_edges;
  for (const auto& e : d.complex->cubes(1)) dual_edges.insert(std::minmax(e.corners[0], e.corners[1]));
  for (const auto& e : x.cubes(1)) EXPECT_TRUE(dual_edges.count(std::minmax(phi[static_cast<std::size_t>(e.corners[0])], phi[static_cast<std::size_t>(e.corners[1])])));
  EXPECT_EQ(d.wall_of_hyperplane.size(), ws.walls.size());
  EXPECT_EQ(oracle::dual_vertex_count(ws), d.complex->vertex_count());
}

CubeComplex random_tree(int edges, std::mt19937& rng) {
  CubeComplex t(static_cast<std::size_t>(edges) + 1);
  for (int v = 1; v <= edges; ++v) t.add_edge(static_cast<CubeId>(rng() % static_cast<unsigned>(v)), v);
  return t;
}

FiniteWallspace octants() {
  FiniteWallspace ws;
  ws.points = 8;
  for (int k = 0; k < 3; ++k) {
    std::array<std::vector<int>, 2> s;
    for (int x = 0; x < 8; ++x) s[static_cast<std::size_t>((x >> k) & 1)].push_back(x);
    ws.walls.push_back(s);
  }
  return ws;
}

// square with a pendant edge at two opposite corners
std::shared_ptr<const CubeComplex> square_with_tails() {
  CubeComplex x = fx::square();
  x.set_vertex_count(6);
  x.add_edge(0, 4);
  x.add_edge(3, 5);
  return share(std::move(x));
}

}  // namespace

TEST(Dual, OneWallIsAnEdge) {
  FiniteWallspace ws{2, {{std::vector<int>{0}, std::vector<int>{1}}}, {}};
  auto d = dual_complex(ws);
  EXPECT_EQ(d.complex->vertex_count(), 2u);
  EXPECT_EQ(d.complex->count(1), 1u);
}

TEST(Dual, RandomTrees) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int edges = 1 + static_cast<int>(rng() % 15);
    expect_reproduces(random_tree(edges, rng));
  }
}

TEST(Dual, OctantCube) {
  auto ws = octants();
  auto d = dual_complex(ws);
  EXPECT_EQ(oracle::dual_vertex_count(ws), 8u);
  EXPECT_EQ(d.complex->vertex_count(), 8u);
  EXPECT_EQ(d.complex->count(1), 12u);
  EXPECT_EQ(d.complex->count(2), 6u);
  EXPECT_EQ(d.complex->count(3), 1u);
  EXPECT_TRUE(validate_complex(*d.complex).passed());
}

TEST(Dual, Grids) {
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      SCOPED_TRACE(std::to_string(m) + "x" + std::to_string(n));
      expect_reproduces(fx::grid(m, n));
    }
  expect_reproduces(fx::square());
  expect_reproduces(product(fx::square(), fx::interval()));
}

TEST(Dual, SimplyConnected) {
  auto d = dual_complex(hyperplane_wallspace(fx::grid(3, 2)));
  auto s = systole(d.complex, 40);
  EXPECT_FALSE(s.exact);
  EXPECT_TRUE(s.simply_connected);
}

TEST(Dual, OracleOnRandomWallspaces) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    FiniteWallspace ws;
    ws.points = 3 + rng() % 8;
    std::size_t walls = 1 + rng() % 10;
    while (ws.walls.size() < walls) {
      std::array<std::vector<int>, 2> s;
      for (std::size_t x = 0; x < ws.points; ++x) s[rng() % 2].push_back(static_cast<int>(x));
      if (!s[0].empty() && !s[1].empty()) ws.walls.push_back(s);
    }
    auto d = dual_complex(ws);
    EXPECT_EQ(d.complex->vertex_count(), oracle::dual_vertex_count(ws));
    EXPECT_TRUE(validate_complex(*d.complex).passed());
  }
}

TEST(Dual, HemiTrivialCases) {
  auto ws = hyperplane_wallspace(fx::grid(2, 2));
  std::vector<int> all(ws.points);
  std::iota(all.begin(), all.end(), 0);
  auto full = hemi_restrict_dual(ws, all);
  EXPECT_EQ(full.dual.complex->vertex_count(), 9u);
  EXPECT_TRUE(full.certificate.passed());
  auto one = hemi_restrict_dual(ws, {4});
  EXPECT_EQ(one.dual.complex->vertex_count(), 1u);
  EXPECT_TRUE(one.certificate.passed());
  auto tree = fx::path_graph(4);
  auto pair = hemi_restrict_dual(hyperplane_wallspace(tree), {1, 2});
  EXPECT_EQ(pair.dual.complex->vertex_count(), 2u);
  EXPECT_EQ(pair.dual.complex->count(1), 1u);
  EXPECT_THROW(hemi_restrict_dual(ws, {}), Error);
}

TEST(Dual, HemiIsConvexHull) {
  std::mt19937 rng(3);
  auto ws = hyperplane_wallspace(fx::grid(3, 3));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> s;
    for (std::size_t x = 0; x < ws.points; ++x)
      if (rng() % 4 == 0) s.push_back(static_cast<int>(x));
    if (s.empty()) s.push_back(0);
    auto h = hemi_restrict_dual(ws, s);
    EXPECT_TRUE(h.certificate.passed()) << render(h.certificate);
  }
}

TEST(Dual, StrongSeparationGrid) {
  auto ball = develop_ball(share(fx::grid(3, 3)), 0, 6);
  BallHyperplanes hp(ball);
  // find two disjoint hyperplanes
  int u = -1, v = -1;
  for (int a = 0; a < static_cast<int>(hp.size()) && u < 0; ++a)
    for (int b = a + 1; b < static_cast<int>(hp.size()); ++b)
      if (hp.crosses(a, b) < 0) {
        u = a;
        v = b;
        break;
      }
  ASSERT_GE(u, 0);
  auto s = strong_separation(ball, u, v);
  EXPECT_EQ(s.kind, SeparationKind::crossed);
  EXPECT_GE(hp.crosses(s.witness, u), 0);
  EXPECT_GE(hp.crosses(s.witness, v), 0);
  EXPECT_EQ(strong_separation(ball, v, u).kind, SeparationKind::crossed);
  int w = -1;
  for (int c = 0; c < static_cast<int>(hp.size()); ++c)
    if (hp.crosses(u, c) >= 0) w = c;
  try {
    strong_separation(ball, u, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDisjoint);
  }
}

TEST(Dual, StrongSeparationTreeAndPolicy) {
  auto ball = develop_ball(share(fx::bouquet(2)), 0, 3);
  BallHyperplanes hp(ball);
  for (int a = 0; a < static_cast<int>(hp.size()); ++a)
    for (int b = a + 1; b < static_cast<int>(hp.size()); ++b) {
      EXPECT_EQ(strong_separation(hp, a, b).kind, SeparationKind::separated);
      EXPECT_EQ(strong_separation(hp, b, a).kind, SeparationKind::separated);
    }
  auto tails = develop_ball(square_with_tails(), 0, 6);
  BallHyperplanes th(tails);
  int p = -1, q = -1;
  for (std::size_t e = 0; e < tails.ball->count(1); ++e) {
    CubeId base = tails.projection.images[1][e].id;
    if (base == 4) p = th.classes.of_edge[e];
    if (base == 5) q = th.classes.of_edge[e];
  }
  EXPECT_EQ(strong_separation(th, p, q).kind, SeparationKind::inconclusive);
  auto with_m = strong_separation(th, p, q, 1);
  EXPECT_EQ(with_m.kind, SeparationKind::separated);
  EXPECT_EQ(with_m.distance, 2);
  EXPECT_EQ(strong_separation(th, p, q, 2).kind, SeparationKind::inconclusive);
}

TEST(Dual, FacingTriples) {
  auto tripod = develop_ball(share(fx::tripod()), 0, 4);
  auto t = facing_triple_search(tripod, false);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(t->hyperplanes, (std::array<int, 3>{0, 1, 2}));
  auto b2 = develop_ball(share(fx::bouquet(2)), 0, 2);
  auto s = facing_triple_search(b2, true);
  ASSERT_TRUE(s.has_value());
  EXPECT_TRUE(s->strong);
  EXPECT_TRUE(s->certificate.passed());
  auto grid = develop_ball(share(fx::grid(6, 6)), 24, 3);
  EXPECT_FALSE(facing_triple_search(grid, false).has_value());
  EXPECT_FALSE(facing_triple_search(develop_ball(share(fx::grid(4, 4)), 0, 8), false).has_value());
}

TEST(Dual, FiniteWallspaceJson) {
  auto j = Json::parse(R"({"points": ["p", "q", "r"], "walls": [[["p"], ["q", "r"]], [["p", "q"], ["r"]]]})");
  auto ws = finite_wallspace_from_json(j, "test");
  EXPECT_EQ(ws.points, 3u);
  EXPECT_EQ(finite_wallspace_to_json(ws), j);
  auto d = dual_complex(ws);
  EXPECT_EQ(d.complex->vertex_count(), 3u);
  auto bad = Json::parse(R"({"points": ["p", "q"], "walls": [[["p", "q"], []]]})");
  EXPECT_THROW(finite_wallspace_from_json(bad, "test"), Error);
}

TEST(Dual, RelatorWallspace) {
  auto ws = finite_wallspace(antipodal_walls(share(fx::cycle_graph(6))));
  auto d = dual_complex(ws);
  // three pairwise crossing walls: the 3-cube, two corners not principal
  EXPECT_EQ(d.complex->vertex_count(), 8u);
  EXPECT_EQ(d.complex->count(3), 1u);
  EXPECT_EQ(oracle::dual_vertex_count(ws), 8u);
}
