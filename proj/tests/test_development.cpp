#include "cubecx/development.hpp"
#include "cubecx/fixtures.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cubecx;
namespace fx = cubecx::fixtures;

namespace {

// reduced words of length <= r over a free basis of rank k
int reduced_words(int k, int r) {
  int total = 1, layer = 2 * k;
  for (int i = 1; i <= r; ++i) {
    total += layer;
    layer *= 2 * k - 1;
  }
  return total;
}

}  // namespace

TEST(Develop, BouquetBallCounts) {
  auto b2 = share(fx::bouquet(2));
  EXPECT_EQ(develop_ball(b2, 0, 2).size(), 17u);
  for (int r = 0; r <= 4; ++r) {
    auto ball = develop_ball(b2, 0, r);
    EXPECT_EQ(static_cast<int>(ball.size()), reduced_words(2, r));
    EXPECT_EQ(static_cast<int>(ball.size()), 1 + 4 * (static_cast<int>(std::pow(3, r)) - 1) / 2);
    EXPECT_EQ(ball.ball->count(1), ball.size() - 1);
    EXPECT_TRUE(validate_complex(*ball.ball).passed());
    EXPECT_TRUE(validate_map(ball.projection).passed());
  }
}

TEST(Develop, CycleAndTorus) {
  auto c6 = share(fx::cycle_graph(6));
  auto ball = develop_ball(c6, 0, 2);
  EXPECT_EQ(ball.size(), 5u);
  EXPECT_EQ(ball.ball->count(1), 4u);
  EXPECT_EQ(diameter(*ball.ball), 4);

  auto t2 = share(fx::torus());
  auto t = develop_ball(t2, 0, 1);
  EXPECT_EQ(t.size(), 5u);
  EXPECT_EQ(t.ball->count(1), 4u);
  EXPECT_EQ(t.ball->count(2), 0u);
  for (int r = 2; r <= 5; ++r) {
    auto g = develop_ball(t2, 0, r);
    // l1 ball in Z^2; squares need all four corners inside
    EXPECT_EQ(static_cast<int>(g.size()), 1 + 2 * r * (r + 1));
    EXPECT_EQ(static_cast<int>(g.ball->count(2)), 2 * r * (r - 1));
    EXPECT_TRUE(is_npc(*g.ball));
    EXPECT_EQ(g.ball->euler_characteristic(), 1);
  }
}

TEST(Develop, Canonical) {
  auto t2 = share(fx::torus());
  EXPECT_TRUE(*develop_ball(t2, 0, 4).ball == *develop_ball(t2, 0, 4).ball);
  auto p = share(product(fx::cycle_graph(3), fx::bouquet(2)));
  auto a = develop_ball(p, 1, 3), b = develop_ball(p, 1, 3);
  EXPECT_TRUE(*a.ball == *b.ball);
  EXPECT_EQ(a.base_of, b.base_of);
}

TEST(Develop, Errors) {
  auto b2 = share(fx::bouquet(2));
  EXPECT_THROW(develop_ball(b2, 3, 1), Error);
  EXPECT_THROW(develop_ball(b2, 0, -1), Error);
  try {
    develop_ball(share(fx::doubled_square()), 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNPC);
  }
}

TEST(Develop, BallIsContractible) {
  auto p = share(product(fx::cycle_graph(3), fx::cycle_graph(4)));
  for (int r = 1; r <= 4; ++r) {
    auto b = develop_ball(p, 0, r);
    EXPECT_EQ(b.ball->euler_characteristic(), 1);
    EXPECT_TRUE(b.ball->connected());
    for (std::size_t v = 0; v < b.size(); ++v) EXPECT_LE(b.dist[v], r);
  }
}

TEST(Systole, Examples) {
  EXPECT_EQ(systole(share(fx::cycle_graph(6))).str(), "Exact(6)");
  EXPECT_EQ(systole(share(fx::bouquet(2))).str(), "Exact(1)");
  EXPECT_EQ(systole(share(fx::torus())).str(), "Exact(1)");
  EXPECT_EQ(systole(share(fx::theta())).str(), "Exact(2)");
  auto tree = systole(share(fx::tripod()), 10);
  EXPECT_EQ(tree.str(), "AtLeast(11)");
  EXPECT_TRUE(tree.simply_connected);
  auto sq = systole(share(fx::grid(2, 2)), 5);
  EXPECT_FALSE(sq.exact);
  EXPECT_TRUE(sq.simply_connected);
  EXPECT_EQ(systole(share(product(fx::cycle_graph(3), fx::cycle_graph(5)))).str(), "Exact(3)");
}

TEST(Systole, WitnessIsClosedAndEssential) {
  for (auto x : {share(fx::cycle_graph(5)), share(product(fx::cycle_graph(4), fx::cycle_graph(3))), share(fx::theta())}) {
    auto s = systole(x);
    ASSERT_TRUE(s.exact);
    ASSERT_EQ(static_cast<int>(s.witness.size()), s.value);
    CubeId at = s.vertex;
    for (const auto& e : s.witness) {
      ASSERT_EQ(x->edge_vertex(e), at);
      at = x->edge_vertex({e.edge, 1 - e.side});
    }
    EXPECT_EQ(at, s.vertex);
    auto ball = develop_ball(x, s.vertex, s.value);
    EXPECT_NE(lift_path(ball, s.witness), 0);
  }
}

TEST(Systole, MatchesBruteForce) {
  std::vector<std::shared_ptr<const CubeComplex>> xs = {
      share(fx::cycle_graph(6)), share(fx::bouquet(2)), share(fx::torus()), share(fx::theta()),
      share(product(fx::cycle_graph(3), fx::cycle_graph(4))), share(product(fx::cycle_graph(5), fx::path_graph(2))),
      share(fx::cycle_graph(9))};
  std::mt19937 rng(7);
  for (int i = 0; i < 30; ++i) {
    int n = std::uniform_int_distribution<int>(2, 7)(rng);
    CubeComplex g = fx::path_graph(n - 1);
    int extra = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int k = 0; k < extra; ++k)
      g.add_edge(std::uniform_int_distribution<int>(0, n - 1)(rng), std::uniform_int_distribution<int>(0, n - 1)(rng));
    xs.push_back(share(std::move(g)));
  }
  for (const auto& x : xs) {
    int brute = oracle::systole(x, 9);
    auto s = systole(x);
    ASSERT_NE(brute, -1);
    EXPECT_TRUE(s.exact);
    EXPECT_EQ(s.value, brute);
  }
}

TEST(Systole, NullHomotopyByLifting) {
  // commutator in the torus lifts closed; in B2 it does not
  std::vector<EdgeEnd> comm = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  EXPECT_EQ(lift_path(develop_ball(share(fx::torus()), 0, 4), comm), 0);
  EXPECT_NE(lift_path(develop_ball(share(fx::bouquet(2)), 0, 4), comm), 0);
}

TEST(Hull, TreePath) {
  auto b2 = share(fx::bouquet(2));
  auto ball = develop_ball(b2, 0, 5);
  CubeId u = lift_path(ball, {{0, 0}, {1, 0}});
  CubeId w = lift_path(ball, {{1, 1}});
  auto h = convex_hull(ball, {u, w});
  EXPECT_EQ(h.count(0), 4u);
  EXPECT_EQ(h.count(1), 3u);
}

TEST(Hull, GridShapes) {
  auto t2 = share(fx::torus());
  auto ball = develop_ball(t2, 0, 8);
  CubeId corner = lift_path(ball, {{0, 0}, {1, 0}});
  auto sq = convex_hull(ball, {0, corner});
  EXPECT_EQ(sq.count(0), 4u);
  EXPECT_EQ(sq.count(1), 4u);
  EXPECT_EQ(sq.count(2), 1u);

  std::vector<EdgeEnd> ell = {{0, 0}, {0, 0}, {1, 0}, {1, 0}, {1, 0}};
  std::vector<CubeId> seed{0};
  std::vector<EdgeEnd> prefix;
  for (const auto& e : ell) {
    prefix.push_back(e);
    seed.push_back(lift_path(ball, prefix));
  }
  auto rect = convex_hull(ball, seed);
  EXPECT_EQ(rect.count(0), 12u);
  EXPECT_EQ(rect.count(1), 17u);
  EXPECT_EQ(rect.count(2), 6u);

  // idempotent and monotone
  auto rv = rect.vertices();
  auto again = convex_hull(ball, std::vector<CubeId>(rv.begin(), rv.end()));
  EXPECT_EQ(again.count(0), 12u);
  auto smaller = convex_hull(ball, {seed[0], seed[2]});
  for (CubeId v : smaller.vertices()) EXPECT_TRUE(rect.contains(0, v));
}

TEST(Hull, FrontierContamination) {
  auto t2 = share(fx::torus());
  auto ball = develop_ball(t2, 0, 3);
  CubeId far = lift_path(ball, {{0, 0}, {0, 0}, {1, 0}});
  try {
    convex_hull(ball, {0, far});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FrontierContamination);
  }
}

TEST(Superconvex, Examples) {
  auto t2 = share(fx::torus());
  auto id = superconvexity_check(identity_map(t2), 8);
  EXPECT_TRUE(id.passed());
  EXPECT_EQ(*id.find("L"), "0");

  auto bad = fx::nonexample_product();
  for (int cutoff : {1, 4, 8, 16}) {
    auto c = superconvexity_check(bad, cutoff);
    EXPECT_EQ(c.status, Status::fail);
    EXPECT_EQ(c.reason, "NotSuperconvexUpTo(" + std::to_string(cutoff) + ")");
  }

  auto cyc = superconvexity_check(fx::word_cycle("aabAB"), 4);
  EXPECT_TRUE(cyc.passed());
  EXPECT_EQ(*cyc.find("L"), "0");
}

TEST(Superconvex, FiniteStrip) {
  // bottom edge of one square: the only strip is the square itself
  auto sq = share(fx::square());
  auto edge = share(fx::interval());
  auto f = graph_map(edge, sq, {0, 2}, {{product_cube_id(fx::interval(), fx::interval(), 1, 0, 0, 0), false}});
  ASSERT_TRUE(check_local_isometry(f).passed());
  auto c = superconvexity_check(f, 4);
  EXPECT_TRUE(c.passed());
  EXPECT_EQ(*c.find("L"), "1");
  EXPECT_EQ(superconvexity_check(f, 1).status, Status::fail);
}

TEST(Superconvex, AxisInTorusIsUnbounded) {
  auto t2 = share(fx::torus());
  auto axis = graph_map(share(fx::bouquet(1)), t2, {0}, {{0, false}});
  EXPECT_EQ(superconvexity_check(axis, 64).status, Status::fail);
}

TEST(Superconvex, RejectsNonIsometry) {
  auto sq = share(fx::square());
  auto corner = graph_map(share(fx::path_graph(2)), sq, {2, 0, 1},
                          {{product_cube_id(fx::interval(), fx::interval(), 1, 0, 0, 0), true},
                           {product_cube_id(fx::interval(), fx::interval(), 0, 0, 1, 0), false}});
  EXPECT_THROW(superconvexity_check(corner, 4), Error);
}

TEST(Superconvex, GraphsAlwaysZero) {
  std::mt19937 rng(11);
  auto b3 = share(fx::bouquet(3));
  const std::string letters = "abcABC";
  for (int i = 0; i < 40; ++i) {
    std::string w;
    int len = std::uniform_int_distribution<int>(1, 8)(rng);
    while (static_cast<int>(w.size()) < len) {
      char c = letters[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 5)(rng))];
      if (!w.empty() && fx::letter_index(c) == fx::letter_index(w.back()) && c != w.back()) continue;
      w += c;
    }
    if (w.size() > 1 && fx::letter_index(w.front()) == fx::letter_index(w.back()) && w.front() != w.back()) continue;
    auto f = fx::word_cycle(w, b3);
    if (!check_local_isometry(f).passed()) continue;
    auto c = superconvexity_check(f, 2);
    EXPECT_TRUE(c.passed()) << w;
    EXPECT_EQ(*c.find("L"), "0");
  }
}
