#include "cubecx/fixtures.hpp"
#include "cubecx/hyperplane.hpp"
#include "cubecx/io.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cubecx;
namespace fx = cubecx::fixtures;

TEST(Validate, SquarePasses) {
  auto sq = fx::square();
  auto c = validate_complex(sq);
  EXPECT_TRUE(c.passed()) << render(c);
  EXPECT_EQ(*c.find("dim"), "2");
  EXPECT_EQ(*c.find("cubes[0]"), "4");
  EXPECT_EQ(*c.find("cubes[1]"), "4");
  EXPECT_EQ(*c.find("cubes[2]"), "1");
  for (CubeId v = 0; v < 4; ++v) {
    auto l = vertex_link(sq, v);
    EXPECT_EQ(l.vertices.size(), 2u);
    ASSERT_EQ(l.simplices.size(), 1u);
  }
}

TEST(Validate, TorusLinkIsFourCycle) {
  auto t2 = fx::torus();
  EXPECT_TRUE(validate_complex(t2).passed());
  auto l = vertex_link(t2, 0);
  ASSERT_EQ(l.vertices.size(), 4u);
  ASSERT_EQ(l.simplices.size(), 4u);
  std::vector<int> degree(4, 0);
  std::set<std::pair<int, int>> edges;
  for (auto s : l.simplices) {
    std::sort(s.begin(), s.end());
    edges.emplace(s[0], s[1]);
    ++degree[static_cast<std::size_t>(s[0])];
    ++degree[static_cast<std::size_t>(s[1])];
  }
  EXPECT_EQ(edges.size(), 4u);
  for (int d : degree) EXPECT_EQ(d, 2);
  // a+ and a- are not adjacent in the 4-cycle
  EXPECT_FALSE(edges.count({l.index_of({0, 0}), l.index_of({0, 1})}));
}

TEST(Validate, DoubledSquareNotSimplicial) {
  auto c = validate_complex(fx::doubled_square());
  EXPECT_EQ(c.status, Status::fail);
  EXPECT_EQ(c.reason, "NonSimplicialLink");
  EXPECT_TRUE(c.witness.contains("vertex"));
}

TEST(Validate, DanglingAndIncompatible) {
  CubeComplex x(2);
  x.add_edge(0, 1);
  Cube bad = x.cube(1, 0);
  bad.faces[1].id = 7;
  x.add_cube(1, bad);
  EXPECT_EQ(validate_complex(x).reason, "DanglingFace");

  CubeComplex y(2);
  y.add_edge(0, 1);
  Cube wrong = y.cube(1, 0);
  wrong.faces[0].id = 1;  // corner says 0
  y.add_cube(1, wrong);
  EXPECT_EQ(validate_complex(y).reason, "IncompatibleFaces");
}

TEST(Validate, MissingCubeIsNotFlag) {
  // Boundary of a 3-cube: three squares at each corner with no 3-cube filling them.
  auto c3 = product(fx::square(), fx::interval());
  CubeComplex hollow(c3.vertex_count());
  for (const auto& e : c3.cubes(1)) hollow.add_cube(1, e);
  for (const auto& s : c3.cubes(2)) hollow.add_cube(2, s);
  EXPECT_TRUE(validate_complex(c3).passed());
  auto c = validate_complex(hollow);
  EXPECT_EQ(c.reason, "NonFlagLink");
}

TEST(Link, BouquetHasFourIsolatedVertices) {
  auto l = vertex_link(fx::bouquet(2), 0);
  EXPECT_EQ(l.vertices.size(), 4u);
  EXPECT_TRUE(l.simplices.empty());
  EXPECT_THROW(vertex_link(fx::bouquet(2), 3), Error);
}

TEST(Hyperplanes, Examples) {
  auto hb = hyperplanes(fx::bouquet(2));
  ASSERT_EQ(hb.size(), 2u);
  for (const auto& h : hb) {
    EXPECT_EQ(h.midcubes.vertex_count(), 1u);
    EXPECT_TRUE(h.embedded);
    EXPECT_TRUE(h.two_sided);
    EXPECT_EQ(h.contractible, Tri::yes);
  }
  auto hs = hyperplanes(fx::square());
  ASSERT_EQ(hs.size(), 2u);
  for (const auto& h : hs) {
    EXPECT_EQ(h.midcubes.count(1), 1u);
    EXPECT_EQ(h.contractible, Tri::yes);
    EXPECT_EQ(h.carrier.count(2), 1u);
  }
  auto ht = hyperplanes(fx::torus());
  ASSERT_EQ(ht.size(), 2u);
  for (const auto& h : ht) {
    EXPECT_EQ(h.midcubes.vertex_count(), 1u);
    EXPECT_EQ(h.midcubes.count(1), 1u);
    EXPECT_EQ(h.contractible, Tri::no);
    EXPECT_TRUE(h.two_sided);
  }
}

TEST(Hyperplanes, MobiusIsOneSided) {
  // One square whose left and right sides are the same edge, glued with a twist.
  CubeComplex x(2);
  CubeId bottom = x.add_edge(0, 1), side = x.add_edge(0, 1), top = x.add_edge(1, 0);
  // corners: 0=0, 1=1, 2=1, 3=0 -> left edge 0->1, right edge 1->0 (reversed side)
  add_square(x, {bottom}, {side, true}, {top}, {side});
  auto hs = hyperplanes(x);
  ASSERT_EQ(hs.size(), 2u);
  // the core circle is dual to the self-glued side edge
  auto& core = hs[0].edges.size() == 1 ? hs[0] : hs[1];
  auto& across = hs[0].edges.size() == 1 ? hs[1] : hs[0];
  EXPECT_FALSE(core.two_sided);
  EXPECT_TRUE(across.two_sided);
  EXPECT_EQ(across.edges.size(), 2u);
}

TEST(Pseudograph, Examples) {
  auto b = pseudograph_certificate(fx::bouquet(2));
  EXPECT_TRUE(b.passed());
  EXPECT_EQ(*b.find("rank"), "2");
  auto s = pseudograph_certificate(fx::square());
  EXPECT_TRUE(s.passed());
  EXPECT_EQ(*s.find("rank"), "0");
  auto t = pseudograph_certificate(fx::torus());
  EXPECT_EQ(t.status, Status::fail);
  EXPECT_EQ(t.witness["hyperplane"], 0);
  CubeComplex two(2);
  EXPECT_THROW(pseudograph_certificate(two), Error);
}

TEST(LocalIsometry, Examples) {
  auto b2 = share(fx::bouquet(2));
  EXPECT_TRUE(check_local_isometry(identity_map(b2)).passed());
  EXPECT_TRUE(check_local_isometry(fx::word_cycle("abab", b2)).passed());
  // path a a^-1 folds at the middle vertex
  auto p = share(fx::path_graph(2));
  auto folded = graph_map(p, b2, {0, 0, 0}, {{0, false}, {0, true}});
  auto c = check_local_isometry(folded);
  EXPECT_EQ(c.reason, "LinkNotInjective");
  // the fiber B2 x pt is locally convex in B2 x B2
  EXPECT_TRUE(check_local_isometry(fx::nonexample_product()).passed());
  // two adjacent edges of a square without the square
  auto corner = graph_map(share(fx::path_graph(2)), share(fx::square()), {2, 0, 1},
                          {{product_cube_id(fx::interval(), fx::interval(), 1, 0, 0, 0), true},
                           {product_cube_id(fx::interval(), fx::interval(), 0, 0, 1, 0), false}});
  EXPECT_TRUE(validate_map(corner).passed());
  EXPECT_EQ(check_local_isometry(corner).reason, "MissingSquare");
  // a single side of a square is fine
  auto sq = share(fx::square());
  auto iv = share(fx::interval());
  auto into = graph_map(iv, sq, {0, 2}, {{product_cube_id(fx::interval(), fx::interval(), 1, 0, 0, 0), false}});
  EXPECT_TRUE(validate_map(into).passed());
  EXPECT_TRUE(check_local_isometry(into).passed());
}

TEST(Subdivide, Examples) {
  auto e = subdivide(fx::interval());
  EXPECT_EQ(e.vertex_count(), 3u);
  EXPECT_EQ(e.count(1), 2u);
  auto c10 = subdivide(fx::cycle_graph(5));
  EXPECT_EQ(c10.vertex_count(), 10u);
  EXPECT_EQ(c10.count(1), 10u);
  EXPECT_TRUE(validate_complex(c10).passed());
  auto s4 = subdivide(fx::square());
  EXPECT_EQ(s4.vertex_count(), 9u);
  EXPECT_EQ(s4.count(1), 12u);
  EXPECT_EQ(s4.count(2), 4u);
  EXPECT_TRUE(validate_complex(s4).passed());
  auto st = subdivide(fx::torus());
  EXPECT_TRUE(validate_complex(st).passed());
  EXPECT_EQ(st.count(2), 4u);
  EXPECT_EQ(st.euler_characteristic(), 0);
  auto c3 = subdivide(product(fx::square(), fx::interval()));
  EXPECT_TRUE(validate_complex(c3).passed());
  EXPECT_EQ(c3.count(3), 8u);
  EXPECT_EQ(c3.vertex_count(), 27u);
}

TEST(Properties, EulerAndRankOnGraphs) {
  std::mt19937 rng(11);
  for (int t = 0; t < 30; ++t) {
    int v = std::uniform_int_distribution<int>(1, 8)(rng);
    CubeComplex g(static_cast<std::size_t>(v));
    for (int i = 1; i < v; ++i) g.add_edge(std::uniform_int_distribution<int>(0, i - 1)(rng), i);
    int extra = std::uniform_int_distribution<int>(0, 5)(rng);
    for (int i = 0; i < extra; ++i)
      g.add_edge(std::uniform_int_distribution<int>(0, v - 1)(rng), std::uniform_int_distribution<int>(0, v - 1)(rng));
    long chi = static_cast<long>(g.vertex_count()) - static_cast<long>(g.count(1));
    EXPECT_EQ(g.euler_characteristic(), chi);
    auto c = pseudograph_certificate(g);
    EXPECT_TRUE(c.passed());
    EXPECT_EQ(*c.find("rank"), std::to_string(g.count(1) - g.vertex_count() + 1));
    EXPECT_EQ(hyperplanes(subdivide(g)).size(), 2 * g.count(1));
    EXPECT_TRUE(check_local_isometry(identity_map(share(g))).passed());
  }
}

TEST(Properties, ProductHyperplaneCount) {
  std::vector<CubeComplex> parts = {fx::bouquet(2), fx::cycle_graph(3), fx::path_graph(2), fx::torus(), fx::square(),
                                    fx::theta()};
  for (const auto& a : parts)
    for (const auto& b : parts) {
      auto p = product(a, b);
      ASSERT_TRUE(validate_complex(p).passed());
      EXPECT_EQ(hyperplanes(p).size(), hyperplanes(a).size() + hyperplanes(b).size());
      EXPECT_EQ(p.euler_characteristic(), a.euler_characteristic() * b.euler_characteristic());
      EXPECT_TRUE(check_local_isometry(identity_map(share(p))).passed());
    }
}

TEST(Properties, NpcAndHyperplanesMatchOracle) {
  std::mt19937 rng(2024);
  int pass = 0, fail = 0;
  for (int t = 0; t < 300; ++t) {
    CubeComplex x = oracle::random_square_complex(rng);
    if (t % 5 == 0) x = product(x.count(2) ? fx::interval() : x, fx::path_graph(1));
    ASSERT_LE(x.total_cells(), 60u);
    bool verdict = validate_complex(x).passed();
    EXPECT_EQ(verdict, oracle::npc(x)) << "case " << t;
    (verdict ? pass : fail)++;
    auto hs = hyperplanes(x);
    std::vector<std::vector<CubeId>> mine;
    for (const auto& h : hs) mine.push_back(h.edges);
    EXPECT_EQ(mine, oracle::edge_partition(x)) << "case " << t;
  }
  EXPECT_GT(pass, 20);
  EXPECT_GT(fail, 20);
}

TEST(IO, RoundTrip) {
  for (const auto& x : {fx::bouquet(2), fx::torus(), fx::square(), subdivide(fx::torus()),
                        product(fx::square(), fx::interval())}) {
    auto text = dump(complex_to_json(x));
    auto back = complex_from_json(Json::parse(text));
    EXPECT_EQ(back, x);
    EXPECT_EQ(dump(complex_to_json(back)), text);
  }
  auto f = fx::word_cycle("abAB");
  auto text = dump(map_to_json(f));
  auto g = map_from_json(Json::parse(text), ".", "inline");
  EXPECT_EQ(dump(map_to_json(g)), text);
  EXPECT_THROW(complex_from_json(Json::parse(R"({"cubes": {"1": [{"id": 3}]}})")), Error);
}
