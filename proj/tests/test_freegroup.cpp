#include "cubecx/freegroup.hpp"

#include <gtest/gtest.h>

#include <random>
#include <unordered_map>

using namespace cubecx;

namespace {

Word random_cyclic(std::mt19937& rng, int len, int rank = 2) {
  Word w;
  while (static_cast<int>(w.size()) < len) {
    int k = std::uniform_int_distribution<int>(0, 2 * rank - 1)(rng);
    char c = letter(k / 2, k % 2 == 1);
    if (!w.empty() && c == inverse_letter(w.back())) continue;
    if (static_cast<int>(w.size()) == len - 1 && len > 1 && c == inverse_letter(w.front())) continue;
    w += c;
  }
  return w;
}

// Longest word that occurs at two distinct readings (relator, start,
// orientation) of relators at least that long, by hashing substrings.
int substring_oracle(const std::vector<Word>& words) {
  int best = 0;
  std::size_t longest = 0;
  for (const auto& w : words) longest = std::max(longest, w.size());
  for (std::size_t len = 1; len <= longest; ++len) {
    std::unordered_map<std::string, std::vector<std::size_t>> seen;  // substring -> relators, one entry per reading
    for (std::size_t p = 0; p < words.size(); ++p) {
      if (words[p].size() < len) continue;
      for (int inv = 0; inv < 2; ++inv) {
        Word w = inv ? inverse_word(words[p]) : words[p];
        Word ww = w + w;
        for (std::size_t i = 0; i < w.size(); ++i) seen[ww.substr(i, len)].push_back(p);
      }
    }
    for (const auto& [str, where] : seen)
      if (where.size() >= 2) best = static_cast<int>(len);
  }
  return best;
}

}  // namespace

TEST(Words, Basics) {
  EXPECT_EQ(free_reduce("aAbBa"), "a");
  EXPECT_EQ(cyclic_reduce("Bab"), "a");
  EXPECT_EQ(inverse_word("abC"), "cBA");
  EXPECT_EQ(canonical_cyclic("ba"), "ab");
  EXPECT_EQ(canonical_cyclic("BA"), "ab");
  EXPECT_TRUE(is_cyclically_reduced("abAB"));
  EXPECT_FALSE(is_cyclically_reduced("abA"));
  EXPECT_THROW(validate_word("abc", 2), Error);
}

TEST(Fold, Examples) {
  LabeledGraph g;
  g.rank = 2;
  g.base = g.add_vertex();
  int l1 = g.add_vertex(), l2 = g.add_vertex();
  g.add_edge(0, l1, 0);
  g.add_edge(0, l2, 0);
  auto f = fold(g);
  EXPECT_EQ(f.vertices, 2);
  EXPECT_EQ(f.edges.size(), 1u);
  EXPECT_TRUE(f.folded());
  EXPECT_FALSE(g.folded());

  auto c = cycle_of("abAB", 2);
  EXPECT_TRUE(c.folded());
  EXPECT_EQ(canonical_form(fold(c)), canonical_form(c));

  // paths ab and a with common ends: one fold leaves an a-edge then a b-loop
  LabeledGraph w;
  w.rank = 2;
  w.base = w.add_vertex();
  int end = w.add_vertex();
  append_path(w, 0, "ab", end);
  append_path(w, 0, "a", end);
  auto fw = fold(w);
  EXPECT_EQ(fw.vertices, 2);
  ASSERT_EQ(fw.edges.size(), 2u);
  EXPECT_EQ(fw.edges[0], (LabeledGraph::Edge{0, 1, 0}));
  EXPECT_EQ(fw.edges[1], (LabeledGraph::Edge{1, 1, 1}));
}

TEST(Fold, IdempotentAndConfluent) {
  std::mt19937 rng(23);
  for (int i = 0; i < 100; ++i) {
    std::vector<Word> ws;
    int k = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int j = 0; j < k; ++j) ws.push_back(free_reduce(random_cyclic(rng, std::uniform_int_distribution<int>(1, 8)(rng))));
    auto g = wedge_of(ws, 2);
    auto f = fold(g);
    ASSERT_TRUE(f.folded());
    auto form = canonical_form(f);
    EXPECT_EQ(canonical_form(fold(f)), form);
    for (int t = 0; t < 5; ++t) {
      auto h = g;
      std::shuffle(h.edges.begin(), h.edges.end(), rng);
      // rename vertices too, keeping the base
      std::vector<int> perm(static_cast<std::size_t>(h.vertices));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (auto& e : h.edges) {
        e.from = perm[static_cast<std::size_t>(e.from)];
        e.to = perm[static_cast<std::size_t>(e.to)];
      }
      h.base = perm[static_cast<std::size_t>(h.base)];
      EXPECT_EQ(canonical_form(fold(h)), form);
    }
    // the subgroup is unchanged: each generator still reads a closed loop at the base
    for (const auto& w : ws) {
      auto ends = read_word(f, w, f.base);
      ASSERT_EQ(ends.size(), 1u);
      EXPECT_EQ(ends[0], f.base);
    }
  }
}

TEST(Avoider, Examples) {
  auto none = avoider(2, {});
  EXPECT_EQ(none.sigma, "a");
  EXPECT_TRUE(none.certificate.passed());

  auto la = avoider(2, {cycle_of("a", 2)});
  EXPECT_NE(la.sigma.find_first_of("bB"), Word::npos);
  EXPECT_TRUE(la.certificate.passed());
  EXPECT_TRUE(read_word(cycle_of("a", 2), la.sigma, 0).empty());

  auto lab = avoider(2, {cycle_of("a", 2), cycle_of("b", 2)});
  EXPECT_NE(lab.sigma.find_first_of("aA"), Word::npos);
  EXPECT_NE(lab.sigma.find_first_of("bB"), Word::npos);
  EXPECT_TRUE(lab.certificate.passed());
  EXPECT_TRUE(wedge_immersed({lab.sigma1, lab.sigma2}));

  try {
    avoider(2, {cycle_of("a", 2), wedge_of({"a", "b"}, 2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FiniteIndexConstraint);
  }
  EXPECT_THROW(avoider(1, {}), Error);
}

TEST(Avoider, RandomConstraintsVerified) {
  std::mt19937 rng(29);
  for (int i = 0; i < 60; ++i) {
    std::vector<LabeledGraph> cs;
    int k = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int j = 0; j < k; ++j) {
      std::vector<Word> ws;
      for (int t = 0; t < 2; ++t) ws.push_back(free_reduce(random_cyclic(rng, std::uniform_int_distribution<int>(1, 6)(rng))));
      cs.push_back(fold(wedge_of(ws, 2)));
    }
    bool finite = false;
    for (const auto& c : cs) {
      std::vector<int> deg(static_cast<std::size_t>(c.vertices), 0);
      for (const auto& e : c.edges) ++deg[static_cast<std::size_t>(e.from)], ++deg[static_cast<std::size_t>(e.to)];
      finite = finite || std::all_of(deg.begin(), deg.end(), [](int d) { return d == 4; });
    }
    if (finite) continue;
    auto r = avoider(2, cs);
    EXPECT_TRUE(r.certificate.passed());
    EXPECT_TRUE(is_cyclically_reduced(r.sigma));
    EXPECT_TRUE(wedge_immersed({r.sigma1, r.sigma2}));
    // exhaustive lift attempts, also of every cyclic conjugate power
    for (const auto& c : cs)
      for (int v = 0; v < c.vertices; ++v) {
        EXPECT_TRUE(read_word(c, r.sigma, v).empty());
        EXPECT_TRUE(read_word(c, r.sigma2, v).empty());
      }
  }
}

TEST(Malnormal, Formula) {
  auto r = malnormalize("a", "b", 3);
  EXPECT_EQ(r.u, "ababbabbba");
  EXPECT_EQ(r.v, "babaabaaab");
  EXPECT_EQ(r.u, "a" "b" "a" "bb" "a" "bbb" "a");
  try {
    malnormalize("a", "a", 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotImmersedWedge);
  }
}

TEST(Malnormal, KnownCases) {
  EXPECT_TRUE(malnormality_check(cycle_of("a", 2)).passed());
  EXPECT_FALSE(malnormality_check(cycle_of("aa", 2)).passed());
  EXPECT_FALSE(malnormality_check(wedge_of({"a", "baB"}, 2)).passed());
  EXPECT_FALSE(malnormality_check(cycle_of("abab", 2)).passed());
  EXPECT_TRUE(malnormality_check(cycle_of("aab", 2)).passed());
  int n = minimal_malnormal_n("a", "b", 8);
  EXPECT_GE(n, 1);
  EXPECT_TRUE(malnormalize("a", "b", n).certificate.passed());
  for (int k = 1; k < n; ++k) EXPECT_FALSE(malnormalize("a", "b", k).certificate.passed());
}

TEST(ScWords, Formula) {
  EXPECT_EQ(sc_words(2, 3), (std::pair<Word, Word>{"abaab", "babbabbba"}));
  EXPECT_EQ(sc_words(2, 2), (std::pair<Word, Word>{"abaab", "babba"}));
  for (int m = 2; m <= 9; ++m)
    for (int n = 2; n <= 9; ++n) {
      auto [a, b] = sc_words(m, n);
      EXPECT_EQ(static_cast<int>(a.size()), m * (m + 1) / 2 + m);
      EXPECT_EQ(static_cast<int>(b.size()), n * (n + 1) / 2 + n);
    }
  try {
    sc_words(1, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateParameters);
  }
}

TEST(Graphical, Examples) {
  EXPECT_TRUE(graphical_cprime(2, {}, Rational(1, 4)).passed());
  auto c = graphical_cprime(2, {"aabb"}, Rational(1, 4));
  EXPECT_EQ(c.status, Status::fail);
  EXPECT_GE(std::stoi(*c.find("max_piece")), 1);
}

TEST(Graphical, MatchesSubstringOracle) {
  std::mt19937 rng(31);
  for (int i = 0; i < 80; ++i) {
    std::vector<Word> ws;
    int k = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int j = 0; j < k; ++j) ws.push_back(random_cyclic(rng, std::uniform_int_distribution<int>(2, 10)(rng)));
    EXPECT_EQ(longest_graphical_piece(ws).length, substring_oracle(ws)) << ws[0];
  }
}

TEST(Graphical, ScWordsSearch) {
  // least m with sc_words(m, m) passing 1/8; the boundary is confirmed by the oracle
  int found = -1;
  for (int m = 2; m <= 40 && found < 0; ++m) {
    auto [a, b] = sc_words(m, m);
    if (graphical_cprime(2, {a, b}, Rational(1, 8)).passed()) found = m;
  }
  ASSERT_EQ(found, 28);
  for (int m : {27, 28}) {
    auto [a, b] = sc_words(m, m);
    int piece = substring_oracle({a, b});
    EXPECT_EQ(piece, longest_graphical_piece({a, b}).length);
    EXPECT_EQ(piece * 8 < static_cast<int>(a.size()), m == 28);
  }
}

TEST(Graphical, AgreesWithFiberDiameters) {
  std::mt19937 rng(37);
  auto b2 = share(fixtures::bouquet(2));
  for (int i = 0; i < 40; ++i) {
    std::vector<Word> ws{random_cyclic(rng, std::uniform_int_distribution<int>(3, 9)(rng)),
                         random_cyclic(rng, std::uniform_int_distribution<int>(3, 9)(rng))};
    bool power = false;
    for (const auto& w : ws)
      for (std::size_t d = 1; d < w.size(); ++d)
        if (w.size() % d == 0 && w.substr(d) + w.substr(0, d) == w) power = true;
    if (power) continue;
    int best = 0;
    std::vector<CubicalMap> maps;
    for (const auto& w : ws) maps.push_back(graph_to_map(cycle_of(w, 2), b2));
    for (std::size_t p = 0; p < maps.size(); ++p)
      for (std::size_t q = p; q < maps.size(); ++q) {
        auto fp = fiber_product(maps[p], maps[q]);
        int cap = static_cast<int>(std::min(ws[p].size(), ws[q].size()));
        for (std::size_t c = 0; c < fp.components.size(); ++c) {
          if (fp.components[c].diagonal) continue;
          auto m = component_metrics(fp, static_cast<int>(c));
          best = std::max(best, m.verdict == Verdict::contractible ? std::min(m.diameter, cap) : cap);
        }
      }
    EXPECT_EQ(longest_graphical_piece(ws).length, best)
        << ws[0] << " " << ws[1];
  }
}
