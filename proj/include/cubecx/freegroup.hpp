#pragma once

#include "cubecx/fiber.hpp"
#include "cubecx/fixtures.hpp"

#include <cctype>
#include <numeric>

namespace cubecx {

// ---------------------------------------------------------------------------
// Words: lowercase letters are generators, uppercase their inverses.

using Word = std::string;

inline bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline int generator_of(char c) { return std::tolower(static_cast<unsigned char>(c)) - 'a'; }
inline bool is_inverse_letter(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
inline char inverse_letter(char c) {
  return is_inverse_letter(c) ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                              : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}
inline char letter(int gen, bool inverse) { return static_cast<char>((inverse ? 'A' : 'a') + gen); }

inline void validate_word(const Word& w, int rank, const std::string& what = "word") {
  for (char c : w)
    if (!is_letter(c) || generator_of(c) >= rank)
      throw Error(ErrorKind::Validation, what + " '" + w + "' uses a letter outside rank " + std::to_string(rank));
}

inline Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (char& c : out) c = inverse_letter(c);
  return out;
}

inline Word free_reduce(const Word& w) {
  Word out;
  for (char c : w) {
    if (!out.empty() && out.back() == inverse_letter(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

inline Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == inverse_letter(r[j - 1])) {
    ++i;
    --j;
  }
  return r.substr(i, j - i);
}

inline bool is_reduced(const Word& w) { return free_reduce(w) == w; }
inline bool is_cyclically_reduced(const Word& w) {
  return is_reduced(w) && (w.size() < 2 || w.front() != inverse_letter(w.back()));
}

inline Word power(const Word& w, int n) {
  Word out;
  for (int i = 0; i < n; ++i) out += w;
  return out;
}

/// Alphabet order a < A < b < B < ...
inline bool word_less(const Word& x, const Word& y) {
  auto key = [](char c) { return 2 * generator_of(c) + (is_inverse_letter(c) ? 1 : 0); };
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                      [&](char p, char q) { return key(p) < key(q); });
}

/// Least rotation of the word or of its inverse.
inline Word canonical_cyclic(const Word& w) {
  Word best;
  bool first = true;
  for (const Word& v : {w, inverse_word(w)})
    for (std::size_t k = 0; k < std::max<std::size_t>(v.size(), 1); ++k) {
      Word r = v.substr(k) + v.substr(0, k);
      if (first || word_less(r, best)) best = r;
      first = false;
    }
  return best;
}

// ---------------------------------------------------------------------------
// Labeled graphs over a bouquet

struct LabeledGraph {
  struct Edge {
    int from;
    int to;
    int label;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
  };
  int rank = 2;
  int vertices = 0;
  std::vector<Edge> edges;
  int base = -1;

  int add_vertex() { return vertices++; }
  void add_edge(int from, int to, int label) { edges.push_back({from, to, label}); }

  /// No two edges with one label leave (or enter) the same vertex.
  bool folded() const {
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : edges) {
      if (!seen.insert({e.from, e.label, 0}).second) return false;
      if (!seen.insert({e.to, e.label, 1}).second) return false;
    }
    return true;
  }
};

/// Appends the path reading `w` from `start`; returns its end. With `end` >= 0 the last letter lands there.
inline int append_path(LabeledGraph& g, int start, const Word& w, int end = -1) {
  int at = start;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int next = (i + 1 == w.size() && end >= 0) ? end : g.add_vertex();
    if (is_inverse_letter(w[i])) {
      g.add_edge(next, at, generator_of(w[i]));
    } else {
      g.add_edge(at, next, generator_of(w[i]));
    }
    at = next;
  }
  return at;
}

/// Cycle reading the cyclic word; vertex 0 is the base.
inline LabeledGraph cycle_of(const Word& w, int rank) {
  validate_word(w, rank);
  if (w.empty()) throw Error(ErrorKind::Validation, "empty cyclic word");
  LabeledGraph g;
  g.rank = rank;
  g.base = g.add_vertex();
  append_path(g, 0, w, 0);
  return g;
}

/// Closed loops reading each word, wedged at the base vertex 0.
inline LabeledGraph wedge_of(const std::vector<Word>& words, int rank) {
  LabeledGraph g;
  g.rank = rank;
  g.base = g.add_vertex();
  for (const auto& w : words) {
    validate_word(w, rank);
    if (!w.empty()) append_path(g, 0, w, 0);
  }
  return g;
}

/// Open paths from the base reading each word.
inline LabeledGraph paths_of(const std::vector<Word>& words, int rank) {
  LabeledGraph g;
  g.rank = rank;
  g.base = g.add_vertex();
  for (const auto& w : words) {
    validate_word(w, rank);
    append_path(g, 0, w);
  }
  return g;
}

/// Stallings folding. Surviving vertices keep the order of their least original id.
inline LabeledGraph fold(const LabeledGraph& g) {
  std::vector<int> parent(static_cast<std::size_t>(g.vertices));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  };
  std::vector<char> alive(g.edges.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::tuple<int, int, int>, std::size_t> slot;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      if (!alive[i]) continue;
      const auto& e = g.edges[i];
      int a = find(e.from), b = find(e.to);
      auto out = slot.find({a, e.label, 0});
      if (out != slot.end()) {
        unite(b, g.edges[out->second].to);
        alive[i] = 0;
        changed = true;
        continue;
      }
      auto in = slot.find({b, e.label, 1});
      if (in != slot.end()) {
        unite(a, g.edges[in->second].from);
        alive[i] = 0;
        changed = true;
        continue;
      }
      slot[{a, e.label, 0}] = i;
      slot[{b, e.label, 1}] = i;
    }
  }
  LabeledGraph out;
  out.rank = g.rank;
  std::vector<int> renum(static_cast<std::size_t>(g.vertices), -1);
  for (int v = 0; v < g.vertices; ++v)
    if (find(v) == v) renum[static_cast<std::size_t>(v)] = out.add_vertex();
  std::set<LabeledGraph::Edge> kept;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (alive[i]) {
      const auto& e = g.edges[i];
      kept.insert({renum[static_cast<std::size_t>(find(e.from))], renum[static_cast<std::size_t>(find(e.to))], e.label});
    }
  out.edges.assign(kept.begin(), kept.end());
  out.base = g.base >= 0 ? renum[static_cast<std::size_t>(find(g.base))] : -1;
  return out;
}

/// Repeatedly removes valence-one vertices other than the base.
inline LabeledGraph core(const LabeledGraph& g) {
  std::vector<char> gone(static_cast<std::size_t>(g.vertices), 0), dead(g.edges.size(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> deg(static_cast<std::size_t>(g.vertices), 0);
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (!dead[i]) {
        ++deg[static_cast<std::size_t>(g.edges[i].from)];
        ++deg[static_cast<std::size_t>(g.edges[i].to)];
      }
    for (int v = 0; v < g.vertices; ++v) {
      if (gone[static_cast<std::size_t>(v)] || v == g.base || deg[static_cast<std::size_t>(v)] > 1) continue;
      gone[static_cast<std::size_t>(v)] = 1;
      for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (!dead[i] && (g.edges[i].from == v || g.edges[i].to == v)) dead[i] = 1;
      changed = true;
    }
  }
  LabeledGraph out;
  out.rank = g.rank;
  std::vector<int> renum(static_cast<std::size_t>(g.vertices), -1);
  for (int v = 0; v < g.vertices; ++v)
    if (!gone[static_cast<std::size_t>(v)]) renum[static_cast<std::size_t>(v)] = out.add_vertex();
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (!dead[i])
      out.add_edge(renum[static_cast<std::size_t>(g.edges[i].from)], renum[static_cast<std::size_t>(g.edges[i].to)], g.edges[i].label);
  out.base = g.base >= 0 ? renum[static_cast<std::size_t>(g.base)] : -1;
  return out;
}

/// Vertex renaming by breadth-first search in letter order from the base (or
/// the best start when unbased); equal forms mean isomorphic folded graphs.
inline std::pair<int, std::vector<LabeledGraph::Edge>> canonical_form(const LabeledGraph& g) {
  std::vector<std::vector<std::pair<char, int>>> nbr(static_cast<std::size_t>(g.vertices));
  for (const auto& e : g.edges) {
    nbr[static_cast<std::size_t>(e.from)].push_back({letter(e.label, false), e.to});
    nbr[static_cast<std::size_t>(e.to)].push_back({letter(e.label, true), e.from});
  }
  for (auto& n : nbr) std::sort(n.begin(), n.end());
  auto from = [&](int s) {
    std::vector<int> id(static_cast<std::size_t>(g.vertices), -1);
    std::deque<int> q;
    int next = 0;
    auto visit = [&](int v) {
      if (id[static_cast<std::size_t>(v)] < 0) {
        id[static_cast<std::size_t>(v)] = next++;
        q.push_back(v);
      }
    };
    for (int start = s, k = 0; k < g.vertices; start = (start + 1) % g.vertices, ++k) {
      visit(start);
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (auto [c, w] : nbr[static_cast<std::size_t>(v)]) visit(w);
      }
    }
    std::vector<LabeledGraph::Edge> es;
    for (const auto& e : g.edges) es.push_back({id[static_cast<std::size_t>(e.from)], id[static_cast<std::size_t>(e.to)], e.label});
    std::sort(es.begin(), es.end());
    return es;
  };
  if (g.vertices == 0) return {0, {}};
  if (g.base >= 0) return {g.vertices, from(g.base)};
  auto best = from(0);
  for (int s = 1; s < g.vertices; ++s) best = std::min(best, from(s));
  return {g.vertices, best};
}

/// Every end vertex of a path reading `w` from `v` (one at most when folded).
inline std::vector<int> read_word(const LabeledGraph& g, const Word& w, int v) {
  std::set<int> at{v};
  for (char c : w) {
    std::set<int> next;
    int gen = generator_of(c);
    for (const auto& e : g.edges) {
      if (e.label != gen) continue;
      if (!is_inverse_letter(c) && at.count(e.from)) next.insert(e.to);
      if (is_inverse_letter(c) && at.count(e.to)) next.insert(e.from);
    }
    at = std::move(next);
    if (at.empty()) break;
  }
  return {at.begin(), at.end()};
}

inline bool lifts_somewhere(const LabeledGraph& g, const Word& w) {
  for (int v = 0; v < g.vertices; ++v)
    if (!read_word(g, w, v).empty()) return true;
  return false;
}

/// Graph as a 1-complex with its map to the bouquet.
inline CubicalMap graph_to_map(const LabeledGraph& g, std::shared_ptr<const CubeComplex> bouquet = nullptr) {
  if (!bouquet) bouquet = share(fixtures::bouquet(g.rank));
  CubeComplex x(static_cast<std::size_t>(g.vertices));
  std::vector<std::pair<CubeId, bool>> images;
  for (const auto& e : g.edges) {
    x.add_edge(e.from, e.to);
    images.emplace_back(e.label, false);
  }
  return graph_map(share(std::move(x)), std::move(bouquet), std::vector<CubeId>(static_cast<std::size_t>(g.vertices), 0), images);
}

/// Inverse of graph_to_map for maps into a bouquet.
inline LabeledGraph map_to_graph(const CubicalMap& f) {
  if (f.source->dim() > 1 || f.target->vertex_count() != 1 || f.target->dim() > 1)
    throw Error(ErrorKind::Validation, "labeled graphs map a graph to a bouquet");
  LabeledGraph g;
  g.rank = static_cast<int>(f.target->count(1));
  g.vertices = static_cast<int>(f.source->vertex_count());
  for (std::size_t e = 0; e < f.source->count(1); ++e) {
    const auto& c = f.source->cube(1, static_cast<CubeId>(e)).corners;
    const auto& im = f.image(1, static_cast<CubeId>(e));
    if (im.corr[0].flip) {
      g.add_edge(c[1], c[0], im.id);
    } else {
      g.add_edge(c[0], c[1], im.id);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Conjugacy avoidance

/// Ends at the base must be pairwise distinct for the wedge to immerse.
inline bool wedge_immersed(const std::vector<Word>& loops) {
  std::set<char> ends;
  for (const auto& w : loops) {
    if (w.empty() || !is_cyclically_reduced(w)) return false;
    if (!ends.insert(w.front()).second || !ends.insert(inverse_letter(w.back())).second) return false;
  }
  return true;
}

struct AvoiderResult {
  Word sigma;
  Word sigma1;
  Word sigma2;
  Certificate certificate;
};

namespace detail {

/// Shortest reduced continuation from `v` (after `last`) that leaves the folded graph.
inline Word shortest_exit(const LabeledGraph& g, int v, char last) {
  int r = g.rank;
  auto step = [&](int at, char c) {
    int gen = generator_of(c);
    for (const auto& e : g.edges) {
      if (e.label != gen) continue;
      if (!is_inverse_letter(c) && e.from == at) return e.to;
      if (is_inverse_letter(c) && e.to == at) return e.from;
    }
    return -1;
  };
  std::vector<char> letters;
  for (int k = 0; k < r; ++k) {
    letters.push_back(letter(k, false));
    letters.push_back(letter(k, true));
  }
  std::map<std::pair<int, char>, std::pair<std::pair<int, char>, char>> from;
  std::deque<std::pair<int, char>> q{{v, last}};
  from[{v, last}] = {{-1, 0}, 0};
  while (!q.empty()) {
    auto [at, prev] = q.front();
    q.pop_front();
    for (char c : letters) {
      if (prev && c == inverse_letter(prev)) continue;
      int w = step(at, c);
      if (w < 0) {
        Word out;
        for (std::pair<int, char> s{at, prev}; from[s].first.first >= 0; s = from[s].first) out.push_back(from[s].second);
        std::reverse(out.begin(), out.end());
        return out + c;
      }
      if (!from.count({w, c})) {
        from[{w, c}] = {{at, prev}, c};
        q.push_back({w, c});
      }
    }
  }
  throw Error(ErrorKind::FiniteIndexConstraint, "constraint graph covers the bouquet");
}

inline bool covers_bouquet(const LabeledGraph& g) {
  if (g.vertices == 0) return false;
  std::vector<int> deg(static_cast<std::size_t>(g.vertices), 0);
  for (const auto& e : g.edges) {
    ++deg[static_cast<std::size_t>(e.from)];
    ++deg[static_cast<std::size_t>(e.to)];
  }
  return std::all_of(deg.begin(), deg.end(), [&](int d) { return d == 2 * g.rank; });
}

}  // namespace detail

/// A cyclically reduced word none of whose based lifts exists in any
/// constraint graph, plus two such words whose wedge immerses.
inline AvoiderResult avoider(int rank, const std::vector<LabeledGraph>& constraints) {
  if (rank < 2) throw Error(ErrorKind::RankTooLow, "avoider needs rank at least 2");
  std::vector<LabeledGraph> folded;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (constraints[i].rank != rank) throw Error(ErrorKind::Validation, "constraint " + std::to_string(i) + " has another rank");
    folded.push_back(fold(constraints[i]));
    if (detail::covers_bouquet(folded.back()))
      throw Error(ErrorKind::FiniteIndexConstraint, "constraint " + std::to_string(i) + " has finite index");
  }
  Word mu;
  for (const auto& g : folded)
    for (int v = 0; v < g.vertices; ++v) {
      auto end = read_word(g, mu, v);
      if (end.empty()) continue;
      mu += detail::shortest_exit(g, end.front(), mu.empty() ? 0 : mu.back());
    }
  if (mu.empty()) mu = "a";
  if (mu.size() >= 2 && mu.front() == inverse_letter(mu.back())) {
    for (int k = 0; k < 2 * rank; ++k) {
      char c = letter(k / 2, k % 2 == 1);
      if (c != inverse_letter(mu.back()) && c != inverse_letter(mu.front())) {
        mu += c;
        break;
      }
    }
  }
  AvoiderResult res;
  res.sigma = mu;
  // sigma2 = x sigma y: any word containing sigma fails to lift
  res.sigma1 = mu;
  std::vector<Word> pads{""};
  for (int len = 1; len <= 2; ++len) {
    std::vector<Word> more;
    for (const auto& p : pads)
      if (static_cast<int>(p.size()) == len - 1)
        for (int k = 0; k < 2 * rank; ++k) more.push_back(p + letter(k / 2, k % 2 == 1));
    pads.insert(pads.end(), more.begin(), more.end());
  }
  bool found = false;
  for (const auto& x : pads) {
    for (const auto& y : pads) {
      Word s2 = x + mu + y;
      if (wedge_immersed({res.sigma1, s2})) {
        res.sigma2 = s2;
        found = true;
        break;
      }
    }
    if (found) break;
  }
  auto cert = make_certificate("avoider");
  cert.add("sigma", res.sigma);
  cert.add("sigma1", res.sigma1);
  cert.add("sigma2", res.sigma2);
  cert.add("constraints", constraints.size());
  if (!found) cert.fail("no immersed wedge pair found");
  for (std::size_t i = 0; i < folded.size(); ++i)
    for (const Word& w : {res.sigma, res.sigma1, res.sigma2})
      if (!w.empty() && lifts_somewhere(folded[i], w))
        cert.fail("word lifts to constraint", {{"constraint", i}, {"word", w}});
  if (!is_cyclically_reduced(res.sigma)) cert.fail("sigma is not cyclically reduced");
  res.certificate = std::move(cert);
  return res;
}

// ---------------------------------------------------------------------------
// Malnormality

struct MalnormalResult {
  Word u;
  Word v;
  int n = 0;
  Certificate certificate;
};

/// Every non-diagonal component of G x_B G is a tree, for the folded graph G.
inline Certificate malnormality_check(const LabeledGraph& g) {
  auto folded = fold(g);
  auto f = graph_to_map(folded);
  auto fp = fiber_product(f, f);
  auto cert = make_certificate("malnormality");
  cert.add("vertices", folded.vertices);
  cert.add("edges", folded.edges.size());
  int nontrivial = 0;
  for (const auto& c : fp.components) {
    if (c.diagonal || c.point()) continue;
    ++nontrivial;
    long chi = static_cast<long>(c.cells.count(0)) - static_cast<long>(c.cells.count(1));
    if (chi != 1) {
      auto v = fp.pairs[0][static_cast<std::size_t>(c.cells.vertices()[0])];
      cert.fail("NonTreeComponent",
                {{"component", c.id}, {"pair", {v.first, v.second}}, {"rank", 1 - chi}});
      break;
    }
  }
  cert.add("offdiagonal_components", nontrivial);
  return cert;
}

inline std::pair<Word, Word> malnormal_words(const Word& u, const Word& v, int n) {
  Word u2 = u, v2 = v;
  for (int k = 1; k <= n; ++k) {
    u2 += power(v, k) + u;
    v2 += power(u, k) + v;
  }
  return {u2, v2};
}

/// U' = U V U V^2 ... U V^n U and V' = V U V U^2 ... V U^n V, with the tree test.
inline MalnormalResult malnormalize(const Word& u, const Word& v, int n, int rank = 2) {
  validate_word(u, rank, "U");
  validate_word(v, rank, "V");
  if (n < 1) throw Error(ErrorKind::Validation, "n must be at least 1");
  if (!wedge_immersed({u, v})) throw Error(ErrorKind::NotImmersedWedge, "U and V do not form an immersed wedge");
  MalnormalResult r;
  std::tie(r.u, r.v) = malnormal_words(u, v, n);
  r.n = n;
  auto check = malnormality_check(wedge_of({r.u, r.v}, rank));
  auto cert = make_certificate("malnormalize");
  cert.add("n", n);
  cert.add("U'", r.u);
  cert.add("V'", r.v);
  cert.absorb(std::move(check));
  r.certificate = std::move(cert);
  return r;
}

/// Least n in [1, max_n] whose output passes the tree test; -1 when none does.
inline int minimal_malnormal_n(const Word& u, const Word& v, int max_n, int rank = 2) {
  for (int n = 1; n <= max_n; ++n)
    if (malnormalize(u, v, n, rank).certificate.passed()) return n;
  return -1;
}

// ---------------------------------------------------------------------------
// Small-cancellation words and the classical graphical condition

inline std::pair<Word, Word> sc_words(int m, int n) {
  if (m < 2 || n < 2) throw Error(ErrorKind::DegenerateParameters, "sc_words needs m, n >= 2");
  Word a, b;
  for (int k = 1; k <= m; ++k) a += Word(static_cast<std::size_t>(k), 'a') + "b";
  for (int k = 1; k <= n; ++k) b += Word(static_cast<std::size_t>(k), 'b') + "a";
  return {a, b};
}

struct GraphicalPiece {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t at_first = 0;
  std::size_t at_second = 0;
  bool inverted = false;
  int length = 0;
};

namespace detail {

/// Runs along each cyclic diagonal (i, j) -> (i+1, j+1): walking back from a
/// mismatch gives every common run in O(|a| |b|). Runs are capped at the shorter length.
template <class Visit>
void common_runs(const Word& a, const Word& b, Visit&& visit) {
  std::size_t na = a.size(), nb = b.size(), cap = std::min(na, nb);
  std::vector<char> done(na * nb, 0);
  std::vector<std::pair<std::size_t, std::size_t>> cyc;
  for (std::size_t i0 = 0; i0 < na; ++i0)
    for (std::size_t j0 = 0; j0 < nb; ++j0) {
      if (done[i0 * nb + j0]) continue;
      cyc.clear();
      std::size_t i = i0, j = j0, miss = SIZE_MAX;
      do {
        done[i * nb + j] = 1;
        if (a[i] != b[j] && miss == SIZE_MAX) miss = cyc.size();
        cyc.emplace_back(i, j);
        i = (i + 1) % na;
        j = (j + 1) % nb;
      } while (i != i0 || j != j0);
      if (miss == SIZE_MAX) {
        for (auto [x, y] : cyc) visit(x, y, static_cast<int>(cap));
        continue;
      }
      std::size_t run = 0, n = cyc.size();
      for (std::size_t k = 0; k < n; ++k) {
        auto [x, y] = cyc[(miss + n - k) % n];
        run = a[x] == b[y] ? std::min(run + 1, cap) : 0;
        visit(x, y, static_cast<int>(run));
      }
    }
}

}  // namespace detail

/// Longest piece among all pairs of relator cycles, shifts and orientations.
inline GraphicalPiece longest_graphical_piece(const std::vector<Word>& words) {
  GraphicalPiece best;
  for (std::size_t p = 0; p < words.size(); ++p)
    for (std::size_t q = p; q < words.size(); ++q)
      for (int inv = 0; inv < 2; ++inv) {
        Word b = inv ? inverse_word(words[q]) : words[q];
        detail::common_runs(words[p], b, [&](std::size_t i, std::size_t j, int len) {
          if (p == q && !inv && i == j) return;
          if (len > best.length) best = {p, q, i, j, inv == 1, len};
        });
      }
  return best;
}

inline Certificate graphical_cprime(int rank, const std::vector<Word>& words, const Rational& alpha) {
  if (alpha <= 0) throw Error(ErrorKind::Validation, "alpha must be positive");
  auto cert = make_certificate("graphical_cprime");
  cert.add("alpha", alpha);
  cert.add("relators", words.size());
  if (words.empty()) return cert;
  std::size_t shortest = words[0].size();
  for (const auto& w : words) {
    validate_word(w, rank, "relator");
    if (w.empty() || !is_cyclically_reduced(w)) throw Error(ErrorKind::Validation, "relator '" + w + "' is not immersed");
    shortest = std::min(shortest, w.size());
  }
  auto piece = longest_graphical_piece(words);
  cert.add("shortest_relator", shortest);
  cert.add("max_piece", piece.length);
  cert.add("ratio", Rational(piece.length, static_cast<std::int64_t>(shortest)));
  if (!less_than_scaled(piece.length, alpha, static_cast<std::int64_t>(shortest)))
    cert.fail("PieceTooLong", {{"relator", piece.first},
                               {"other", piece.second},
                               {"at", piece.at_first},
                               {"other_at", piece.at_second},
                               {"inverted", piece.inverted},
                               {"length", piece.length}});
  return cert;
}

}  // namespace cubecx
