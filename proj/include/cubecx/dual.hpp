#pragma once

#include "cubecx/development.hpp"
#include "cubecx/hyperplane.hpp"
#include "cubecx/wallspace.hpp"

#include <optional>
#include <unordered_map>

namespace cubecx {

/// Walls on the ground set {0..points-1}; side 0 and side 1 partition it.
struct FiniteWallspace {
  std::size_t points = 0;
  std::vector<std::array<std::vector<int>, 2>> walls;
  /// Optional display names of the points (JSON scalars).
  std::vector<Json> names;

  /// side_of[w][x]: the halfspace of wall w holding point x.
  std::vector<std::vector<std::uint8_t>> sides() const {
    std::vector<std::vector<std::uint8_t>> out(walls.size(), std::vector<std::uint8_t>(points, 2));
    for (std::size_t w = 0; w < walls.size(); ++w)
      for (int s = 0; s < 2; ++s)
        for (int x : walls[w][static_cast<std::size_t>(s)]) out[w][static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(s);
    return out;
  }
};

inline void validate_wallspace(const FiniteWallspace& ws) {
  if (ws.points == 0) throw Error(ErrorKind::Validation, "empty ground set");
  for (std::size_t w = 0; w < ws.walls.size(); ++w) {
    std::vector<int> seen(ws.points, 0);
    for (int s = 0; s < 2; ++s) {
      if (ws.walls[w][static_cast<std::size_t>(s)].empty())
        throw Error(ErrorKind::Validation, "wall " + std::to_string(w) + " has an empty halfspace");
      for (int x : ws.walls[w][static_cast<std::size_t>(s)]) {
        if (x < 0 || static_cast<std::size_t>(x) >= ws.points)
          throw Error(ErrorKind::Validation, "wall " + std::to_string(w) + " names unknown point " + std::to_string(x));
        ++seen[static_cast<std::size_t>(x)];
      }
    }
    for (std::size_t x = 0; x < ws.points; ++x)
      if (seen[x] != 1)
        throw Error(ErrorKind::Validation, "wall " + std::to_string(w) + " does not partition the ground set at point " + std::to_string(x));
  }
}

namespace detail {

/// Vertex sides after deleting a set of edges; throws unless there are exactly two.
inline std::array<std::vector<int>, 2> two_sides(const CubeComplex& x, const std::set<CubeId>& cut, CubeId anchor,
                                                 const std::string& what) {
  auto ends = x.edge_ends();
  std::vector<int> comp(x.vertex_count(), -1);
  int count = 0;
  std::vector<CubeId> order{anchor};
  for (std::size_t v = 0; v < x.vertex_count(); ++v) order.push_back(static_cast<CubeId>(v));
  for (CubeId s : order) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::deque<CubeId> q{s};
    comp[static_cast<std::size_t>(s)] = count;
    while (!q.empty()) {
      CubeId v = q.front();
      q.pop_front();
      for (const auto& e : ends[static_cast<std::size_t>(v)]) {
        if (cut.count(e.edge)) continue;
        CubeId w = x.edge_vertex(x.opposite(e));
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = count;
          q.push_back(w);
        }
      }
    }
    ++count;
  }
  if (count != 2) throw Error(ErrorKind::Validation, what + " leaves " + std::to_string(count) + " components, not 2");
  std::array<std::vector<int>, 2> out;
  for (std::size_t v = 0; v < x.vertex_count(); ++v) out[static_cast<std::size_t>(comp[v])].push_back(static_cast<int>(v));
  return out;
}

}  // namespace detail

/// Hyperplane halfspaces on the vertices of a complex (each must separate into two sides).
inline FiniteWallspace hyperplane_wallspace(const CubeComplex& x) {
  FiniteWallspace ws;
  ws.points = x.vertex_count();
  auto cls = edge_classes(x);
  for (std::size_t h = 0; h < cls.size(); ++h) {
    std::set<CubeId> cut(cls.members[h].begin(), cls.members[h].end());
    CubeId anchor = x.cube(1, cls.members[h][0]).corners[0];
    ws.walls.push_back(detail::two_sides(x, cut, anchor, "hyperplane " + std::to_string(h)));
  }
  return ws;
}

/// Walls of a relator wallspace as vertex bipartitions.
inline FiniteWallspace finite_wallspace(const Wallspace& w) {
  validate_wallspace(w);
  const CubeComplex& x = *w.complex;
  auto cls = edge_classes(x);
  FiniteWallspace ws;
  ws.points = x.vertex_count();
  for (std::size_t k = 0; k < w.walls.size(); ++k) {
    std::set<CubeId> cut;
    for (int h : w.walls[k])
      for (CubeId e : cls.members[static_cast<std::size_t>(h)]) cut.insert(e);
    CubeId anchor = x.cube(1, *cut.begin()).corners[0];
    ws.walls.push_back(detail::two_sides(x, cut, anchor, "wall " + std::to_string(k)));
  }
  return ws;
}

/// Orientation: chosen side of each wall.
using Orientation = std::vector<std::uint8_t>;

struct DualComplex {
  std::shared_ptr<const CubeComplex> complex;
  std::vector<Orientation> vertices;
  /// Wall of each hyperplane of `complex` (edge_classes order).
  std::vector<int> wall_of_hyperplane;
  /// Walls realized as hyperplanes (both sides present).
  std::vector<int> active;

  std::optional<CubeId> find(const Orientation& o) const {
    auto it = std::lower_bound(index.begin(), index.end(), std::make_pair(o, CubeId{0}));
    if (it == index.end() || it->first != o) return std::nullopt;
    return it->second;
  }

  std::vector<std::pair<Orientation, CubeId>> index;
};

namespace detail {

/// Point sets of both halfspaces per wall, as bitmaps.
struct HalfspaceTable {
  std::vector<std::array<std::vector<std::uint64_t>, 2>> bits;
  std::size_t words = 0;

  explicit HalfspaceTable(const FiniteWallspace& ws) {
    words = (ws.points + 63) / 64;
    bits.resize(ws.walls.size());
    for (std::size_t w = 0; w < ws.walls.size(); ++w)
      for (int s = 0; s < 2; ++s) {
        auto& b = bits[w][static_cast<std::size_t>(s)];
        b.assign(words, 0);
        for (int x : ws.walls[w][static_cast<std::size_t>(s)])
          b[static_cast<std::size_t>(x) / 64] |= std::uint64_t{1} << (static_cast<std::size_t>(x) % 64);
      }
  }

  bool meet(std::size_t w1, int s1, std::size_t w2, int s2) const {
    const auto& a = bits[w1][static_cast<std::size_t>(s1)];
    const auto& b = bits[w2][static_cast<std::size_t>(s2)];
    for (std::size_t k = 0; k < words; ++k)
      if (a[k] & b[k]) return true;
    return false;
  }
};

/// Flood of consistent orientations from `start`, flipping only walls in `free`.
/// Consistency: chosen halfspaces pairwise intersect.
inline DualComplex build_dual(const FiniteWallspace& ws, const Orientation& start, const std::vector<int>& free) {
  HalfspaceTable t(ws);
  std::size_t n = ws.walls.size();
  auto consistent_flip = [&](const Orientation& o, std::size_t w) {
    int s = 1 - o[w];
    for (std::size_t u = 0; u < n; ++u)
      if (u != w && !t.meet(w, s, u, o[u])) return false;
    return true;
  };
  DualComplex d;
  d.active = free;
  std::map<Orientation, CubeId> id;
  std::deque<CubeId> q;
  id[start] = 0;
  d.vertices.push_back(start);
  q.push_back(0);
  while (!q.empty()) {
    CubeId v = q.front();
    q.pop_front();
    for (int w : free) {
      Orientation o = d.vertices[static_cast<std::size_t>(v)];
      if (!consistent_flip(o, static_cast<std::size_t>(w))) continue;
      o[static_cast<std::size_t>(w)] ^= 1;
      if (id.emplace(o, static_cast<CubeId>(d.vertices.size())).second) {
        d.vertices.push_back(o);
        q.push_back(static_cast<CubeId>(d.vertices.size() - 1));
      }
    }
  }
  CubeComplex x(d.vertices.size());
  // a cube is (base vertex with every wall of S on side 0, sorted S)
  std::vector<std::map<std::pair<CubeId, std::vector<int>>, CubeId>> cube_id(2);
  auto flipped = [&](CubeId v, int w) -> CubeId {
    Orientation o = d.vertices[static_cast<std::size_t>(v)];
    o[static_cast<std::size_t>(w)] ^= 1;
    auto it = id.find(o);
    return it == id.end() ? -1 : it->second;
  };
  struct Candidate {
    CubeId base;
    std::vector<int> walls;
    std::vector<CubeId> corners;
  };
  std::vector<Candidate> layer;
  for (std::size_t v = 0; v < d.vertices.size(); ++v) layer.push_back({static_cast<CubeId>(v), {}, {static_cast<CubeId>(v)}});
  std::vector<int> sorted_free = free;
  std::sort(sorted_free.begin(), sorted_free.end());
  for (int dim = 1; !layer.empty(); ++dim) {
    std::vector<Candidate> next;
    for (const auto& c : layer)
      for (int w : sorted_free) {
        if (!c.walls.empty() && w <= c.walls.back()) continue;
        if (d.vertices[static_cast<std::size_t>(c.base)][static_cast<std::size_t>(w)] != 0) continue;
        std::vector<CubeId> up;
        for (CubeId corner : c.corners) {
          CubeId f = flipped(corner, w);
          if (f < 0) break;
          up.push_back(f);
        }
        if (up.size() != c.corners.size()) continue;
        Candidate k{c.base, c.walls, c.corners};
        k.walls.push_back(w);
        k.corners.insert(k.corners.end(), up.begin(), up.end());
        next.push_back(std::move(k));
      }
    std::sort(next.begin(), next.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.base, a.walls) < std::tie(b.base, b.walls);
    });
    if (cube_id.size() <= static_cast<std::size_t>(dim)) cube_id.resize(static_cast<std::size_t>(dim) + 1);
    for (const auto& c : next) {
      CubeId made;
      if (dim == 1) {
        made = x.add_edge(c.corners[0], c.corners[1]);
      } else {
        Cube cube;
        cube.corners = c.corners;
        for (int i = 0; i < dim; ++i)
          for (int s = 0; s < 2; ++s) {
            std::vector<int> rest = c.walls;
            rest.erase(rest.begin() + i);
            CubeId base = s ? c.corners[std::size_t{1} << i] : c.base;
            Frame corr;
            for (int j = 0; j < dim; ++j)
              if (j != i) corr.push_back({j, false});
            cube.faces.push_back(Facet{cube_id[static_cast<std::size_t>(dim - 1)].at({base, rest}), std::move(corr)});
          }
        made = x.add_cube(dim, std::move(cube));
      }
      cube_id[static_cast<std::size_t>(dim)][{c.base, c.walls}] = made;
    }
    layer = std::move(next);
  }
  d.complex = share(std::move(x));
  auto cls = edge_classes(*d.complex);
  for (std::size_t h = 0; h < cls.size(); ++h) {
    const auto& e = d.complex->cube(1, cls.members[h][0]).corners;
    const auto& a = d.vertices[static_cast<std::size_t>(e[0])];
    const auto& b = d.vertices[static_cast<std::size_t>(e[1])];
    int w = -1;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k] != b[k]) w = static_cast<int>(k);
    d.wall_of_hyperplane.push_back(w);
  }
  for (const auto& [o, v] : id) d.index.emplace_back(o, v);
  return d;
}

}  // namespace detail

/// Orientation choosing the halfspace of every wall that holds point x.
inline Orientation principal_orientation(const FiniteWallspace& ws, int x) {
  Orientation o;
  for (const auto& s : ws.sides()) o.push_back(s[static_cast<std::size_t>(x)]);
  return o;
}

/// Dual cube complex: consistent orientations reachable from the principal
/// orientation of point 0, with every cube whose 1-skeleton is present.
inline DualComplex dual_complex(const FiniteWallspace& ws) {
  validate_wallspace(ws);
  std::vector<int> all(ws.walls.size());
  std::iota(all.begin(), all.end(), 0);
  return detail::build_dual(ws, principal_orientation(ws, 0), all);
}

struct HemiDual {
  /// present[w][s]: halfspace s of wall w meets S.
  std::vector<std::array<bool, 2>> present;
  DualComplex dual;
  /// Vertex of the full dual for each vertex of `dual`.
  std::vector<CubeId> embedding;
  Certificate certificate;
};

/// H(S) keeps the halfspaces meeting S; walls with one side present are frozen.
inline HemiDual hemi_restrict_dual(const FiniteWallspace& ws, const std::vector<int>& subset) {
  validate_wallspace(ws);
  if (subset.empty()) throw Error(ErrorKind::Validation, "hemiwallspace subset is empty");
  for (int x : subset)
    if (x < 0 || static_cast<std::size_t>(x) >= ws.points) throw Error(ErrorKind::Validation, "unknown point " + std::to_string(x));
  HemiDual h;
  auto sides = ws.sides();
  std::vector<int> free;
  for (std::size_t w = 0; w < ws.walls.size(); ++w) {
    std::array<bool, 2> p{false, false};
    for (int x : subset) p[sides[w][static_cast<std::size_t>(x)]] = true;
    h.present.push_back(p);
    if (p[0] && p[1]) free.push_back(static_cast<int>(w));
  }
  h.dual = detail::build_dual(ws, principal_orientation(ws, subset.front()), free);
  auto full = dual_complex(ws);
  auto cert = make_certificate("hemiwallspace dual");
  cert.add("subset", subset.size());
  cert.add("free_walls", free.size());
  cert.add("vertices", h.dual.vertices.size());
  for (const auto& o : h.dual.vertices) {
    auto v = full.find(o);
    if (!v) throw Error(ErrorKind::Validation, "hemiwallspace orientation missing from the full dual");
    h.embedding.push_back(*v);
  }
  std::vector<CubeId> principal;
  for (int x : subset) principal.push_back(*full.find(principal_orientation(ws, x)));
  auto hull = hull_vertices(*full.complex, principal);
  auto image = h.embedding;
  std::sort(image.begin(), image.end());
  auto closed = hull_vertices(*full.complex, image);
  cert.add("hull_vertices", hull.size());
  if (closed != image) {
    cert.fail("NotConvex", {{"image", image.size()}, {"hull", closed.size()}});
  } else if (hull != image) {
    cert.fail("NotHullOfPrincipal", {{"image", image.size()}, {"hull", hull.size()}});
  }
  h.certificate = std::move(cert);
  return h;
}

// ---------------------------------------------------------------------------
// Separation in developed balls

enum class SeparationKind { crossed, separated, inconclusive };

inline std::string_view to_string(SeparationKind k) {
  switch (k) {
    case SeparationKind::crossed: return "Crossed";
    case SeparationKind::separated: return "Separated";
    case SeparationKind::inconclusive: return "Inconclusive";
  }
  return "?";
}

struct SeparationVerdict {
  SeparationKind kind = SeparationKind::inconclusive;
  /// Crossing hyperplane, and the squares where it meets U and V.
  int witness = -1;
  std::array<CubeId, 2> squares{-1, -1};
  int distance = -1;
  std::string criterion;
  Certificate certificate() const {
    auto c = make_certificate("strong separation");
    c.add("verdict", std::string(to_string(kind)));
    if (distance >= 0) c.add("distance", distance);
    if (!criterion.empty()) c.add("criterion", criterion);
    if (kind == SeparationKind::crossed) c.witness = {{"hyperplane", witness}, {"squares", squares}};
    if (kind == SeparationKind::inconclusive) c.inconclusive(criterion.empty() ? "no crossing found in the ball" : criterion);
    return c;
  }
};

/// Crossing data of the hyperplanes of a ball.
struct BallHyperplanes {
  const DevelopedBall& ball;
  EdgeClasses classes;
  /// Squares where two classes cross, keyed by the ordered class pair.
  std::map<std::pair<int, int>, CubeId> crossing;
  std::vector<std::vector<CubeId>> carrier;

  explicit BallHyperplanes(const DevelopedBall& b) : ball(b), classes(edge_classes(*b.ball)) {
    const CubeComplex& x = *b.ball;
    for (std::size_t s = 0; s < x.count(2); ++s) {
      int h0 = classes.of_edge[static_cast<std::size_t>(x.edge_at(2, static_cast<CubeId>(s), 0, 0).edge)];
      int h1 = classes.of_edge[static_cast<std::size_t>(x.edge_at(2, static_cast<CubeId>(s), 0, 1).edge)];
      crossing.emplace(std::make_pair(std::min(h0, h1), std::max(h0, h1)), static_cast<CubeId>(s));
    }
    carrier.resize(classes.size());
    for (std::size_t h = 0; h < classes.size(); ++h) {
      std::set<CubeId> v;
      for (CubeId e : classes.members[h])
        for (CubeId c : x.cube(1, e).corners) v.insert(c);
      carrier[h].assign(v.begin(), v.end());
    }
  }

  std::size_t size() const { return classes.size(); }
  CubeId crosses(int a, int b) const {
    auto it = crossing.find({std::min(a, b), std::max(a, b)});
    return it == crossing.end() ? -1 : it->second;
  }
  void check_id(int h) const {
    if (h < 0 || static_cast<std::size_t>(h) >= size()) throw Error(ErrorKind::Validation, "unknown hyperplane " + std::to_string(h));
  }
};

/// Crossed when a third hyperplane meets both; Separated in a graph ball, or
/// when d(U, V) > M with every carrier vertex of U and V at depth <= radius - M - 1.
inline SeparationVerdict strong_separation(const BallHyperplanes& hp, int u, int v, std::optional<int> m = std::nullopt) {
  hp.check_id(u);
  hp.check_id(v);
  if (u == v || hp.crosses(u, v) >= 0) throw Error(ErrorKind::NotDisjoint, "hyperplanes " + std::to_string(u) + " and " + std::to_string(v) + " meet");
  SeparationVerdict out;
  for (int w = 0; w < static_cast<int>(hp.size()); ++w) {
    CubeId a = hp.crosses(w, u), b = hp.crosses(w, v);
    if (w != u && w != v && a >= 0 && b >= 0) {
      out.kind = SeparationKind::crossed;
      out.witness = w;
      out.squares = {a, b};
      return out;
    }
  }
  const DevelopedBall& ball = hp.ball;
  auto ends = ball.ball->edge_ends();
  int d = std::numeric_limits<int>::max();
  for (CubeId a : hp.carrier[static_cast<std::size_t>(u)]) {
    auto dist = bfs_distances(*ball.ball, a, ends);
    for (CubeId b : hp.carrier[static_cast<std::size_t>(v)])
      if (dist[static_cast<std::size_t>(b)] >= 0) d = std::min(d, dist[static_cast<std::size_t>(b)]);
  }
  out.distance = d == std::numeric_limits<int>::max() ? -1 : d;
  if (ball.ball->dim() <= 1) {
    out.kind = SeparationKind::separated;
    out.criterion = "graph: no hyperplanes cross";
    return out;
  }
  if (m) {
    bool margin = true;
    for (int h : {u, v})
      for (CubeId c : hp.carrier[static_cast<std::size_t>(h)])
        if (!ball.complete && ball.dist[static_cast<std::size_t>(c)] > ball.radius - *m - 1) margin = false;
    if (out.distance > *m && margin) {
      out.kind = SeparationKind::separated;
      out.criterion = "d(U,V) = " + std::to_string(out.distance) + " > M = " + std::to_string(*m);
      return out;
    }
    out.criterion = margin ? "d(U,V) = " + std::to_string(out.distance) + " <= M = " + std::to_string(*m)
                           : "carriers within M of the frontier";
    return out;
  }
  out.criterion = "no crossing found in the ball and no constant M";
  return out;
}

inline SeparationVerdict strong_separation(const DevelopedBall& ball, int u, int v, std::optional<int> m = std::nullopt) {
  return strong_separation(BallHyperplanes(ball), u, v, m);
}

struct FacingTriple {
  std::array<int, 3> hyperplanes{};
  bool strong = false;
  Certificate certificate;
};

/// First triple (lexicographic) of pairwise disjoint hyperplanes none of which
/// separates the other two, by paths in the ball avoiding its edges. Outside
/// graphs, a hyperplane whose carrier reaches the frontier may be a truncated
/// piece of a larger one and is skipped.
inline std::optional<FacingTriple> facing_triple_search(const DevelopedBall& ball, bool want_strong, std::optional<int> m = std::nullopt) {
  BallHyperplanes hp(ball);
  const CubeComplex& x = *ball.ball;
  int n = static_cast<int>(hp.size());
  auto ends = x.edge_ends();
  // side[u][v]: component of carrier(v) after deleting the edges of u
  std::vector<std::vector<int>> side(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int u = 0; u < n; ++u) {
    std::set<CubeId> cut(hp.classes.members[static_cast<std::size_t>(u)].begin(), hp.classes.members[static_cast<std::size_t>(u)].end());
    std::vector<int> comp(x.vertex_count(), -1);
    int count = 0;
    for (std::size_t s = 0; s < x.vertex_count(); ++s) {
      if (comp[s] >= 0) continue;
      std::deque<CubeId> q{static_cast<CubeId>(s)};
      comp[s] = count;
      while (!q.empty()) {
        CubeId a = q.front();
        q.pop_front();
        for (const auto& e : ends[static_cast<std::size_t>(a)]) {
          if (cut.count(e.edge)) continue;
          CubeId b = x.edge_vertex(x.opposite(e));
          if (comp[static_cast<std::size_t>(b)] < 0) {
            comp[static_cast<std::size_t>(b)] = count;
            q.push_back(b);
          }
        }
      }
      ++count;
    }
    for (int v = 0; v < n; ++v)
      if (v != u) side[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] =
          comp[static_cast<std::size_t>(x.cube(1, hp.classes.members[static_cast<std::size_t>(v)][0]).corners[0])];
  }
  std::vector<char> usable(static_cast<std::size_t>(n), 1);
  if (x.dim() > 1)
    for (int h = 0; h < n; ++h)
      for (CubeId c : hp.carrier[static_cast<std::size_t>(h)])
        if (ball.frontier(c)) usable[static_cast<std::size_t>(h)] = 0;
  auto disjoint = [&](int a, int b) { return usable[static_cast<std::size_t>(a)] && usable[static_cast<std::size_t>(b)] && hp.crosses(a, b) < 0; };
  auto same = [&](int u, int a, int b) { return side[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)] == side[static_cast<std::size_t>(u)][static_cast<std::size_t>(b)]; };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!disjoint(a, b)) continue;
      for (int c = b + 1; c < n; ++c) {
        if (!disjoint(a, c) || !disjoint(b, c)) continue;
        if (!same(a, b, c) || !same(b, a, c) || !same(c, a, b)) continue;
        FacingTriple t;
        t.hyperplanes = {a, b, c};
        auto cert = make_certificate("facing triple");
        cert.add("hyperplanes", std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(c));
        bool strong = true;
        for (auto [p, q] : {std::pair{a, b}, std::pair{a, c}, std::pair{b, c}}) {
          auto s = strong_separation(hp, p, q, m);
          auto sc = s.certificate();
          sc.check = "strong separation " + std::to_string(p) + " " + std::to_string(q);
          strong = strong && s.kind == SeparationKind::separated;
          if (want_strong) cert.children.push_back(std::move(sc));
        }
        t.strong = strong;
        if (want_strong && !strong) continue;
        t.certificate = std::move(cert);
        return t;
      }
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Files

/// {"points": [...], "walls": [[side A], [side B]], ...}; sides list point values.
inline FiniteWallspace finite_wallspace_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("points") || !j.contains("walls") || !j["points"].is_array() || !j["walls"].is_array())
    throw Error(ErrorKind::Parse, where + ": expected {\"points\": [...], \"walls\": [...]}");
  FiniteWallspace ws;
  std::map<std::string, int> index;
  for (const auto& p : j["points"]) {
    if (!index.emplace(p.dump(), static_cast<int>(ws.points)).second) throw Error(ErrorKind::Validation, where + ": repeated point " + p.dump());
    ws.names.push_back(p);
    ++ws.points;
  }
  for (const auto& w : j["walls"]) {
    if (!w.is_array() || w.size() != 2) throw Error(ErrorKind::Parse, where + ": a wall is a pair of sides");
    std::array<std::vector<int>, 2> sides;
    for (int s = 0; s < 2; ++s)
      for (const auto& p : w[static_cast<std::size_t>(s)]) {
        auto it = index.find(p.dump());
        if (it == index.end()) throw Error(ErrorKind::Validation, where + ": unknown point " + p.dump());
        sides[static_cast<std::size_t>(s)].push_back(it->second);
      }
    for (auto& s : sides) std::sort(s.begin(), s.end());
    ws.walls.push_back(std::move(sides));
  }
  validate_wallspace(ws);
  return ws;
}

inline Json finite_wallspace_to_json(const FiniteWallspace& ws) {
  Json points = Json::array();
  for (std::size_t x = 0; x < ws.points; ++x) points.push_back(x < ws.names.size() ? ws.names[x] : Json(x));
  Json walls = Json::array();
  for (const auto& w : ws.walls) {
    Json pair = Json::array();
    for (const auto& s : w) {
      Json side = Json::array();
      for (int x : s) side.push_back(points[static_cast<std::size_t>(x)]);
      pair.push_back(side);
    }
    walls.push_back(pair);
  }
  return Json{{"points", points}, {"walls", walls}};
}

inline Json dual_to_json(const DualComplex& d) {
  Json verts = Json::array();
  for (const auto& o : d.vertices) {
    std::string s;
    for (auto b : o) s += static_cast<char>('0' + b);
    verts.push_back(s);
  }
  return Json{{"complex", complex_to_json(*d.complex)}, {"orientations", verts}, {"hyperplane_walls", d.wall_of_hyperplane}};
}

}  // namespace cubecx
