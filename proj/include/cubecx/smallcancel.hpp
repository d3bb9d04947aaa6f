#pragma once

#include "cubecx/fiber.hpp"
#include "cubecx/hyperplane.hpp"

#include <numeric>

namespace cubecx {

inline void validate_presentation(const CubicalPresentation& pres) {
  if (!pres.base) throw Error(ErrorKind::Validation, "presentation has no base complex");
  for (std::size_t i = 0; i < pres.relators.size(); ++i) {
    const auto& r = pres.relators[i];
    std::string what = "relator " + std::to_string(i);
    if (r.target.get() != pres.base.get() && !(*r.target == *pres.base))
      throw Error(ErrorKind::TargetMismatch, what + " does not map to the base complex");
    if (r.source->vertex_count() == 0 || !r.source->connected())
      throw Error(ErrorKind::NotConnected, what + " is not connected");
    auto iso = check_local_isometry(r);
    if (!iso.passed()) throw Error(ErrorKind::NotLocalIsometry, what + ": " + iso.reason);
  }
}

/// Exact diameter, or a lower bound when the piece is unbounded or undecided.
struct PieceSize {
  bool exact = true;
  int value = 0;
  std::string str() const { return (exact ? "" : "AtLeast(") + std::to_string(value) + (exact ? "" : ")"); }
};

struct Piece {
  enum class Kind { cone, wall };
  Kind kind = Kind::cone;
  int host = 0;   // relator i
  int other = 0;  // relator j for cone pieces, hyperplane of X for wall pieces
  int component = 0;
  /// Representative of its Aut orbit; only representatives count as identified pieces.
  bool representative = true;
  PieceSize size;
  std::pair<CubeId, CubeId> least{0, 0};
};

/// One non-point component of Y_i x_X Y_j, as needed for piece counting.
struct ConeComponent {
  int index = 0;
  std::pair<CubeId, CubeId> least;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  bool diagonal = false;
  /// Graph of an automorphism over X (both projections bijective onto components).
  bool aut_graph = false;
  PieceSize size;
};

struct ConeSummary {
  std::vector<ConeComponent> components;
  std::size_t points = 0;
  /// Vertex pair -> component index; -1 for points.
  std::function<int(CubeId, CubeId)> component_of;
};

namespace detail {

/// Fiber product of two graph maps without materializing it. Components are
/// numbered like fiber_product's, by least vertex pair.
inline ConeSummary graph_cone_summary(const CubicalMap& f, const CubicalMap& g, bool same, int guard) {
  const CubeComplex& y = *f.source;
  const CubeComplex& z = *g.source;
  const std::size_t ny = y.vertex_count(), nz = z.vertex_count();
  const std::size_t n = ny * nz;
  std::vector<std::int32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::int64_t a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  std::vector<char> touched(n, 0);
  std::vector<std::vector<CubeId>> pre(f.target->count(1));
  for (std::size_t e = 0; e < z.count(1); ++e) pre[static_cast<std::size_t>(g.image(1, static_cast<CubeId>(e)).id)].push_back(static_cast<CubeId>(e));
  std::vector<std::int64_t> edge_root;  // per edge pair, later mapped
  std::vector<std::int64_t> edge_pairs;
  for (std::size_t e = 0; e < y.count(1); ++e) {
    const auto& im = f.image(1, static_cast<CubeId>(e));
    const auto& ce = y.cube(1, static_cast<CubeId>(e)).corners;
    for (CubeId e2 : pre[static_cast<std::size_t>(im.id)]) {
      bool flip = im.corr[0].flip != g.image(1, e2).corr[0].flip;
      const auto& c2 = z.cube(1, e2).corners;
      std::int64_t a = static_cast<std::int64_t>(ce[0]) * static_cast<std::int64_t>(nz) + c2[flip ? 1 : 0];
      std::int64_t b = static_cast<std::int64_t>(ce[1]) * static_cast<std::int64_t>(nz) + c2[flip ? 0 : 1];
      touched[static_cast<std::size_t>(a)] = touched[static_cast<std::size_t>(b)] = 1;
      auto ra = find(a), rb = find(b);
      if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = static_cast<std::int32_t>(std::min(ra, rb));
      edge_pairs.push_back(a);
    }
  }
  ConeSummary out;
  // roots are least members, so scanning in order numbers components by least pair
  auto index = std::make_shared<std::vector<std::int32_t>>(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (!touched[v]) continue;
    auto r = static_cast<std::size_t>(find(static_cast<std::int64_t>(v)));
    if ((*index)[r] < 0) {
      (*index)[r] = static_cast<std::int32_t>(out.components.size());
      ConeComponent c;
      c.index = (*index)[r];
      c.least = {static_cast<CubeId>(v / nz), static_cast<CubeId>(v % nz)};
      out.components.push_back(c);
    }
    (*index)[v] = (*index)[r];
    auto& c = out.components[static_cast<std::size_t>((*index)[v])];
    ++c.vertices;
    if (same && v / nz == v % nz) c.diagonal = true;
  }
  for (auto a : edge_pairs) ++out.components[static_cast<std::size_t>((*index)[static_cast<std::size_t>(a)])].edges;
  std::size_t in_components = 0;
  for (const auto& c : out.components) in_components += c.vertices;
  out.points = n - in_components;

  // adjacency through equal images of edge-ends
  auto yends = y.edge_ends();
  auto zends = z.edge_ends();
  auto neighbours = [&](std::size_t v, auto&& visit) {
    std::size_t a = v / nz, b = v % nz;
    for (const auto& e1 : yends[a]) {
      EdgeEnd x1 = f.image(e1);
      for (const auto& e2 : zends[b])
        if (g.image(e2) == x1) {
          auto a2 = static_cast<std::size_t>(y.edge_vertex({e1.edge, 1 - e1.side}));
          auto b2 = static_cast<std::size_t>(z.edge_vertex({e2.edge, 1 - e2.side}));
          visit(a2 * nz + b2);
        }
    }
  };
  std::vector<std::int32_t> dist(n, -1);
  std::vector<std::size_t> seen;
  auto bfs = [&](std::size_t s) {
    for (auto v : seen) dist[v] = -1;
    seen.clear();
    std::deque<std::size_t> q{s};
    dist[s] = 0;
    seen.push_back(s);
    std::size_t far = s;
    while (!q.empty()) {
      auto v = q.front();
      q.pop_front();
      if (dist[v] > dist[far]) far = v;
      neighbours(v, [&](std::size_t w) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          seen.push_back(w);
          q.push_back(w);
        }
      });
    }
    return far;
  };
  for (auto& c : out.components) {
    std::size_t s = static_cast<std::size_t>(c.least.first) * nz + static_cast<std::size_t>(c.least.second);
    if (c.edges + 1 == c.vertices) {
      auto far = bfs(s);
      auto far2 = bfs(far);
      c.size = {true, dist[far2]};
    } else if (same && c.vertices == ny && c.edges == y.count(1)) {
      // both projections onto connected Y are bijective iff they are injective
      bfs(s);
      std::set<std::size_t> l, r;
      for (auto v : seen) {
        l.insert(v / nz);
        r.insert(v % nz);
      }
      c.aut_graph = l.size() == ny && r.size() == ny;
    }
    // a cycle in the fiber product is an axis shared by both elevations
    if (c.edges + 1 != c.vertices && !c.diagonal && !c.aut_graph) c.size = {false, guard};
  }
  for (auto v : seen) dist[v] = -1;
  out.component_of = [index, nz](CubeId a, CubeId b) {
    return (*index)[static_cast<std::size_t>(a) * nz + static_cast<std::size_t>(b)];
  };
  return out;
}

inline ConeSummary general_cone_summary(const CubicalMap& f, const CubicalMap& g, bool same, int guard) {
  auto fp = std::make_shared<FiberProduct>(fiber_product(f, g));
  ConeSummary out;
  std::set<int> graphs;
  if (same) {
    auto gc = graph_components(*fp);
    for (const auto& lst : gc.from)
      for (auto [k, to] : lst) graphs.insert(k);
  }
  auto index = std::make_shared<std::vector<int>>(fp->complex->vertex_count(), -1);
  for (const auto& comp : fp->components) {
    if (comp.point()) {
      ++out.points;
      continue;
    }
    ConeComponent c;
    c.index = static_cast<int>(out.components.size());
    c.least = comp.least;
    c.vertices = comp.cells.count(0);
    c.edges = comp.cells.count(1);
    c.diagonal = same && comp.diagonal;
    c.aut_graph = graphs.count(comp.id) > 0;
    if (!c.diagonal && !c.aut_graph) {
      auto m = component_metrics(*fp, comp.id, guard);
      c.size = m.verdict == Verdict::contractible ? PieceSize{true, m.diameter} : PieceSize{false, guard};
    }
    for (CubeId v : comp.cells.vertices()) (*index)[static_cast<std::size_t>(v)] = c.index;
    out.components.push_back(c);
  }
  // vertex pair -> fiber vertex id
  auto lookup = std::make_shared<std::map<std::pair<CubeId, CubeId>, CubeId>>();
  for (std::size_t v = 0; v < fp->pairs[0].size(); ++v) (*lookup)[fp->pairs[0][v]] = static_cast<CubeId>(v);
  out.component_of = [index, lookup](CubeId a, CubeId b) {
    auto it = lookup->find({a, b});
    return it == lookup->end() ? -1 : (*index)[static_cast<std::size_t>(it->second)];
  };
  return out;
}

}  // namespace detail

inline bool all_graphs(const CubicalPresentation& pres) {
  if (pres.base->dim() > 1) return false;
  for (const auto& r : pres.relators)
    if (r.source->dim() > 1) return false;
  return true;
}

/// `same` marks a self-product, whose diagonal is the relator itself.
inline ConeSummary cone_summary(const CubicalMap& f, const CubicalMap& g, bool same, int guard = kDefaultGuard) {
  if (f.source->dim() <= 1 && g.source->dim() <= 1 && f.target->dim() <= 1) return detail::graph_cone_summary(f, g, same, guard);
  return detail::general_cone_summary(f, g, same, guard);
}

/// Automorphisms over X read off the graph components of f x f.
inline std::vector<std::vector<CubeId>> automorphism_vertex_maps(const CubicalMap& f, const ConeSummary& self) {
  std::vector<std::vector<CubeId>> out;
  const std::size_t ny = f.source->vertex_count();
  for (const auto& c : self.components) {
    if (!c.aut_graph && !c.diagonal) continue;
    if (c.diagonal && c.vertices != ny) continue;
    std::vector<CubeId> psi(ny, -1);
    for (std::size_t a = 0; a < ny; ++a)
      for (std::size_t b = 0; b < ny; ++b)
        if (self.component_of(static_cast<CubeId>(a), static_cast<CubeId>(b)) == c.index) psi[a] = static_cast<CubeId>(b);
    out.push_back(std::move(psi));
  }
  return out;
}

struct PieceReport {
  std::vector<Piece> pieces;
  std::vector<std::size_t> aut_order;      // per relator
  std::vector<std::size_t> raw_cone;       // per relator: non-point cone components counted
  std::vector<std::size_t> identified_cone;
  std::vector<std::size_t> point_pieces;
  std::vector<std::size_t> wall_count;
};

/// Cone pieces from fiber products, wall pieces from strips along each relator.
inline PieceReport enumerate_pieces(const CubicalPresentation& pres, int guard = kDefaultGuard) {
  validate_presentation(pres);
  require_npc(*pres.base, "presentation base");
  const auto n = pres.relators.size();
  PieceReport rep;
  rep.aut_order.assign(n, 1);
  rep.raw_cone.assign(n, 0);
  rep.identified_cone.assign(n, 0);
  rep.point_pieces.assign(n, 0);
  rep.wall_count.assign(n, 0);
  std::vector<std::vector<std::vector<CubeId>>> auts(n);
  std::vector<ConeSummary> self(n);
  for (std::size_t i = 0; i < n; ++i) {
    self[i] = cone_summary(pres.relators[i], pres.relators[i], true, guard);
    auts[i] = automorphism_vertex_maps(pres.relators[i], self[i]);
    rep.aut_order[i] = auts[i].size();
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ConeSummary own;
      const ConeSummary& cs = i == j ? self[i] : (own = cone_summary(pres.relators[i], pres.relators[j], false, guard));
      rep.point_pieces[i] += cs.points;
      // orbits under Aut(Y_i) x Aut(Y_j)
      std::vector<int> orbit(cs.components.size());
      std::iota(orbit.begin(), orbit.end(), 0);
      std::function<int(int)> root = [&](int a) {
        return orbit[static_cast<std::size_t>(a)] == a ? a : orbit[static_cast<std::size_t>(a)] = root(orbit[static_cast<std::size_t>(a)]);
      };
      for (const auto& c : cs.components) {
        auto [a, b] = c.least;
        auto join = [&](CubeId a2, CubeId b2) {
          int k = cs.component_of(a2, b2);
          if (k >= 0) {
            int r1 = root(c.index), r2 = root(k);
            if (r1 != r2) orbit[static_cast<std::size_t>(std::max(r1, r2))] = std::min(r1, r2);
          }
        };
        for (const auto& psi : auts[i]) join(psi[static_cast<std::size_t>(a)], b);
        for (const auto& psi : auts[j]) join(a, psi[static_cast<std::size_t>(b)]);
      }
      for (const auto& c : cs.components) {
        if (c.diagonal || c.aut_graph) continue;
        Piece p;
        p.kind = Piece::Kind::cone;
        p.host = static_cast<int>(i);
        p.other = static_cast<int>(j);
        p.component = c.index;
        p.size = c.size;
        p.least = c.least;
        p.representative = root(c.index) == c.index;
        ++rep.raw_cone[i];
        if (p.representative) ++rep.identified_cone[i];
        rep.pieces.push_back(p);
      }
    }
  auto classes = edge_classes(*pres.base);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = pres.relators[i];
    auto g = rung_graph(f);
    auto wps = wall_pieces(f, g, guard);
    for (const auto& wp : wps) {
      Piece p;
      p.kind = Piece::Kind::wall;
      p.host = static_cast<int>(i);
      p.other = classes.of_edge[static_cast<std::size_t>(wp.rung.edge)];
      p.component = wp.component;
      p.least = {wp.root_vertex, wp.rung.edge};
      p.size = (wp.unbounded || wp.escaped) ? PieceSize{false, guard} : PieceSize{true, wp.diameter};
      rep.pieces.push_back(p);
      ++rep.wall_count[i];
    }
  }
  return rep;
}

inline Json piece_json(const Piece& p) {
  return Json{{"kind", p.kind == Piece::Kind::cone ? "cone" : "wall"},
              {"relator", p.host},
              {p.kind == Piece::Kind::cone ? "other_relator" : "hyperplane", p.other},
              {"component", p.component},
              {"at", {p.least.first, p.least.second}},
              {"diameter", p.size.str()}};
}

/// Every piece in Y_i has diameter < alpha sys(Y_i). Ties fail.
inline Certificate check_cprime(const CubicalPresentation& pres, const Rational& alpha, int guard = kDefaultGuard) {
  if (alpha <= 0) throw Error(ErrorKind::Validation, "alpha must be positive");
  auto cert = make_certificate("cprime");
  cert.add("alpha", alpha);
  cert.add("guard", guard);
  cert.add("relators", pres.relators.size());
  auto rep = enumerate_pieces(pres, guard);
  for (std::size_t i = 0; i < pres.relators.size(); ++i) {
    auto child = make_certificate("relator " + std::to_string(i));
    auto sys = systole(pres.relators[i].source, guard);
    child.add("systole", sys.str());
    child.add("aut_order", rep.aut_order[i]);
    if (rep.aut_order[i] > 1) child.add("note", "nontrivial Aut; shifted self-components excluded");
    child.add("cone_pieces_raw", rep.raw_cone[i]);
    child.add("cone_pieces_identified", rep.identified_cone[i]);
    child.add("point_pieces", rep.point_pieces[i]);
    child.add("wall_pieces", rep.wall_count[i]);
    const Piece* worst = nullptr;
    for (const auto& p : rep.pieces) {
      if (p.host != static_cast<int>(i)) continue;
      if (!worst || p.size.value > worst->size.value || (p.size.value == worst->size.value && !p.size.exact && worst->size.exact))
        worst = &p;
    }
    child.add("max_piece", worst ? worst->size.str() : std::string("0"));
    int maxv = worst ? worst->size.value : 0;
    if (!sys.exact) {
      child.inconclusive("systole not exact within guard " + std::to_string(guard));
      cert.absorb(std::move(child));
      continue;
    }
    Rational ratio(maxv, sys.value);
    child.add("ratio", ratio);
    bool below = less_than_scaled(maxv, alpha, sys.value);
    if (worst && !below) {
      child.fail(worst->size.exact ? "PieceTooLarge" : "PieceAtLeastThreshold", piece_json(*worst));
    } else if (worst && !worst->size.exact) {
      child.inconclusive("piece only bounded below by " + std::to_string(worst->size.value));
    } else {
      // every unresolved piece must also sit below the threshold
      for (const auto& p : rep.pieces)
        if (p.host == static_cast<int>(i) && !p.size.exact) {
          child.inconclusive("unresolved piece");
          break;
        }
    }
    cert.absorb(std::move(child));
  }
  return cert;
}

}  // namespace cubecx
