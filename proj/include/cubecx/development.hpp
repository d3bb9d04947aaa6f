#pragma once

#include "cubecx/cubical_map.hpp"

#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <set>

namespace cubecx {

inline constexpr int kDefaultGuard = 64;

struct BallAdj {
  EdgeEnd end;  // base edge-end leaving the ball vertex
  CubeId to = -1;
  CubeId edge = -1;  // ball edge
};

/// Finite piece of the universal cover around a lift of `base_vertex`.
struct DevelopedBall {
  std::shared_ptr<const CubeComplex> base;
  CubeId base_vertex = 0;
  int radius = 0;
  std::shared_ptr<const CubeComplex> ball;
  CubicalMap projection;
  std::vector<CubeId> base_of;
  std::vector<int> dist;
  /// Base edge-end leaving each vertex toward its BFS parent (edge -1 at the root).
  std::vector<EdgeEnd> parent;
  std::vector<std::vector<BallAdj>> adj;
  /// True when growth never reached past the radius: the ball is the whole cover.
  bool complete = true;

  std::size_t size() const { return dist.size(); }
  CubeId proj(CubeId v) const { return base_of[static_cast<std::size_t>(v)]; }
  bool frontier(CubeId v) const { return !complete && dist[static_cast<std::size_t>(v)] >= radius - 1; }

  CubeId step(CubeId v, EdgeEnd e) const {
    for (const auto& a : adj[static_cast<std::size_t>(v)])
      if (a.end == e) return a.to;
    return -1;
  }
  /// Base path (as edge-ends) from the root to v along parent pointers.
  std::vector<EdgeEnd> path_from_root(CubeId v) const {
    std::vector<EdgeEnd> back;
    while (parent[static_cast<std::size_t>(v)].edge >= 0) {
      EdgeEnd up = parent[static_cast<std::size_t>(v)];
      CubeId p = step(v, up);
      back.push_back(EdgeEnd{up.edge, 1 - up.side});
      v = p;
    }
    std::reverse(back.begin(), back.end());
    return back;
  }
  std::vector<CubeId> lifts(CubeId base_v) const {
    std::vector<CubeId> out;
    for (std::size_t v = 0; v < size(); ++v)
      if (proj(static_cast<CubeId>(v)) == base_v) out.push_back(static_cast<CubeId>(v));
    return out;
  }
};

namespace detail {

struct SquareCorner {
  EdgeEnd a, b;  // directions 0 and 1 at the corner
  CubeId cube;
  std::uint32_t label;
};

/// Level-by-level growth of the universal cover. An unattached edge-end of a
/// level-d vertex always points up; it joins an existing level-(d+1) vertex
/// when a square through one of its down-edges already closes it off.
class Developer {
 public:
  explicit Developer(const CubeComplex& x) : x_(x), ends_(x.edge_ends()), corners_(x.vertex_count()) {
    for (auto& e : ends_) std::sort(e.begin(), e.end());
    for (std::size_t c = 0; c < x.count(2); ++c) {
      const Cube& sq = x.cube(2, static_cast<CubeId>(c));
      for (std::uint32_t lab = 0; lab < 4; ++lab)
        corners_[static_cast<std::size_t>(sq.corners[lab])].push_back(
            {x.edge_at(2, static_cast<CubeId>(c), lab, 0), x.edge_at(2, static_cast<CubeId>(c), lab, 1),
             static_cast<CubeId>(c), lab});
    }
  }

  /// Grows to `radius`. `on_new(v)` may return true to stop immediately.
  DevelopedBall grow(std::shared_ptr<const CubeComplex> base, CubeId root, int radius,
                     const std::function<bool(const DevelopedBall&, CubeId)>& on_new = {}, bool cubes = true) {
    DevelopedBall b;
    b.base = std::move(base);
    b.base_vertex = root;
    b.radius = radius;
    CubeComplex ball;
    auto& proj = b.base_of;
    auto add_vertex = [&](CubeId p, int d, EdgeEnd up) {
      CubeId v = ball.add_vertex();
      proj.push_back(p);
      b.dist.push_back(d);
      b.parent.push_back(up);
      b.adj.emplace_back();
      return v;
    };
    std::vector<CubeId> edge_proj;
    auto link = [&](CubeId v, EdgeEnd e, CubeId w) {
      EdgeEnd back{e.edge, 1 - e.side};
      if (b.step(w, back) >= 0) throw Error(ErrorKind::NotNPC, "development closed up inconsistently");
      CubeId be = e.side == 0 ? ball.add_edge(v, w) : ball.add_edge(w, v);
      edge_proj.push_back(e.edge);
      b.adj[static_cast<std::size_t>(v)].push_back({e, w, be});
      b.adj[static_cast<std::size_t>(w)].push_back({back, v, be});
    };
    add_vertex(root, 0, EdgeEnd{-1, -1});
    bool stopped = false;
    std::vector<CubeId> level{0};
    for (int d = 0; !level.empty() && !stopped; ++d) {
      std::vector<CubeId> next;
      for (CubeId v : level) {
        CubeId pv = proj[static_cast<std::size_t>(v)];
        for (const EdgeEnd& e : ends_[static_cast<std::size_t>(pv)]) {
          if (b.step(v, e) >= 0) continue;
          CubeId target = -1;
          for (const auto& sc : corners_[static_cast<std::size_t>(pv)]) {
            int i;
            EdgeEnd phi;
            if (sc.a == e) {
              i = 0;
              phi = sc.b;
            } else if (sc.b == e) {
              i = 1;
              phi = sc.a;
            } else {
              continue;
            }
            int j = 1 - i;
            CubeId u = b.step(v, phi);
            if (u < 0 || b.dist[static_cast<std::size_t>(u)] != d - 1) continue;
            std::uint32_t lu = sc.label ^ (1u << j);
            CubeId w = b.step(u, x_.edge_at(2, sc.cube, lu, i));
            if (w < 0 || b.dist[static_cast<std::size_t>(w)] != d) continue;
            CubeId t = b.step(w, x_.edge_at(2, sc.cube, lu ^ (1u << i), j));
            if (t >= 0) {
              target = t;
              break;
            }
          }
          if (target >= 0) {
            link(v, e, target);
            continue;
          }
          if (d + 1 > radius) {
            b.complete = false;
            continue;
          }
          CubeId w = add_vertex(x_.edge_vertex(EdgeEnd{e.edge, 1 - e.side}), d + 1, EdgeEnd{e.edge, 1 - e.side});
          link(v, e, w);
          next.push_back(w);
          if (on_new) {
            if (on_new(b, w)) {
              stopped = true;
              b.complete = false;
              break;
            }
          }
        }
        if (stopped) break;
      }
      level = std::move(next);
    }
    finish(b, std::move(ball), proj, edge_proj, cubes);
    return b;
  }

 private:
  void finish(DevelopedBall& b, CubeComplex ball, const std::vector<CubeId>& proj, const std::vector<CubeId>& edge_proj,
              bool cubes) {
    std::vector<std::vector<CubeImage>> images(static_cast<std::size_t>(std::max(1, x_.dim() + 1)));
    for (CubeId p : proj) images[0].push_back({p, {}});
    if (x_.dim() >= 1) {
      images.resize(std::max<std::size_t>(images.size(), 2));
      for (CubeId e : edge_proj) images[1].push_back({e, identity_frame(1)});
    }
    if (cubes) {
      // (base cube, ball vertex at corner 0) -> ball cube, per dimension
      std::vector<std::map<std::pair<CubeId, CubeId>, CubeId>> lifted(static_cast<std::size_t>(x_.dim() + 1));
      std::vector<std::vector<CubeId>> with_corner0(x_.vertex_count());
      for (int d = 2; d <= x_.dim(); ++d) {
        for (auto& w : with_corner0) w.clear();
        for (std::size_t c = 0; c < x_.count(d); ++c)
          with_corner0[static_cast<std::size_t>(x_.cube(d, static_cast<CubeId>(c)).corners[0])].push_back(static_cast<CubeId>(c));
        for (std::size_t v = 0; v < proj.size(); ++v) {
          for (CubeId c : with_corner0[static_cast<std::size_t>(proj[v])]) {
            const Cube& base_cube = x_.cube(d, c);
            std::vector<CubeId> lift(base_cube.corners.size(), -1);
            lift[0] = static_cast<CubeId>(v);
            bool ok = true;
            for (std::uint32_t lab = 1; lab < lift.size() && ok; ++lab) {
              int k = __builtin_ctz(lab);
              std::uint32_t from = lab ^ (1u << k);
              lift[lab] = b.step(lift[from], x_.edge_at(d, c, from, k));
              ok = lift[lab] >= 0;
            }
            if (!ok) continue;
            Cube cube;
            cube.corners = lift;
            for (int i = 0; i < d; ++i)
              for (int s = 0; s < 2; ++s) {
                const Facet& g = base_cube.faces[static_cast<std::size_t>(2 * i + s)];
                CubeId at = lift[facet_label_in_parent(0, i, s, g.corr)];
                Facet f;
                f.corr = g.corr;
                if (d - 1 == 1) {
                  f.id = -1;
                  for (const auto& a : b.adj[static_cast<std::size_t>(at)])
                    if (a.end == EdgeEnd{g.id, 0}) f.id = a.edge;
                } else {
                  f.id = lifted[static_cast<std::size_t>(d - 1)].at({g.id, at});
                }
                cube.faces.push_back(std::move(f));
              }
            CubeId id = ball.add_cube(d, std::move(cube));
            lifted[static_cast<std::size_t>(d)][{c, static_cast<CubeId>(v)}] = id;
            images[static_cast<std::size_t>(d)].push_back({c, identity_frame(d)});
          }
        }
      }
    }
    while (images.size() > static_cast<std::size_t>(ball.dim() + 1) && images.back().empty()) images.pop_back();
    b.ball = share(std::move(ball));
    b.projection.source = b.ball;
    b.projection.target = b.base;
    b.projection.images = std::move(images);
  }

  const CubeComplex& x_;
  std::vector<std::vector<EdgeEnd>> ends_;
  std::vector<std::vector<SquareCorner>> corners_;
};

}  // namespace detail

/// Universal-cover ball of the given combinatorial radius.
inline DevelopedBall develop_ball(std::shared_ptr<const CubeComplex> x, CubeId base, int radius) {
  if (base < 0 || static_cast<std::size_t>(base) >= x->vertex_count())
    throw Error(ErrorKind::UnknownVertex, "vertex " + std::to_string(base));
  if (radius < 0) throw Error(ErrorKind::Validation, "negative radius");
  require_npc(*x, "develop");
  return detail::Developer(*x).grow(x, base, radius);
}

/// Endpoint of the lift of a base path starting at the root; -1 if it leaves the ball.
inline CubeId lift_path(const DevelopedBall& b, const std::vector<EdgeEnd>& path, CubeId start = 0) {
  CubeId v = start;
  for (const auto& e : path) {
    v = b.step(v, e);
    if (v < 0) return -1;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Systole

struct SystoleResult {
  bool exact = false;
  /// Exact length, or the lower bound when not exact.
  int value = 0;
  int guard = kDefaultGuard;
  CubeId vertex = -1;
  /// Closed essential path at `vertex` when exact.
  std::vector<EdgeEnd> witness;
  /// A complete development without a second lift: the complex is simply connected.
  bool simply_connected = false;

  std::string str() const { return (exact ? "Exact(" : "AtLeast(") + std::to_string(value) + ")"; }
};

namespace detail {

/// Graph girth by breadth-first search from each vertex: in a tree cover the
/// first second lift of v appears exactly at the shortest cycle through v.
inline SystoleResult graph_systole(const CubeComplex& g, int guard) {
  SystoleResult best;
  best.guard = guard;
  auto ends = g.edge_ends();
  int n = static_cast<int>(g.vertex_count());
  int best_len = std::numeric_limits<int>::max();
  for (int v = 0; v < n; ++v) {
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::vector<EdgeEnd> up(static_cast<std::size_t>(n), EdgeEnd{-1, -1});  // edge-end leaving toward parent
    std::deque<int> q{v};
    dist[static_cast<std::size_t>(v)] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (const auto& e : ends[static_cast<std::size_t>(u)]) {
        int w = g.edge_vertex({e.edge, 1 - e.side});
        if (dist[static_cast<std::size_t>(w)] >= 0) continue;
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        up[static_cast<std::size_t>(w)] = {e.edge, 1 - e.side};
        q.push_back(w);
      }
    }
    for (std::size_t e = 0; e < g.count(1); ++e) {
      int a = g.cube(1, static_cast<CubeId>(e)).corners[0], c = g.cube(1, static_cast<CubeId>(e)).corners[1];
      if (dist[static_cast<std::size_t>(a)] < 0) continue;
      if (up[static_cast<std::size_t>(c)].edge == static_cast<CubeId>(e) || up[static_cast<std::size_t>(a)].edge == static_cast<CubeId>(e))
        continue;
      int len = dist[static_cast<std::size_t>(a)] + dist[static_cast<std::size_t>(c)] + 1;
      // finite graphs are searched exhaustively; the guard only bounds trees
      if (len >= best_len) continue;
      auto root_path = [&](int x) {
        std::vector<EdgeEnd> p;
        while (up[static_cast<std::size_t>(x)].edge >= 0) {
          EdgeEnd u = up[static_cast<std::size_t>(x)];
          p.push_back({u.edge, 1 - u.side});
          x = g.edge_vertex({u.edge, 1 - u.side});
        }
        std::reverse(p.begin(), p.end());
        return p;
      };
      auto pa = root_path(a), pc = root_path(c);
      std::vector<EdgeEnd> loop = pa;
      loop.push_back({static_cast<CubeId>(e), 0});
      for (auto it = pc.rbegin(); it != pc.rend(); ++it) loop.push_back({it->edge, 1 - it->side});
      // a lollipop can only win with an equal-length genuine cycle found elsewhere
      if (pa.size() && pc.size() && pa[0] == pc[0]) continue;
      best_len = len;
      best.exact = true;
      best.value = len;
      best.vertex = v;
      best.witness = std::move(loop);
    }
  }
  if (!best.exact) {
    best.value = guard + 1;
    best.simply_connected = g.count(1) + 1 == g.vertex_count() && g.connected();
  }
  return best;
}

}  // namespace detail

/// Shortest essential closed path, by second-lift detection in developments.
inline SystoleResult systole(std::shared_ptr<const CubeComplex> x, int guard = kDefaultGuard) {
  require_npc(*x, "systole");
  if (x->dim() <= 1) return detail::graph_systole(*x, guard);
  SystoleResult best;
  best.guard = guard;
  int limit = guard;
  bool all_complete = true;
  detail::Developer dev(*x);
  for (std::size_t v = 0; v < x->vertex_count(); ++v) {
    CubeId hit = -1;
    auto ball = dev.grow(
        x, static_cast<CubeId>(v), limit,
        [&](const DevelopedBall& b, CubeId w) {
          if (b.proj(w) != static_cast<CubeId>(v)) return false;
          hit = w;
          return true;
        },
        false);
    if (hit >= 0) {
      int len = ball.dist[static_cast<std::size_t>(hit)];
      if (!best.exact || len < best.value) {
        best.exact = true;
        best.value = len;
        best.vertex = static_cast<CubeId>(v);
        best.witness = ball.path_from_root(hit);
      }
      limit = len - 1;
      all_complete = false;
    } else if (!ball.complete) {
      all_complete = false;
    }
    if (best.exact && best.value == 1) break;
  }
  if (!best.exact) {
    best.value = guard + 1;
    best.simply_connected = all_complete;
  }
  return best;
}

inline Certificate systole_certificate(const SystoleResult& s) {
  auto cert = make_certificate("systole");
  cert.add("systole", s.str());
  cert.add("guard", s.guard);
  if (s.exact) {
    Json w = Json::array();
    for (const auto& e : s.witness) w.push_back({e.edge, e.side});
    cert.witness = {{"vertex", s.vertex}, {"loop", w}};
  } else {
    cert.add("simply_connected", s.simply_connected);
    if (!s.simply_connected) cert.inconclusive("guard radius " + std::to_string(s.guard) + " reached");
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Convexity

inline std::vector<int> bfs_distances(const CubeComplex& x, CubeId from,
                                      const std::vector<std::vector<EdgeEnd>>& ends) {
  std::vector<int> dist(x.vertex_count(), -1);
  std::deque<CubeId> q{from};
  dist[static_cast<std::size_t>(from)] = 0;
  while (!q.empty()) {
    CubeId u = q.front();
    q.pop_front();
    for (const auto& e : ends[static_cast<std::size_t>(u)]) {
      CubeId w = x.edge_vertex({e.edge, 1 - e.side});
      if (dist[static_cast<std::size_t>(w)] >= 0) continue;
      dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
      q.push_back(w);
    }
  }
  return dist;
}

/// Largest 0-skeleton distance among the given vertices (-1 if disconnected).
inline int vertex_set_diameter(const CubeComplex& x, const std::vector<CubeId>& verts) {
  auto ends = x.edge_ends();
  int best = 0;
  for (CubeId v : verts) {
    auto d = bfs_distances(x, v, ends);
    for (CubeId w : verts) {
      if (d[static_cast<std::size_t>(w)] < 0) return -1;
      best = std::max(best, d[static_cast<std::size_t>(w)]);
    }
  }
  return best;
}

inline int diameter(const CubeComplex& x) {
  std::vector<CubeId> all(x.vertex_count());
  std::iota(all.begin(), all.end(), 0);
  return vertex_set_diameter(x, all);
}

/// Interval closure: repeatedly add every vertex on a geodesic between two
/// members until stable. In a CAT(0) cube complex this is the convex hull.
inline std::vector<CubeId> hull_vertices(const CubeComplex& x, std::vector<CubeId> seed) {
  auto ends = x.edge_ends();
  std::vector<char> in(x.vertex_count(), 0);
  std::vector<CubeId> members;
  for (CubeId v : seed)
    if (!in[static_cast<std::size_t>(v)]) {
      in[static_cast<std::size_t>(v)] = 1;
      members.push_back(v);
    }
  std::map<CubeId, std::vector<int>> dist_cache;
  auto dist_from = [&](CubeId v) -> const std::vector<int>& {
    auto it = dist_cache.find(v);
    if (it == dist_cache.end()) it = dist_cache.emplace(v, bfs_distances(x, v, ends)).first;
    return it->second;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t n = members.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto& di = dist_from(members[i]);
        const auto& dj = dist_from(members[j]);
        int d = di[static_cast<std::size_t>(members[j])];
        if (d < 0) continue;
        for (std::size_t w = 0; w < x.vertex_count(); ++w)
          if (!in[w] && di[w] >= 0 && dj[w] >= 0 && di[w] + dj[w] == d) {
            in[w] = 1;
            members.push_back(static_cast<CubeId>(w));
            changed = true;
          }
      }
  }
  std::sort(members.begin(), members.end());
  return members;
}

/// Convex hull inside a developed ball; refuses hulls that reach the frontier.
inline Subcomplex convex_hull(const DevelopedBall& b, const std::vector<CubeId>& seed) {
  for (CubeId v : seed)
    if (v < 0 || static_cast<std::size_t>(v) >= b.size()) throw Error(ErrorKind::UnknownVertex, "vertex " + std::to_string(v));
  auto verts = hull_vertices(*b.ball, seed);
  for (CubeId v : verts)
    if (b.frontier(v))
      throw Error(ErrorKind::FrontierContamination,
                  "hull reaches ball vertex " + std::to_string(v) + " at distance " +
                      std::to_string(b.dist[static_cast<std::size_t>(v)]) + " of radius " + std::to_string(b.radius));
  return full_subcomplex(*b.ball, std::move(verts));
}

// ---------------------------------------------------------------------------
// Strips along a locally convex subcomplex

/// Square corners of a complex indexed by their pair of edge-ends.
class SquareCornerIndex {
 public:
  struct Entry {
    CubeId cube;
    std::uint32_t label;
    int axis_first;  // direction of the first edge-end of the key
  };
  explicit SquareCornerIndex(const CubeComplex& x) : at_(x.vertex_count()) {
    for (std::size_t c = 0; c < x.count(2); ++c)
      for (std::uint32_t lab = 0; lab < 4; ++lab) {
        EdgeEnd a = x.edge_at(2, static_cast<CubeId>(c), lab, 0);
        EdgeEnd b = x.edge_at(2, static_cast<CubeId>(c), lab, 1);
        auto v = static_cast<std::size_t>(x.cube(2, static_cast<CubeId>(c)).corners[lab]);
        at_[v].emplace(std::make_pair(a, b), Entry{static_cast<CubeId>(c), lab, 0});
        at_[v].emplace(std::make_pair(b, a), Entry{static_cast<CubeId>(c), lab, 1});
      }
  }
  const Entry* find(CubeId v, EdgeEnd a, EdgeEnd b) const {
    const auto& m = at_[static_cast<std::size_t>(v)];
    auto it = m.find({a, b});
    return it == m.end() ? nullptr : &it->second;
  }

 private:
  std::vector<std::map<std::pair<EdgeEnd, EdgeEnd>, Entry>> at_;
};

/// Nodes are exterior edge-ends of X at images of Y vertices; two nodes are
/// joined when a square of X spans an edge of Y and both rungs. A component
/// is one wall-piece of Y-tilde against a hyperplane disjoint from it.
struct RungGraph {
  struct Node {
    CubeId y;
    EdgeEnd rung;
  };
  struct Arc {
    int to;
    EdgeEnd along;  // edge-end of Y at the node's vertex
  };
  std::vector<Node> nodes;
  std::vector<std::vector<Arc>> arcs;
  std::vector<int> component;
  int components = 0;
};

inline RungGraph rung_graph(const CubicalMap& f) {
  const CubeComplex& y = *f.source;
  const CubeComplex& x = *f.target;
  RungGraph g;
  auto y_ends = y.edge_ends();
  auto x_ends = x.edge_ends();
  std::map<std::pair<CubeId, EdgeEnd>, int> index;
  for (std::size_t v = 0; v < y.vertex_count(); ++v) {
    std::set<EdgeEnd> inside;
    for (const auto& e : y_ends[v]) inside.insert(f.image(e));
    auto fx = static_cast<std::size_t>(f.vertex(static_cast<CubeId>(v)));
    std::vector<EdgeEnd> outside;
    for (const auto& e : x_ends[fx])
      if (!inside.count(e)) outside.push_back(e);
    std::sort(outside.begin(), outside.end());
    for (const auto& e : outside) {
      index[{static_cast<CubeId>(v), e}] = static_cast<int>(g.nodes.size());
      g.nodes.push_back({static_cast<CubeId>(v), e});
    }
  }
  g.arcs.resize(g.nodes.size());
  if (x.dim() >= 2) {
    SquareCornerIndex squares(x);
    for (std::size_t n = 0; n < g.nodes.size(); ++n) {
      auto [v, rung] = g.nodes[n];
      CubeId fv = f.vertex(v);
      for (const auto& eta : y_ends[static_cast<std::size_t>(v)]) {
        EdgeEnd phi = f.image(eta);
        const auto* sq = squares.find(fv, phi, rung);
        if (!sq) continue;
        int i_phi = sq->axis_first, i_rung = 1 - sq->axis_first;
        EdgeEnd across = x.edge_at(2, sq->cube, sq->label ^ (1u << i_phi), i_rung);
        CubeId w = y.edge_vertex({eta.edge, 1 - eta.side});
        auto it = index.find({w, across});
        if (it == index.end()) continue;  // cannot happen for a local isometry
        g.arcs[n].push_back({it->second, eta});
      }
    }
  }
  g.component.assign(g.nodes.size(), -1);
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    if (g.component[n] >= 0) continue;
    std::deque<int> q{static_cast<int>(n)};
    g.component[n] = g.components;
    while (!q.empty()) {
      int a = q.front();
      q.pop_front();
      for (const auto& arc : g.arcs[static_cast<std::size_t>(a)])
        if (g.component[static_cast<std::size_t>(arc.to)] < 0) {
          g.component[static_cast<std::size_t>(arc.to)] = g.components;
          q.push_back(arc.to);
        }
    }
    ++g.components;
  }
  return g;
}

/// One wall-piece: the near side of a rung component lifted to Y-tilde.
struct WallPiece {
  int component = 0;
  CubeId root_vertex = 0;
  EdgeEnd rung;
  std::size_t nodes = 0;
  /// Two lifts of one node: the strip closes up in Y, so it is unbounded upstairs.
  bool unbounded = false;
  /// The lift left the development used to measure it.
  bool escaped = false;
  int diameter = 0;
  /// Closed path in Y along which the strip repeats (when unbounded).
  std::vector<EdgeEnd> loop;
};

namespace detail {

inline std::vector<EdgeEnd> reduce_append(std::vector<EdgeEnd> w, EdgeEnd e) {
  if (!w.empty() && w.back().edge == e.edge && w.back().side != e.side) {
    w.pop_back();
  } else {
    w.push_back(e);
  }
  return w;
}

inline int tree_distance(const std::vector<EdgeEnd>& p, const std::vector<EdgeEnd>& q) {
  std::size_t k = 0;
  while (k < p.size() && k < q.size() && p[k] == q[k]) ++k;
  return static_cast<int>(p.size() + q.size() - 2 * k);
}

}  // namespace detail

/// Lifts every rung component into the universal cover of Y and measures it.
inline std::vector<WallPiece> wall_pieces(const CubicalMap& f, const RungGraph& g, int guard = kDefaultGuard) {
  const CubeComplex& y = *f.source;
  std::vector<WallPiece> out(static_cast<std::size_t>(g.components));
  std::vector<std::vector<int>> members(static_cast<std::size_t>(g.components));
  for (std::size_t n = 0; n < g.nodes.size(); ++n) members[static_cast<std::size_t>(g.component[n])].push_back(static_cast<int>(n));
  std::unique_ptr<detail::Developer> dev;
  if (y.dim() >= 2) dev = std::make_unique<detail::Developer>(y);
  for (int c = 0; c < g.components; ++c) {
    const auto& mem = members[static_cast<std::size_t>(c)];
    WallPiece& wp = out[static_cast<std::size_t>(c)];
    wp.component = c;
    wp.nodes = mem.size();
    int root = mem.front();
    wp.root_vertex = g.nodes[static_cast<std::size_t>(root)].y;
    wp.rung = g.nodes[static_cast<std::size_t>(root)].rung;
    if (y.dim() <= 1) {
      // Y-tilde is a tree: lifts are reduced edge paths from the root.
      std::map<int, std::vector<EdgeEnd>> lift;
      lift[root] = {};
      std::deque<int> q{root};
      while (!q.empty() && !wp.unbounded) {
        int a = q.front();
        q.pop_front();
        for (const auto& arc : g.arcs[static_cast<std::size_t>(a)]) {
          auto w = detail::reduce_append(lift[a], arc.along);
          auto it = lift.find(arc.to);
          if (it == lift.end()) {
            lift[arc.to] = std::move(w);
            q.push_back(arc.to);
          } else if (it->second != w) {
            wp.unbounded = true;
            // loop at the root: path to a, the arc, back from arc.to
            std::vector<EdgeEnd> loop = lift[a];
            loop.push_back(arc.along);
            for (auto r = it->second.rbegin(); r != it->second.rend(); ++r) loop.push_back({r->edge, 1 - r->side});
            std::vector<EdgeEnd> reduced;
            for (const auto& e : loop) reduced = detail::reduce_append(std::move(reduced), e);
            wp.loop = std::move(reduced);
            break;
          }
        }
      }
      if (!wp.unbounded) {
        std::vector<const std::vector<EdgeEnd>*> pts;
        for (const auto& [n, w] : lift) pts.push_back(&w);
        for (std::size_t i = 0; i < pts.size(); ++i)
          for (std::size_t j = i + 1; j < pts.size(); ++j)
            wp.diameter = std::max(wp.diameter, detail::tree_distance(*pts[i], *pts[j]));
      }
      continue;
    }
    int radius = std::min<int>(static_cast<int>(mem.size()), guard);
    auto ball = dev->grow(f.source, wp.root_vertex, radius);
    std::map<int, CubeId> lift{{root, 0}};
    std::deque<int> q{root};
    while (!q.empty() && !wp.unbounded && !wp.escaped) {
      int a = q.front();
      q.pop_front();
      for (const auto& arc : g.arcs[static_cast<std::size_t>(a)]) {
        CubeId w = ball.step(lift[a], arc.along);
        if (w < 0) {
          wp.escaped = true;
          break;
        }
        auto it = lift.find(arc.to);
        if (it == lift.end()) {
          lift[arc.to] = w;
          q.push_back(arc.to);
        } else if (it->second != w) {
          wp.unbounded = true;
          auto pa = ball.path_from_root(w), pb = ball.path_from_root(it->second);
          std::vector<EdgeEnd> loop = pa;
          for (auto r = pb.rbegin(); r != pb.rend(); ++r) loop.push_back({r->edge, 1 - r->side});
          wp.loop = std::move(loop);
          break;
        }
      }
    }
    if (!wp.unbounded && !wp.escaped) {
      std::vector<CubeId> pts;
      for (const auto& [n, v] : lift) pts.push_back(v);
      wp.diameter = vertex_set_diameter(*ball.ball, pts);
    }
  }
  return out;
}

inline Json path_json(const std::vector<EdgeEnd>& p) {
  Json a = Json::array();
  for (const auto& e : p) a.push_back({e.edge, e.side});
  return a;
}

/// Searches strips [0,1] x [0,l] with one long side in Y-tilde and the rest
/// outside it. L is the longest strip found; unbounded strips fail.
inline Certificate superconvexity_check(const CubicalMap& f, int strip_cutoff, int guard = kDefaultGuard) {
  auto iso = check_local_isometry(f);
  if (!iso.passed()) throw Error(ErrorKind::NotLocalIsometry, "superconvexity: " + iso.reason);
  require_npc(*f.target, "superconvexity target");
  auto cert = make_certificate("superconvexity");
  cert.add("cutoff", strip_cutoff);
  auto g = rung_graph(f);
  auto pieces = wall_pieces(f, g, guard);
  int longest = 0;
  const WallPiece* bad = nullptr;
  bool escaped = false;
  for (const auto& wp : pieces) {
    if (wp.unbounded || wp.diameter >= strip_cutoff) {
      if (!bad) bad = &wp;
    }
    escaped = escaped || wp.escaped;
    if (!wp.unbounded) longest = std::max(longest, wp.diameter);
  }
  cert.add("rung_components", g.components);
  if (bad) {
    cert.add("L", bad->unbounded ? "unbounded" : std::to_string(longest));
    cert.fail("NotSuperconvexUpTo(" + std::to_string(strip_cutoff) + ")",
              {{"vertex", bad->root_vertex},
               {"rung", {bad->rung.edge, bad->rung.side}},
               {"unbounded", bad->unbounded},
               {"loop", path_json(bad->loop)}});
    return cert;
  }
  cert.add("L", longest);
  if (escaped) cert.inconclusive("guard radius " + std::to_string(guard) + " reached while lifting strips");
  return cert;
}

}  // namespace cubecx
