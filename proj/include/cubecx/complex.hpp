#pragma once

#include "cubecx/certificate.hpp"
#include "cubecx/common.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cubecx {

/// Signed coordinate assignment: a local coordinate lands on `axis` of the
/// parent cube, reversed when `flip` is set.
struct AxisMap {
  int axis = 0;
  bool flip = false;
  friend bool operator==(const AxisMap&, const AxisMap&) = default;
  friend auto operator<=>(const AxisMap&, const AxisMap&) = default;
};

/// One entry per local coordinate.
using Frame = std::vector<AxisMap>;

inline Frame identity_frame(int n) {
  Frame f(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = {i, false};
  return f;
}

/// Facet reference of an n-cube: the facet cube and how its n-1 coordinates
/// sit inside the parent (never on the coordinate that was fixed).
struct Facet {
  CubeId id = 0;
  Frame corr;
  friend bool operator==(const Facet&, const Facet&) = default;
};

/// An n-cube, n >= 1. Corner label bit j is the value of coordinate j.
/// faces[2*i + s] is the facet where coordinate i equals s.
struct Cube {
  std::vector<CubeId> corners;
  std::vector<Facet> faces;
  friend bool operator==(const Cube&, const Cube&) = default;
};

inline std::uint32_t facet_label_in_parent(std::uint32_t facet_label, int fixed_axis, int side,
                                           const Frame& corr) {
  std::uint32_t label = side ? (1u << fixed_axis) : 0u;
  for (std::size_t j = 0; j < corr.size(); ++j) {
    std::uint32_t bit = ((facet_label >> j) & 1u) ^ (corr[j].flip ? 1u : 0u);
    label |= bit << corr[j].axis;
  }
  return label;
}

/// End of an edge: `side` 0 is corners[0] of the edge.
struct EdgeEnd {
  CubeId edge = 0;
  int side = 0;
  friend bool operator==(const EdgeEnd&, const EdgeEnd&) = default;
  friend auto operator<=>(const EdgeEnd&, const EdgeEnd&) = default;
};

/// A cube reached by descending through facets, plus where its coordinates
/// land in the cube we started from.
struct SubCube {
  int dim = 0;
  CubeId id = 0;
  Frame frame;
  friend bool operator==(const SubCube&, const SubCube&) = default;
};

/// Finite combinatorial cube complex with explicit facet maps. Vertices are
/// implicit (0..vertex_count-1); cubes of dimension d >= 1 live in tables.
class CubeComplex {
 public:
  CubeComplex() = default;
  explicit CubeComplex(std::size_t vertices) : vertices_(vertices) {}

  int dim() const {
    for (int d = static_cast<int>(cubes_.size()); d >= 1; --d)
      if (!cubes_[static_cast<std::size_t>(d - 1)].empty()) return d;
    return 0;
  }
  std::size_t count(int d) const {
    if (d == 0) return vertices_;
    if (d < 0 || d > static_cast<int>(cubes_.size())) return 0;
    return cubes_[static_cast<std::size_t>(d - 1)].size();
  }
  std::size_t vertex_count() const { return vertices_; }
  std::size_t total_cells() const {
    std::size_t t = vertices_;
    for (const auto& tab : cubes_) t += tab.size();
    return t;
  }
  const Cube& cube(int d, CubeId id) const {
    return cubes_[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(id)];
  }
  const std::vector<Cube>& cubes(int d) const {
    static const std::vector<Cube> empty;
    if (d < 1 || d > static_cast<int>(cubes_.size())) return empty;
    return cubes_[static_cast<std::size_t>(d - 1)];
  }

  CubeId add_vertex() { return static_cast<CubeId>(vertices_++); }
  void set_vertex_count(std::size_t n) { vertices_ = n; }
  CubeId add_cube(int d, Cube c) {
    assert(d >= 1);
    if (static_cast<int>(cubes_.size()) < d) cubes_.resize(static_cast<std::size_t>(d));
    auto& tab = cubes_[static_cast<std::size_t>(d - 1)];
    tab.push_back(std::move(c));
    return static_cast<CubeId>(tab.size() - 1);
  }
  /// Edge whose side-0 end is `from` and side-1 end is `to`.
  CubeId add_edge(CubeId from, CubeId to) {
    Cube e;
    e.corners = {from, to};
    e.faces = {Facet{from, {}}, Facet{to, {}}};
    return add_cube(1, std::move(e));
  }

  int euler_characteristic() const {
    long chi = 0;
    for (int d = 0; d <= dim(); ++d) chi += (d % 2 ? -1 : 1) * static_cast<long>(count(d));
    return static_cast<int>(chi);
  }

  /// Descends from cube (d, c) fixing the listed (axis, bit) pairs in order.
  SubCube descend(int d, CubeId c, std::span<const std::pair<int, int>> fixed) const {
    SubCube cur{d, c, identity_frame(d)};
    for (auto [axis, bit] : fixed) {
      int local = -1;
      for (std::size_t k = 0; k < cur.frame.size(); ++k)
        if (cur.frame[k].axis == axis) local = static_cast<int>(k);
      assert(local >= 0);
      int side = bit ^ (cur.frame[static_cast<std::size_t>(local)].flip ? 1 : 0);
      if (cur.dim == 1) {
        CubeId v = cube(1, cur.id).corners[static_cast<std::size_t>(side)];
        return SubCube{0, v, {}};
      }
      const Facet& f = cube(cur.dim, cur.id).faces[static_cast<std::size_t>(2 * local + side)];
      Frame next(f.corr.size());
      for (std::size_t j = 0; j < f.corr.size(); ++j) {
        const AxisMap& up = cur.frame[static_cast<std::size_t>(f.corr[j].axis)];
        next[j] = AxisMap{up.axis, up.flip != f.corr[j].flip};
      }
      cur = SubCube{cur.dim - 1, f.id, std::move(next)};
    }
    return cur;
  }

  /// The edge of cube (d, c) leaving corner `label` along coordinate `axis`,
  /// and which of its ends sits at that corner.
  EdgeEnd edge_at(int d, CubeId c, std::uint32_t label, int axis) const {
    if (d == 1) return EdgeEnd{c, static_cast<int>(label & 1u)};
    std::vector<std::pair<int, int>> fixed;
    fixed.reserve(static_cast<std::size_t>(d - 1));
    for (int k = 0; k < d; ++k)
      if (k != axis) fixed.emplace_back(k, static_cast<int>((label >> k) & 1u));
    SubCube e = descend(d, c, fixed);
    int bit = static_cast<int>((label >> axis) & 1u);
    return EdgeEnd{e.id, bit ^ (e.frame[0].flip ? 1 : 0)};
  }

  CubeId edge_vertex(EdgeEnd e) const { return cube(1, e.edge).corners[static_cast<std::size_t>(e.side)]; }
  EdgeEnd opposite(EdgeEnd e) const { return EdgeEnd{e.edge, 1 - e.side}; }

  /// Sorted edge-ends at every vertex.
  std::vector<std::vector<EdgeEnd>> edge_ends() const {
    std::vector<std::vector<EdgeEnd>> out(vertices_);
    const auto& edges = cubes(1);
    for (std::size_t e = 0; e < edges.size(); ++e)
      for (int s = 0; s < 2; ++s)
        out[static_cast<std::size_t>(edges[e].corners[static_cast<std::size_t>(s)])].push_back(
            EdgeEnd{static_cast<CubeId>(e), s});
    return out;
  }

  /// Connected components of the 1-skeleton, labelled in order of least vertex.
  std::vector<int> vertex_components(int* count_out = nullptr) const {
    std::vector<int> parent(vertices_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (const auto& e : cubes(1)) {
      int a = find(e.corners[0]), b = find(e.corners[1]);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::vector<int> label(vertices_, -1);
    int next = 0;
    std::vector<int> root_label(vertices_, -1);
    for (std::size_t v = 0; v < vertices_; ++v) {
      int r = find(static_cast<int>(v));
      if (root_label[static_cast<std::size_t>(r)] < 0) root_label[static_cast<std::size_t>(r)] = next++;
      label[v] = root_label[static_cast<std::size_t>(r)];
    }
    if (count_out) *count_out = next;
    return label;
  }
  bool connected() const {
    int n = 0;
    vertex_components(&n);
    return n <= 1;
  }

  friend bool operator==(const CubeComplex& a, const CubeComplex& b) {
    return a.vertices_ == b.vertices_ && a.dim() == b.dim() && [&] {
      for (int d = 1; d <= a.dim(); ++d)
        if (a.cubes(d) != b.cubes(d)) return false;
      return true;
    }();
  }

 private:
  std::size_t vertices_ = 0;
  std::vector<std::vector<Cube>> cubes_;
};

/// Subcomplex as per-dimension sorted id lists (index 0 is vertices).
struct Subcomplex {
  std::vector<std::vector<CubeId>> cells;

  bool contains(int d, CubeId id) const {
    if (d >= static_cast<int>(cells.size())) return false;
    const auto& v = cells[static_cast<std::size_t>(d)];
    return std::binary_search(v.begin(), v.end(), id);
  }
  std::size_t count(int d) const {
    return d < static_cast<int>(cells.size()) ? cells[static_cast<std::size_t>(d)].size() : 0;
  }
  std::span<const CubeId> vertices() const {
    if (cells.empty()) return {};
    return cells[0];
  }
};

/// Full subcomplex spanned by a vertex set: every cube whose corners all lie in it.
inline Subcomplex full_subcomplex(const CubeComplex& x, std::vector<CubeId> verts) {
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  Subcomplex s;
  s.cells.resize(static_cast<std::size_t>(x.dim() + 1));
  std::vector<char> in(x.vertex_count(), 0);
  for (auto v : verts) in[static_cast<std::size_t>(v)] = 1;
  s.cells[0] = std::move(verts);
  for (int d = 1; d <= x.dim(); ++d) {
    const auto& tab = x.cubes(d);
    for (std::size_t c = 0; c < tab.size(); ++c)
      if (std::all_of(tab[c].corners.begin(), tab[c].corners.end(),
                      [&](CubeId v) { return in[static_cast<std::size_t>(v)] != 0; }))
        s.cells[static_cast<std::size_t>(d)].push_back(static_cast<CubeId>(c));
  }
  return s;
}

/// Adds every face of every listed cube.
inline Subcomplex face_closure(const CubeComplex& x, Subcomplex s) {
  s.cells.resize(static_cast<std::size_t>(std::max(x.dim(), 0) + 1));
  for (int d = x.dim(); d >= 1; --d) {
    std::set<CubeId> lower(s.cells[static_cast<std::size_t>(d - 1)].begin(),
                           s.cells[static_cast<std::size_t>(d - 1)].end());
    for (CubeId c : s.cells[static_cast<std::size_t>(d)])
      for (const auto& f : x.cube(d, c).faces) lower.insert(f.id);
    s.cells[static_cast<std::size_t>(d - 1)].assign(lower.begin(), lower.end());
  }
  for (auto& v : s.cells) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return s;
}

/// Standalone copy of a face-closed subcomplex; `origin[d][new id]` is the old id.
struct Extracted {
  CubeComplex complex;
  std::vector<std::vector<CubeId>> origin;
};

inline Extracted extract(const CubeComplex& x, const Subcomplex& s) {
  Extracted out;
  int top = static_cast<int>(s.cells.size()) - 1;
  while (top > 0 && s.cells[static_cast<std::size_t>(top)].empty()) --top;
  out.origin.resize(static_cast<std::size_t>(std::max(top, 0) + 1));
  std::vector<std::map<CubeId, CubeId>> renum(out.origin.size());
  for (int d = 0; d <= top; ++d) {
    for (CubeId c : s.cells[static_cast<std::size_t>(d)]) {
      renum[static_cast<std::size_t>(d)][c] = static_cast<CubeId>(out.origin[static_cast<std::size_t>(d)].size());
      out.origin[static_cast<std::size_t>(d)].push_back(c);
    }
  }
  out.complex.set_vertex_count(out.origin.empty() ? 0 : out.origin[0].size());
  auto lookup = [&](int d, CubeId c) {
    auto it = renum[static_cast<std::size_t>(d)].find(c);
    if (it == renum[static_cast<std::size_t>(d)].end())
      throw Error(ErrorKind::Validation, "subcomplex is not closed under faces");
    return it->second;
  };
  for (int d = 1; d <= top; ++d) {
    for (CubeId c : s.cells[static_cast<std::size_t>(d)]) {
      Cube cube = x.cube(d, c);
      for (auto& v : cube.corners) v = lookup(0, v);
      for (auto& f : cube.faces) f.id = lookup(d - 1, f.id);
      out.complex.add_cube(d, std::move(cube));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural validation

namespace detail {

inline bool is_signed_injection(const Frame& f, int parent_dim, int skip_axis) {
  std::vector<char> seen(static_cast<std::size_t>(parent_dim), 0);
  for (const auto& a : f) {
    if (a.axis < 0 || a.axis >= parent_dim || a.axis == skip_axis) return false;
    if (seen[static_cast<std::size_t>(a.axis)]) return false;
    seen[static_cast<std::size_t>(a.axis)] = 1;
  }
  return true;
}

}  // namespace detail

/// Checks facet references, corner agreement and facet commutation.
/// Returns a failing certificate with reason DanglingFace or IncompatibleFaces.
inline Certificate check_structure(const CubeComplex& x) {
  auto cert = make_certificate("structure");
  for (int d = 1; d <= x.dim(); ++d) {
    const auto& tab = x.cubes(d);
    for (std::size_t ci = 0; ci < tab.size(); ++ci) {
      const Cube& c = tab[ci];
      auto where = nlohmann::ordered_json{{"dim", d}, {"cube", ci}};
      if (c.corners.size() != (std::size_t{1} << d) || c.faces.size() != static_cast<std::size_t>(2 * d)) {
        cert.fail("DanglingFace", where);
        return cert;
      }
      for (CubeId v : c.corners)
        if (v < 0 || static_cast<std::size_t>(v) >= x.vertex_count()) {
          cert.fail("DanglingFace", where);
          return cert;
        }
      for (int i = 0; i < d; ++i) {
        for (int s = 0; s < 2; ++s) {
          const Facet& f = c.faces[static_cast<std::size_t>(2 * i + s)];
          auto fw = where;
          fw["face"] = std::to_string(i) + ":" + std::to_string(s);
          if (f.id < 0 || static_cast<std::size_t>(f.id) >= x.count(d - 1) ||
              f.corr.size() != static_cast<std::size_t>(d - 1) || !detail::is_signed_injection(f.corr, d, i)) {
            cert.fail("DanglingFace", fw);
            return cert;
          }
          std::uint32_t n_fl = 1u << (d - 1);
          for (std::uint32_t fl = 0; fl < n_fl; ++fl) {
            CubeId fv = d == 1 ? f.id : x.cube(d - 1, f.id).corners[fl];
            CubeId pv = c.corners[facet_label_in_parent(fl, i, s, f.corr)];
            if (fv != pv) {
              cert.fail("IncompatibleFaces", fw);
              return cert;
            }
          }
        }
      }
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
          for (int si = 0; si < 2; ++si)
            for (int sj = 0; sj < 2; ++sj) {
              std::pair<int, int> ij[2] = {{i, si}, {j, sj}};
              std::pair<int, int> ji[2] = {{j, sj}, {i, si}};
              if (x.descend(d, static_cast<CubeId>(ci), ij) != x.descend(d, static_cast<CubeId>(ci), ji)) {
                auto fw = where;
                fw["axes"] = {i, j};
                cert.fail("IncompatibleFaces", fw);
                return cert;
              }
            }
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Links

/// Vertex link: one link vertex per edge-end at v, one simplex per cube corner at v.
struct Link {
  CubeId vertex = 0;
  std::vector<EdgeEnd> vertices;
  /// Each simplex lists link-vertex indices in cube-coordinate order.
  std::vector<std::vector<int>> simplices;
  /// (dim, cube, corner label) that produced each simplex.
  std::vector<std::tuple<int, CubeId, std::uint32_t>> origin;

  int index_of(EdgeEnd e) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), e);
    return it != vertices.end() && *it == e ? static_cast<int>(it - vertices.begin()) : -1;
  }
};

/// Per-vertex incidences, built once for repeated link queries.
struct Incidence {
  std::vector<std::vector<EdgeEnd>> ends;
  std::vector<std::vector<std::tuple<int, CubeId, std::uint32_t>>> corners;

  explicit Incidence(const CubeComplex& x) : ends(x.edge_ends()), corners(x.vertex_count()) {
    for (auto& e : ends) std::sort(e.begin(), e.end());
    for (int d = 2; d <= x.dim(); ++d) {
      const auto& tab = x.cubes(d);
      for (std::size_t c = 0; c < tab.size(); ++c)
        for (std::uint32_t lab = 0; lab < tab[c].corners.size(); ++lab)
          corners[static_cast<std::size_t>(tab[c].corners[lab])].emplace_back(d, static_cast<CubeId>(c), lab);
    }
  }
};

inline Link vertex_link(const CubeComplex& x, CubeId v, const Incidence& inc) {
  if (v < 0 || static_cast<std::size_t>(v) >= x.vertex_count())
    throw Error(ErrorKind::UnknownVertex, "vertex " + std::to_string(v));
  Link link;
  link.vertex = v;
  link.vertices = inc.ends[static_cast<std::size_t>(v)];
  for (auto [d, c, lab] : inc.corners[static_cast<std::size_t>(v)]) {
    std::vector<int> simplex;
    for (int a = 0; a < d; ++a) simplex.push_back(link.index_of(x.edge_at(d, c, lab, a)));
    link.simplices.push_back(std::move(simplex));
    link.origin.emplace_back(d, c, lab);
  }
  return link;
}

inline Link vertex_link(const CubeComplex& x, CubeId v) {
  if (v < 0 || static_cast<std::size_t>(v) >= x.vertex_count())
    throw Error(ErrorKind::UnknownVertex, "vertex " + std::to_string(v));
  return vertex_link(x, v, Incidence(x));
}

/// Gromov link condition at one vertex: simplicial and flag.
inline Certificate check_link(const CubeComplex& x, CubeId v, const Incidence& inc) {
  auto cert = make_certificate("link");
  Link link = vertex_link(x, v, inc);
  std::map<std::vector<int>, std::size_t> seen;
  std::set<std::pair<int, int>> adjacent;
  for (std::size_t k = 0; k < link.simplices.size(); ++k) {
    std::vector<int> sorted = link.simplices[k];
    std::sort(sorted.begin(), sorted.end());
    auto [d, c, lab] = link.origin[k];
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      cert.fail("NonSimplicialLink", {{"vertex", v}, {"dim", d}, {"cube", c}, {"corner", lab}, {"kind", "repeated vertex"}});
      return cert;
    }
    auto [it, fresh] = seen.emplace(sorted, k);
    if (!fresh) {
      auto [d0, c0, lab0] = link.origin[it->second];
      cert.fail("NonSimplicialLink", {{"vertex", v},
                                      {"first", {d0, c0, lab0}},
                                      {"second", {d, c, lab}},
                                      {"kind", "doubled simplex"}});
      return cert;
    }
    if (sorted.size() == 2) adjacent.emplace(sorted[0], sorted[1]);
  }
  // Flag: every clique of size >= 3 spans a simplex.
  int n = static_cast<int>(link.vertices.size());
  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n));
  for (auto [a, b] : adjacent) {
    nbr[static_cast<std::size_t>(a)].push_back(b);
    nbr[static_cast<std::size_t>(b)].push_back(a);
  }
  std::optional<std::vector<int>> missing;
  std::vector<int> clique;
  auto extend = [&](auto&& self, int from) -> void {
    if (missing) return;
    if (clique.size() >= 3 && !seen.count(clique)) {
      missing = clique;
      return;
    }
    for (int w = from; w < n && !missing; ++w) {
      bool ok = std::all_of(clique.begin(), clique.end(), [&](int u) { return adjacent.count({u, w}) > 0; });
      if (!ok) continue;
      clique.push_back(w);
      self(self, w + 1);
      clique.pop_back();
    }
  };
  extend(extend, 0);
  if (missing) {
    nlohmann::ordered_json ends = nlohmann::ordered_json::array();
    for (int i : *missing) ends.push_back({link.vertices[static_cast<std::size_t>(i)].edge, link.vertices[static_cast<std::size_t>(i)].side});
    cert.fail("NonFlagLink", {{"vertex", v}, {"clique", ends}});
  }
  return cert;
}

inline Certificate check_link(const CubeComplex& x, CubeId v) { return check_link(x, v, Incidence(x)); }

/// Full validation: structure, then the link condition at every vertex.
inline Certificate validate_complex(const CubeComplex& x) {
  auto cert = make_certificate("validate");
  cert.add("dim", x.dim());
  for (int d = 0; d <= x.dim(); ++d) cert.add("cubes[" + std::to_string(d) + "]", x.count(d));
  cert.add("euler_characteristic", x.euler_characteristic());
  cert.add("connected", x.connected());
  auto st = check_structure(x);
  if (!st.passed()) {
    cert.fail(st.reason, st.witness);
    return cert;
  }
  Incidence inc(x);
  for (std::size_t v = 0; v < x.vertex_count(); ++v) {
    auto lc = check_link(x, static_cast<CubeId>(v), inc);
    if (!lc.passed()) {
      cert.fail(lc.reason, lc.witness);
      return cert;
    }
  }
  return cert;
}

inline bool is_npc(const CubeComplex& x) { return validate_complex(x).passed(); }

inline void require_npc(const CubeComplex& x, const char* what) {
  auto c = validate_complex(x);
  if (!c.passed()) throw Error(ErrorKind::NotNPC, std::string(what) + ": " + c.reason);
}

// ---------------------------------------------------------------------------
// Constructions

/// Cubical subdivision: each n-cube becomes 2^n n-cubes. New vertices are
/// barycenters of old cubes; vertices keep their ids, then edges, squares...
inline CubeComplex subdivide(const CubeComplex& x) {
  // Per-coordinate pattern inside an old cube: 0 = lower half, 1 = midpoint, 2 = upper half.
  using Key = std::tuple<int, CubeId, std::vector<std::uint8_t>>;
  int top = x.dim();
  std::vector<std::size_t> bary_offset(static_cast<std::size_t>(top + 2), 0);
  for (int d = 0; d <= top; ++d) bary_offset[static_cast<std::size_t>(d + 1)] = bary_offset[static_cast<std::size_t>(d)] + x.count(d);
  auto bary = [&](int d, CubeId c) { return static_cast<CubeId>(bary_offset[static_cast<std::size_t>(d)] + static_cast<std::size_t>(c)); };

  std::vector<std::map<Key, CubeId>> ids(static_cast<std::size_t>(top + 1));
  std::vector<std::vector<Key>> order(static_cast<std::size_t>(top + 1));
  for (int d = 1; d <= top; ++d)
    for (std::size_t c = 0; c < x.count(d); ++c) {
      std::size_t total = 1;
      for (int i = 0; i < d; ++i) total *= 3;
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::uint8_t> pat(static_cast<std::size_t>(d));
        std::size_t rest = code;
        int k = 0;
        for (int i = d - 1; i >= 0; --i) {
          pat[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rest % 3);
          rest /= 3;
        }
        for (auto p : pat) k += p != 1;
        if (k == 0) continue;
        order[static_cast<std::size_t>(k)].emplace_back(d, static_cast<CubeId>(c), pat);
      }
    }
  for (int k = 1; k <= top; ++k) {
    std::sort(order[static_cast<std::size_t>(k)].begin(), order[static_cast<std::size_t>(k)].end());
    for (std::size_t i = 0; i < order[static_cast<std::size_t>(k)].size(); ++i)
      ids[static_cast<std::size_t>(k)][order[static_cast<std::size_t>(k)][i]] = static_cast<CubeId>(i);
  }

  // Point of an old d-cube with coordinates in {0, 1/2, 1} encoded as {0, 1, 2}.
  auto point_vertex = [&](int d, CubeId c, const std::vector<std::uint8_t>& coords) {
    std::vector<std::pair<int, int>> fixed;
    for (int i = 0; i < d; ++i)
      if (coords[static_cast<std::size_t>(i)] != 1) fixed.emplace_back(i, coords[static_cast<std::size_t>(i)] / 2);
    SubCube f = x.descend(d, c, fixed);
    return bary(f.dim, f.id);
  };

  CubeComplex out(bary_offset[static_cast<std::size_t>(top + 1)]);
  for (int k = 1; k <= top; ++k) {
    for (const auto& key : order[static_cast<std::size_t>(k)]) {
      const auto& [d, c, pat] = key;
      std::vector<int> axes;
      for (int i = 0; i < d; ++i)
        if (pat[static_cast<std::size_t>(i)] != 1) axes.push_back(i);
      Cube cube;
      cube.corners.resize(std::size_t{1} << k);
      for (std::uint32_t lab = 0; lab < cube.corners.size(); ++lab) {
        std::vector<std::uint8_t> coords(static_cast<std::size_t>(d), 1);
        for (int t = 0; t < k; ++t) {
          int a = axes[static_cast<std::size_t>(t)];
          int bit = static_cast<int>((lab >> t) & 1u);
          coords[static_cast<std::size_t>(a)] = pat[static_cast<std::size_t>(a)] == 0 ? static_cast<std::uint8_t>(bit) : static_cast<std::uint8_t>(1 + bit);
        }
        cube.corners[lab] = point_vertex(d, c, coords);
      }
      for (int t = 0; t < k; ++t) {
        int a = axes[static_cast<std::size_t>(t)];
        for (int s = 0; s < 2; ++s) {
          int endpoint = pat[static_cast<std::size_t>(a)] == 0 ? (s ? 1 : 0) : (s ? 2 : 1);
          Facet f;
          if (k == 1) {
            std::vector<std::uint8_t> coords(static_cast<std::size_t>(d), 1);
            coords[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>(endpoint);
            f.id = point_vertex(d, c, coords);
          } else if (endpoint == 1) {
            auto q = pat;
            q[static_cast<std::size_t>(a)] = 1;
            f.id = ids[static_cast<std::size_t>(k - 1)].at(Key{d, c, q});
            for (int u = 0; u < k; ++u)
              if (u != t) f.corr.push_back({u, false});
          } else {
            const Facet& g = x.cube(d, c).faces[static_cast<std::size_t>(2 * a + endpoint / 2)];
            std::vector<std::uint8_t> q(g.corr.size());
            for (std::size_t m = 0; m < g.corr.size(); ++m) {
              auto p = pat[static_cast<std::size_t>(g.corr[m].axis)];
              q[m] = g.corr[m].flip && p != 1 ? static_cast<std::uint8_t>(2 - p) : p;
            }
            if (d - 1 == 0) throw Error(ErrorKind::Validation, "subdivide: unreachable");
            f.id = ids[static_cast<std::size_t>(k - 1)].at(Key{d - 1, g.id, q});
            for (std::size_t m = 0; m < g.corr.size(); ++m) {
              if (q[m] == 1) continue;
              int parent_axis = g.corr[m].axis;
              int local = static_cast<int>(std::find(axes.begin(), axes.end(), parent_axis) - axes.begin());
              f.corr.push_back({local, g.corr[m].flip});
            }
          }
          if (cube.faces.size() < static_cast<std::size_t>(2 * k)) cube.faces.resize(static_cast<std::size_t>(2 * k));
          cube.faces[static_cast<std::size_t>(2 * t + s)] = std::move(f);
        }
      }
      out.add_cube(k, std::move(cube));
    }
  }
  return out;
}

/// Product complex A x B; the vertex (a, b) gets id a * |B0| + b and cube
/// coordinates are those of A followed by those of B.
inline CubeComplex product(const CubeComplex& a, const CubeComplex& b) {
  std::size_t nb = b.vertex_count();
  CubeComplex out(a.vertex_count() * nb);
  int top = a.dim() + b.dim();
  // ids[k][(da, ca, cb)]
  std::vector<std::map<std::tuple<int, CubeId, CubeId>, CubeId>> ids(static_cast<std::size_t>(top + 1));
  for (int k = 1; k <= top; ++k) {
    CubeId next = 0;
    for (int da = 0; da <= std::min(k, a.dim()); ++da) {
      int db = k - da;
      if (db > b.dim()) continue;
      for (std::size_t ca = 0; ca < a.count(da); ++ca)
        for (std::size_t cb = 0; cb < b.count(db); ++cb) ids[static_cast<std::size_t>(k)][{da, static_cast<CubeId>(ca), static_cast<CubeId>(cb)}] = next++;
    }
  }
  auto corners_of = [](const CubeComplex& x, int d, CubeId c) {
    return d == 0 ? std::vector<CubeId>{c} : x.cube(d, c).corners;
  };
  for (int k = 1; k <= top; ++k) {
    std::vector<std::pair<CubeId, Cube>> built;
    for (const auto& [key, id] : ids[static_cast<std::size_t>(k)]) {
      auto [da, ca, cb] = key;
      int db = k - da;
      Cube cube;
      auto ka = corners_of(a, da, ca);
      auto kb = corners_of(b, db, cb);
      cube.corners.resize(std::size_t{1} << k);
      for (std::uint32_t lab = 0; lab < cube.corners.size(); ++lab) {
        std::uint32_t la = lab & ((1u << da) - 1u), lb = lab >> da;
        cube.corners[lab] = static_cast<CubeId>(static_cast<std::size_t>(ka[la]) * nb + static_cast<std::size_t>(kb[lb]));
      }
      cube.faces.resize(static_cast<std::size_t>(2 * k));
      for (int i = 0; i < k; ++i)
        for (int s = 0; s < 2; ++s) {
          Facet f;
          if (i < da) {
            const Facet& fa = a.cube(da, ca).faces[static_cast<std::size_t>(2 * i + s)];
            if (k == 1) {
              f.id = static_cast<CubeId>(static_cast<std::size_t>(fa.id) * nb + static_cast<std::size_t>(cb));
            } else {
              f.id = ids[static_cast<std::size_t>(k - 1)].at({da - 1, fa.id, cb});
              f.corr = fa.corr;
              for (int j = 0; j < db; ++j) f.corr.push_back({da + j, false});
            }
          } else {
            const Facet& fb = b.cube(db, cb).faces[static_cast<std::size_t>(2 * (i - da) + s)];
            if (k == 1) {
              f.id = static_cast<CubeId>(static_cast<std::size_t>(ca) * nb + static_cast<std::size_t>(fb.id));
            } else {
              f.id = ids[static_cast<std::size_t>(k - 1)].at({da, ca, fb.id});
              for (int j = 0; j < da; ++j) f.corr.push_back({j, false});
              for (const auto& m : fb.corr) f.corr.push_back({da + m.axis, m.flip});
            }
          }
          cube.faces[static_cast<std::size_t>(2 * i + s)] = std::move(f);
        }
      built.emplace_back(id, std::move(cube));
    }
    std::sort(built.begin(), built.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    for (auto& [id, cube] : built) out.add_cube(k, std::move(cube));
  }
  return out;
}

/// Id in product(a, b) of the cube (da, ca) x (db, cb).
inline CubeId product_cube_id(const CubeComplex& a, const CubeComplex& b, int da, CubeId ca, int db, CubeId cb) {
  int k = da + db;
  if (k == 0) return static_cast<CubeId>(static_cast<std::size_t>(ca) * b.vertex_count() + static_cast<std::size_t>(cb));
  std::size_t offset = 0;
  for (int d = 0; d < da; ++d)
    if (k - d <= b.dim()) offset += a.count(d) * b.count(k - d);
  return static_cast<CubeId>(offset + static_cast<std::size_t>(ca) * b.count(db) + static_cast<std::size_t>(cb));
}

/// Square whose boundary is given by four edges. `bottom`/`top` run along
/// coordinate 0 and `left`/`right` along coordinate 1; each flag says the
/// edge is traversed against its own orientation.
struct SquareSide {
  CubeId edge;
  bool reversed = false;
};

inline CubeId add_square(CubeComplex& x, SquareSide bottom, SquareSide right, SquareSide top, SquareSide left) {
  auto end = [&](SquareSide e, int t) { return x.cube(1, e.edge).corners[static_cast<std::size_t>(t ^ (e.reversed ? 1 : 0))]; };
  Cube sq;
  sq.corners = {end(bottom, 0), end(bottom, 1), end(top, 0), end(top, 1)};
  if (end(left, 0) != sq.corners[0] || end(left, 1) != sq.corners[2] || end(right, 0) != sq.corners[1] ||
      end(right, 1) != sq.corners[3])
    throw Error(ErrorKind::IncompatibleFaces, "square boundary does not close up");
  sq.faces = {Facet{left.edge, {{1, left.reversed}}}, Facet{right.edge, {{1, right.reversed}}},
              Facet{bottom.edge, {{0, bottom.reversed}}}, Facet{top.edge, {{0, top.reversed}}}};
  return x.add_cube(2, std::move(sq));
}

}  // namespace cubecx
