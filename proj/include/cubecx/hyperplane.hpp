#pragma once

#include "cubecx/complex.hpp"

#include <cstdint>
#include <vector>

namespace cubecx {

enum class Tri { yes, no, unknown };

inline std::string_view to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::unknown: return "unknown";
  }
  return "?";
}

/// Union-find carrying the parity of each element relative to its root.
class ParityUnionFind {
 public:
  explicit ParityUnionFind(std::size_t n) : parent_(n), parity_(n, 0), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::pair<int, int> find(int x) {
    int p = 0;
    int r = x;
    while (parent_[static_cast<std::size_t>(r)] != r) {
      p ^= parity_[static_cast<std::size_t>(r)];
      r = parent_[static_cast<std::size_t>(r)];
    }
    // path compression
    int cur = x, cur_p = p;
    while (parent_[static_cast<std::size_t>(cur)] != r) {
      int next = parent_[static_cast<std::size_t>(cur)];
      int next_p = cur_p ^ parity_[static_cast<std::size_t>(cur)];
      parent_[static_cast<std::size_t>(cur)] = r;
      parity_[static_cast<std::size_t>(cur)] = static_cast<std::uint8_t>(cur_p);
      cur = next;
      cur_p = next_p;
    }
    return {r, p};
  }
  /// Returns false when the requested parity contradicts an earlier one.
  bool unite(int a, int b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == rel;
    if (rank_[static_cast<std::size_t>(ra)] < rank_[static_cast<std::size_t>(rb)]) std::swap(ra, rb);
    parent_[static_cast<std::size_t>(rb)] = ra;
    parity_[static_cast<std::size_t>(rb)] = static_cast<std::uint8_t>(pa ^ pb ^ rel);
    if (rank_[static_cast<std::size_t>(ra)] == rank_[static_cast<std::size_t>(rb)]) ++rank_[static_cast<std::size_t>(ra)];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<std::uint8_t> parity_;
  std::vector<int> rank_;
};

/// Parallelism classes of edges. `parity[e]` orients e against its class
/// (meaningful only for two-sided classes).
struct EdgeClasses {
  std::vector<int> of_edge;
  std::vector<std::uint8_t> parity;
  std::vector<std::vector<CubeId>> members;
  std::vector<char> consistent;
  std::size_t size() const { return members.size(); }
};

inline EdgeClasses edge_classes(const CubeComplex& x) {
  std::size_t ne = x.count(1);
  ParityUnionFind uf(ne);
  std::vector<std::pair<int, int>> conflicts;
  for (int d = 2; d <= x.dim(); ++d) {
    for (std::size_t c = 0; c < x.count(d); ++c) {
      for (int i = 0; i < d; ++i) {
        EdgeEnd first{};
        bool have = false;
        for (std::uint32_t lab = 0; lab < (1u << d); ++lab) {
          if ((lab >> i) & 1u) continue;
          EdgeEnd e = x.edge_at(d, static_cast<CubeId>(c), lab, i);
          if (!have) {
            first = e;
            have = true;
          } else if (!uf.unite(first.edge, e.edge, first.side ^ e.side)) {
            conflicts.emplace_back(first.edge, e.edge);
          }
        }
      }
    }
  }
  EdgeClasses out;
  out.of_edge.assign(ne, -1);
  out.parity.assign(ne, 0);
  std::vector<int> root_class(ne, -1);
  for (std::size_t e = 0; e < ne; ++e) {
    auto [r, p] = uf.find(static_cast<int>(e));
    if (root_class[static_cast<std::size_t>(r)] < 0) {
      root_class[static_cast<std::size_t>(r)] = static_cast<int>(out.members.size());
      out.members.emplace_back();
      out.consistent.push_back(1);
    }
    int k = root_class[static_cast<std::size_t>(r)];
    out.of_edge[e] = k;
    out.members[static_cast<std::size_t>(k)].push_back(static_cast<CubeId>(e));
    out.parity[e] = static_cast<std::uint8_t>(p);
  }
  for (auto [a, b] : conflicts) out.consistent[static_cast<std::size_t>(out.of_edge[static_cast<std::size_t>(a)])] = 0;
  // Classes are numbered by their least edge, since edges were scanned in order.
  return out;
}

/// A dual cube of a hyperplane: cube (dim, id) crossed along coordinate `axis`.
struct DualCube {
  int dim = 0;
  CubeId id = 0;
  int axis = 0;
  friend auto operator<=>(const DualCube&, const DualCube&) = default;
};

struct Hyperplane {
  int id = 0;
  std::vector<CubeId> edges;
  std::vector<DualCube> dual;
  /// Vertex k of the midcube complex is the midpoint of edges[k]; cubes of
  /// dimension n-1 follow `dual` order restricted to dimension n.
  CubeComplex midcubes;
  Subcomplex carrier;
  bool embedded = true;
  bool two_sided = true;
  Tri contractible = Tri::unknown;
};

namespace detail {

/// Greedy elementary collapses. Returns yes when the complex collapses to a
/// point, unknown when stuck or over budget.
inline Tri collapse_to_point(const CubeComplex& m, std::size_t budget) {
  int top = m.dim();
  // cofaces[d][c] counts (with multiplicity) the (d+1)-cubes having (d, c) as a facet.
  std::vector<std::vector<int>> cofaces(static_cast<std::size_t>(top + 1));
  std::vector<std::vector<char>> alive(static_cast<std::size_t>(top + 1));
  for (int d = 0; d <= top; ++d) {
    cofaces[static_cast<std::size_t>(d)].assign(m.count(d), 0);
    alive[static_cast<std::size_t>(d)].assign(m.count(d), 1);
  }
  for (int d = 1; d <= top; ++d)
    for (const auto& c : m.cubes(d))
      for (const auto& f : c.faces) ++cofaces[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(f.id)];
  std::size_t remaining = m.total_cells();
  std::size_t steps = 0;
  bool progress = true;
  while (progress && remaining > 1) {
    progress = false;
    for (int d = top - 1; d >= 0 && !progress; --d) {
      for (std::size_t c = 0; c < m.count(d) && !progress; ++c) {
        if (!alive[static_cast<std::size_t>(d)][c] || cofaces[static_cast<std::size_t>(d)][c] != 1) continue;
        if (++steps > budget) return Tri::unknown;
        // Find the unique live coface.
        const auto& up = m.cubes(d + 1);
        for (std::size_t k = 0; k < up.size(); ++k) {
          if (!alive[static_cast<std::size_t>(d + 1)][k]) continue;
          bool has = std::any_of(up[k].faces.begin(), up[k].faces.end(),
                                 [&](const Facet& f) { return f.id == static_cast<CubeId>(c); });
          if (!has) continue;
          // c must not also be a face of a cube above k.
          if (cofaces[static_cast<std::size_t>(d + 1)][k] != 0) break;
          alive[static_cast<std::size_t>(d + 1)][k] = 0;
          alive[static_cast<std::size_t>(d)][c] = 0;
          for (const auto& f : up[k].faces) --cofaces[static_cast<std::size_t>(d)][static_cast<std::size_t>(f.id)];
          if (d >= 1)
            for (const auto& f : m.cube(d, static_cast<CubeId>(c)).faces)
              --cofaces[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(f.id)];
          remaining -= 2;
          progress = true;
          break;
        }
      }
    }
  }
  return remaining == 1 ? Tri::yes : Tri::unknown;
}

}  // namespace detail

inline Tri contractibility(const CubeComplex& m, std::size_t budget = 100000) {
  if (m.vertex_count() == 0 || !m.connected()) return Tri::no;
  if (m.dim() <= 1) return m.euler_characteristic() == 1 ? Tri::yes : Tri::no;
  if (m.euler_characteristic() != 1) return Tri::no;
  return detail::collapse_to_point(m, budget);
}

/// Midcube complex of one class: vertices are the class edges, one
/// (n-1)-cube per dual n-cube.
inline CubeComplex midcube_complex(const CubeComplex& x, const EdgeClasses& cls, int k,
                                   std::vector<DualCube>& dual_out) {
  const auto& edges = cls.members[static_cast<std::size_t>(k)];
  std::map<CubeId, CubeId> vid;
  for (std::size_t i = 0; i < edges.size(); ++i) vid[edges[i]] = static_cast<CubeId>(i);
  CubeComplex m(edges.size());
  dual_out.clear();
  for (CubeId e : edges) dual_out.push_back({1, e, 0});
  std::map<std::tuple<int, CubeId, int>, CubeId> mid_id;
  for (int d = 2; d <= x.dim(); ++d) {
    for (std::size_t c = 0; c < x.count(d); ++c)
      for (int i = 0; i < d; ++i) {
        EdgeEnd e = x.edge_at(d, static_cast<CubeId>(c), 0, i);
        if (cls.of_edge[static_cast<std::size_t>(e.edge)] != k) continue;
        mid_id[{d, static_cast<CubeId>(c), i}] = static_cast<CubeId>(m.count(d - 1));
        dual_out.push_back({d, static_cast<CubeId>(c), i});
        Cube mc;
        int n = d - 1;
        std::vector<int> axes;
        for (int a = 0; a < d; ++a)
          if (a != i) axes.push_back(a);
        mc.corners.resize(std::size_t{1} << n);
        for (std::uint32_t lab = 0; lab < mc.corners.size(); ++lab) {
          std::uint32_t parent = 0;
          for (int t = 0; t < n; ++t) parent |= ((lab >> t) & 1u) << axes[static_cast<std::size_t>(t)];
          mc.corners[lab] = vid.at(x.edge_at(d, static_cast<CubeId>(c), parent, i).edge);
        }
        mc.faces.resize(static_cast<std::size_t>(2 * n));
        for (int t = 0; t < n; ++t)
          for (int s = 0; s < 2; ++s) {
            int a = axes[static_cast<std::size_t>(t)];
            const Facet& g = x.cube(d, static_cast<CubeId>(c)).faces[static_cast<std::size_t>(2 * a + s)];
            Facet f;
            if (d == 2) {
              f.id = vid.at(g.id);
            } else {
              int j = -1;
              for (std::size_t q = 0; q < g.corr.size(); ++q)
                if (g.corr[q].axis == i) j = static_cast<int>(q);
              f.id = mid_id.at({d - 1, g.id, j});
              for (std::size_t q = 0; q < g.corr.size(); ++q) {
                if (static_cast<int>(q) == j) continue;
                int b = g.corr[q].axis;
                int local = static_cast<int>(std::find(axes.begin(), axes.end(), b) - axes.begin());
                f.corr.push_back({local, g.corr[q].flip});
              }
            }
            mc.faces[static_cast<std::size_t>(2 * t + s)] = std::move(f);
          }
        m.add_cube(d - 1, std::move(mc));
      }
  }
  return m;
}

/// All hyperplanes, numbered by least edge.
inline std::vector<Hyperplane> hyperplanes(const CubeComplex& x, std::size_t collapse_budget = 100000) {
  EdgeClasses cls = edge_classes(x);
  std::vector<Hyperplane> out(cls.size());
  for (std::size_t k = 0; k < cls.size(); ++k) {
    Hyperplane& h = out[k];
    h.id = static_cast<int>(k);
    h.edges = cls.members[k];
    h.two_sided = cls.consistent[k] != 0;
    h.midcubes = midcube_complex(x, cls, static_cast<int>(k), h.dual);
    std::set<std::pair<int, CubeId>> seen;
    Subcomplex dual_cells;
    dual_cells.cells.resize(static_cast<std::size_t>(x.dim() + 1));
    for (const auto& dc : h.dual) {
      if (!seen.emplace(dc.dim, dc.id).second) h.embedded = false;
      dual_cells.cells[static_cast<std::size_t>(dc.dim)].push_back(dc.id);
    }
    h.carrier = face_closure(x, std::move(dual_cells));
    h.contractible = contractibility(h.midcubes, collapse_budget);
  }
  return out;
}

/// Pass iff every hyperplane is contractible; reports rank = 1 - chi.
inline Certificate pseudograph_certificate(const CubeComplex& x) {
  if (!x.connected()) throw Error(ErrorKind::NotConnected, "pseudograph certificate needs a connected complex");
  auto cert = make_certificate("pseudograph");
  cert.add("euler_characteristic", x.euler_characteristic());
  cert.add("rank", 1 - x.euler_characteristic());
  auto hs = hyperplanes(x);
  cert.add("hyperplanes", hs.size());
  for (const auto& h : hs) {
    if (h.contractible == Tri::no) {
      cert.fail("NonContractibleHyperplane",
                {{"hyperplane", h.id},
                 {"edges", h.edges},
                 {"midcube_euler_characteristic", h.midcubes.euler_characteristic()}});
      return cert;
    }
  }
  for (const auto& h : hs)
    if (h.contractible == Tri::unknown) {
      cert.inconclusive("collapse budget exhausted on hyperplane " + std::to_string(h.id));
      break;
    }
  return cert;
}

}  // namespace cubecx
