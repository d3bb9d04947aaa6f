#pragma once

#include "cubecx/development.hpp"

#include <map>

namespace cubecx {

struct FiberComponent {
  int id = 0;
  Subcomplex cells;
  /// Least (left, right) vertex pair; components are ordered by it.
  std::pair<CubeId, CubeId> least;
  bool diagonal = false;
  /// A lone vertex pair with no common edge.
  bool point() const { return cells.count(0) == 1 && cells.count(1) == 0; }
};

/// Y x_X Z: cubes are pairs of cubes with the same image, in the left cube's frame.
struct FiberProduct {
  std::shared_ptr<const CubeComplex> complex;
  CubicalMap left;
  CubicalMap right;
  std::vector<std::vector<std::pair<CubeId, CubeId>>> pairs;
  std::vector<FiberComponent> components;
  bool same_factor = false;

  std::size_t total_cells() const { return complex->total_cells(); }
  int nonpoint_count() const {
    int n = 0;
    for (const auto& c : components) n += c.point() ? 0 : 1;
    return n;
  }
  int diagonal_count() const {
    int n = 0;
    for (const auto& c : components) n += c.diagonal ? 1 : 0;
    return n;
  }
};

inline bool same_map(const CubicalMap& f, const CubicalMap& g) {
  if (f.source.get() != g.source.get() && !(*f.source == *g.source)) return false;
  if (f.target.get() != g.target.get() && !(*f.target == *g.target)) return false;
  return f.images == g.images;
}

namespace detail {

/// Source axis j of `a` lands on the same target axis as axis frame[j] of `b`.
inline Frame relative_frame(const Frame& a, const Frame& b) {
  Frame out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (b[k].axis == a[j].axis) out[j] = {static_cast<int>(k), a[j].flip != b[k].flip};
  return out;
}

inline std::uint32_t apply_frame(const Frame& fr, std::uint32_t label) {
  std::uint32_t out = 0;
  for (std::size_t j = 0; j < fr.size(); ++j)
    out |= (((label >> j) & 1u) ^ (fr[j].flip ? 1u : 0u)) << fr[j].axis;
  return out;
}

inline std::vector<FiberComponent> components_of(const CubeComplex& x,
                                                 const std::vector<std::vector<std::pair<CubeId, CubeId>>>& pairs) {
  int n = 0;
  auto comp = x.vertex_components(&n);
  // renumber by least vertex
  std::vector<int> order(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (std::size_t v = 0; v < comp.size(); ++v) {
    auto& o = order[static_cast<std::size_t>(comp[v])];
    if (o < 0) o = next++;
  }
  std::vector<FiberComponent> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)].id = k;
    out[static_cast<std::size_t>(k)].cells.cells.resize(static_cast<std::size_t>(std::max(x.dim(), 0) + 1));
  }
  for (std::size_t v = 0; v < comp.size(); ++v) {
    auto& c = out[static_cast<std::size_t>(order[static_cast<std::size_t>(comp[v])])];
    if (c.cells.cells[0].empty()) c.least = pairs[0][v];
    c.cells.cells[0].push_back(static_cast<CubeId>(v));
  }
  for (int d = 1; d <= x.dim(); ++d)
    for (std::size_t c = 0; c < x.count(d); ++c) {
      auto v = static_cast<std::size_t>(x.cube(d, static_cast<CubeId>(c)).corners[0]);
      out[static_cast<std::size_t>(order[static_cast<std::size_t>(comp[v])])].cells.cells[static_cast<std::size_t>(d)].push_back(
          static_cast<CubeId>(c));
    }
  return out;
}

}  // namespace detail

inline FiberProduct fiber_product(const CubicalMap& f, const CubicalMap& g) {
  if (f.target.get() != g.target.get() && !(*f.target == *g.target))
    throw Error(ErrorKind::TargetMismatch, "fiber product: maps have different targets");
  const CubeComplex& y = *f.source;
  const CubeComplex& z = *g.source;
  const CubeComplex& x = *f.target;
  int top = std::min(y.dim(), z.dim());
  // preimages under g of each target cube
  std::vector<std::vector<std::vector<CubeId>>> pre(static_cast<std::size_t>(top + 1));
  for (int d = 0; d <= top; ++d) {
    pre[static_cast<std::size_t>(d)].resize(x.count(d));
    for (std::size_t c = 0; c < z.count(d); ++c)
      pre[static_cast<std::size_t>(d)][static_cast<std::size_t>(g.image(d, static_cast<CubeId>(c)).id)].push_back(static_cast<CubeId>(c));
  }
  FiberProduct fp;
  fp.same_factor = same_map(f, g);
  CubeComplex out;
  fp.pairs.resize(static_cast<std::size_t>(top + 1));
  std::vector<std::map<std::pair<CubeId, CubeId>, CubeId>> index(static_cast<std::size_t>(top + 1));
  fp.left.images.resize(static_cast<std::size_t>(top + 1));
  fp.right.images.resize(static_cast<std::size_t>(top + 1));
  for (int d = 0; d <= top; ++d) {
    auto& pairs = fp.pairs[static_cast<std::size_t>(d)];
    for (std::size_t c = 0; c < y.count(d); ++c) {
      const auto& imf = f.image(d, static_cast<CubeId>(c));
      for (CubeId c2 : pre[static_cast<std::size_t>(d)][static_cast<std::size_t>(imf.id)]) {
        Frame rel = d == 0 ? Frame{} : detail::relative_frame(imf.corr, g.image(d, c2).corr);
        CubeId id = static_cast<CubeId>(pairs.size());
        if (d == 0) {
          out.add_vertex();
        } else {
          const Cube& a = y.cube(d, static_cast<CubeId>(c));
          const Cube& b = z.cube(d, c2);
          Cube cube;
          cube.corners.resize(a.corners.size());
          for (std::uint32_t lab = 0; lab < a.corners.size(); ++lab)
            cube.corners[lab] = index[0].at({a.corners[lab], b.corners[detail::apply_frame(rel, lab)]});
          cube.faces.resize(a.faces.size());
          for (int i = 0; i < d; ++i)
            for (int s = 0; s < 2; ++s) {
              const Facet& fa = a.faces[static_cast<std::size_t>(2 * i + s)];
              const auto& r = rel[static_cast<std::size_t>(i)];
              const Facet& fb = b.faces[static_cast<std::size_t>(2 * r.axis + (s ^ (r.flip ? 1 : 0)))];
              auto it = index[static_cast<std::size_t>(d - 1)].find({fa.id, fb.id});
              if (it == index[static_cast<std::size_t>(d - 1)].end())
                throw Error(ErrorKind::Validation, "fiber product: facets of a matched pair do not match");
              cube.faces[static_cast<std::size_t>(2 * i + s)] = Facet{it->second, fa.corr};
            }
          out.add_cube(d, std::move(cube));
        }
        index[static_cast<std::size_t>(d)][{static_cast<CubeId>(c), c2}] = id;
        pairs.emplace_back(static_cast<CubeId>(c), c2);
        fp.left.images[static_cast<std::size_t>(d)].push_back({static_cast<CubeId>(c), identity_frame(d)});
        fp.right.images[static_cast<std::size_t>(d)].push_back({c2, std::move(rel)});
      }
    }
  }
  // trim empty top dimensions so dim() is honest
  while (fp.left.images.size() > 1 && fp.left.images.back().empty()) {
    fp.left.images.pop_back();
    fp.right.images.pop_back();
    fp.pairs.pop_back();
  }
  fp.complex = share(std::move(out));
  fp.left.source = fp.right.source = fp.complex;
  fp.left.target = f.source;
  fp.right.target = g.source;
  fp.components = detail::components_of(*fp.complex, fp.pairs);
  if (fp.same_factor)
    for (auto& c : fp.components)
      for (CubeId v : c.cells.vertices())
        if (fp.pairs[0][static_cast<std::size_t>(v)].first == fp.pairs[0][static_cast<std::size_t>(v)].second) {
          c.diagonal = true;
          break;
        }
  return fp;
}

/// A component as a standalone complex with its two projections.
struct ComponentView {
  std::shared_ptr<const CubeComplex> complex;
  CubicalMap left;
  CubicalMap right;
  std::vector<std::vector<CubeId>> origin;
};

inline ComponentView component_view(const FiberProduct& fp, int k) {
  if (k < 0 || k >= static_cast<int>(fp.components.size()))
    throw Error(ErrorKind::Validation, "no fiber component " + std::to_string(k));
  auto ex = extract(*fp.complex, fp.components[static_cast<std::size_t>(k)].cells);
  ComponentView cv;
  cv.complex = share(std::move(ex.complex));
  cv.origin = std::move(ex.origin);
  auto restrict = [&](const CubicalMap& m) {
    CubicalMap r;
    r.source = cv.complex;
    r.target = m.target;
    r.images.resize(cv.origin.size());
    for (std::size_t d = 0; d < cv.origin.size(); ++d)
      for (CubeId c : cv.origin[d]) r.images[d].push_back(m.images[d][static_cast<std::size_t>(c)]);
    return r;
  };
  cv.left = restrict(fp.left);
  cv.right = restrict(fp.right);
  return cv;
}

enum class Verdict { contractible, essential, inconclusive };

struct ComponentMetrics {
  int component = 0;
  Verdict verdict = Verdict::inconclusive;
  int diameter = 0;
  int bound = 0;
  CubeId witness_vertex = -1;
  std::vector<EdgeEnd> witness;

  std::string str() const {
    switch (verdict) {
      case Verdict::contractible:
        return "Contractible(" + std::to_string(diameter) + ")";
      case Verdict::essential:
        return "Essential";
      default:
        return "Inconclusive(" + std::to_string(bound) + ")";
    }
  }
};

/// Contractible, essential or undecided within the guard, for a connected complex.
inline ComponentMetrics complex_metrics(std::shared_ptr<const CubeComplex> c, int guard = kDefaultGuard) {
  ComponentMetrics m;
  m.bound = guard;
  if (c->vertex_count() == 0) {
    m.verdict = Verdict::contractible;
    return m;
  }
  if (c->dim() <= 1) {
    if (c->count(1) + 1 == c->vertex_count()) {
      m.verdict = Verdict::contractible;
      m.diameter = diameter(*c);
    } else {
      auto s = detail::graph_systole(*c, static_cast<int>(c->count(1)) + 1);
      m.verdict = Verdict::essential;
      m.witness_vertex = s.vertex;
      m.witness = std::move(s.witness);
    }
    return m;
  }
  if (!is_npc(*c)) return m;
  std::vector<CubeId> first(c->vertex_count(), -1);
  CubeId again = -1, earlier = -1;
  detail::Developer dev(*c);
  auto ball = dev.grow(
      c, 0, guard,
      [&](const DevelopedBall& b, CubeId w) {
        auto& slot = first[static_cast<std::size_t>(b.proj(w))];
        if (slot < 0) {
          slot = w;
          return false;
        }
        earlier = slot;
        again = w;
        return true;
      },
      false);
  if (again >= 0) {
    m.verdict = Verdict::essential;
    m.witness_vertex = 0;
    auto p = ball.path_from_root(earlier), q = ball.path_from_root(again);
    m.witness = p;
    for (auto it = q.rbegin(); it != q.rend(); ++it) m.witness.push_back({it->edge, 1 - it->side});
  } else if (ball.complete) {
    m.verdict = Verdict::contractible;
    m.diameter = diameter(*c);
  }
  return m;
}

inline ComponentMetrics component_metrics(const FiberProduct& fp, int k, int guard = kDefaultGuard) {
  auto cv = component_view(fp, k);
  auto m = complex_metrics(cv.complex, guard);
  m.component = k;
  return m;
}

namespace detail {

/// Cells of the source complex hit exactly once, for a map restricted to a component.
inline bool bijective_onto(const CubicalMap& m, const CubeComplex& target, const Subcomplex& onto) {
  for (std::size_t d = 0; d < m.images.size(); ++d) {
    if (m.images[d].size() != onto.count(static_cast<int>(d))) return false;
    std::set<CubeId> seen;
    for (const auto& im : m.images[d]) {
      if (!onto.contains(static_cast<int>(d), im.id) || !seen.insert(im.id).second) return false;
    }
  }
  for (int d = static_cast<int>(m.images.size()); d <= target.dim(); ++d)
    if (onto.count(d) != 0) return false;
  return true;
}

inline Subcomplex component_cells(const CubeComplex& y, const std::vector<int>& comp, int k) {
  Subcomplex s;
  s.cells.resize(static_cast<std::size_t>(std::max(y.dim(), 0) + 1));
  for (std::size_t v = 0; v < comp.size(); ++v)
    if (comp[v] == k) s.cells[0].push_back(static_cast<CubeId>(v));
  for (int d = 1; d <= y.dim(); ++d)
    for (std::size_t c = 0; c < y.count(d); ++c)
      if (comp[static_cast<std::size_t>(y.cube(d, static_cast<CubeId>(c)).corners[0])] == k)
        s.cells[static_cast<std::size_t>(d)].push_back(static_cast<CubeId>(c));
  return s;
}

}  // namespace detail

/// Indices of fiber components of f x f that are graphs of automorphisms over X,
/// grouped by the Y-component they start from, with the component they land on.
struct GraphComponents {
  std::vector<std::vector<std::pair<int, int>>> from;  // [y component] -> (fiber component, y component)
  std::vector<int> y_component;
  int y_components = 0;
};

inline GraphComponents graph_components(const FiberProduct& fp) {
  const CubeComplex& y = *fp.left.target;
  GraphComponents gc;
  gc.y_component = y.vertex_components(&gc.y_components);
  std::vector<Subcomplex> ycells;
  for (int k = 0; k < gc.y_components; ++k) ycells.push_back(detail::component_cells(y, gc.y_component, k));
  gc.from.resize(static_cast<std::size_t>(gc.y_components));
  for (std::size_t k = 0; k < fp.components.size(); ++k) {
    const auto& comp = fp.components[k];
    auto cv = component_view(fp, static_cast<int>(k));
    int yl = gc.y_component[static_cast<std::size_t>(comp.least.first)];
    int yr = gc.y_component[static_cast<std::size_t>(comp.least.second)];
    if (detail::bijective_onto(cv.left, y, ycells[static_cast<std::size_t>(yl)]) &&
        detail::bijective_onto(cv.right, y, ycells[static_cast<std::size_t>(yr)]))
      gc.from[static_cast<std::size_t>(yl)].emplace_back(static_cast<int>(k), yr);
  }
  return gc;
}

/// Automorphisms psi of Y with f psi = f. Identity first, then ordered by vertex images.
inline std::vector<CubicalMap> aut_over_x(const CubicalMap& f) {
  auto fp = fiber_product(f, f);
  auto gc = graph_components(fp);
  const CubeComplex& y = *f.source;
  std::vector<CubicalMap> out;
  std::vector<int> choice(static_cast<std::size_t>(gc.y_components), -1);
  std::vector<char> used(static_cast<std::size_t>(gc.y_components), 0);
  std::function<void(int)> go = [&](int i) {
    if (i == gc.y_components) {
      CubicalMap psi;
      psi.source = psi.target = f.source;
      psi.images.resize(static_cast<std::size_t>(y.dim() + 1));
      for (int d = 0; d <= y.dim(); ++d) psi.images[static_cast<std::size_t>(d)].resize(y.count(d));
      for (int k : choice)
        for (std::size_t d = 0; d < fp.pairs.size(); ++d)
          for (CubeId c : fp.components[static_cast<std::size_t>(k)].cells.cells[d]) {
            auto [a, b] = fp.pairs[d][static_cast<std::size_t>(c)];
            psi.images[d][static_cast<std::size_t>(a)] = fp.right.images[d][static_cast<std::size_t>(c)];
          }
      out.push_back(std::move(psi));
      return;
    }
    for (auto [k, to] : gc.from[static_cast<std::size_t>(i)]) {
      if (used[static_cast<std::size_t>(to)]) continue;
      used[static_cast<std::size_t>(to)] = 1;
      choice[static_cast<std::size_t>(i)] = k;
      go(i + 1);
      used[static_cast<std::size_t>(to)] = 0;
    }
  };
  go(0);
  auto id = identity_map(f.source);
  auto key = [](const CubicalMap& m) {
    std::vector<CubeId> k;
    for (const auto& im : m.images[0]) k.push_back(im.id);
    return k;
  };
  std::stable_sort(out.begin(), out.end(), [&](const CubicalMap& a, const CubicalMap& b) {
    bool ia = a.images == id.images, ib = b.images == id.images;
    if (ia != ib) return ia;
    return key(a) < key(b);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Presentations

/// <X | Y_1, ..., Y_n>: relators are local isometries of compact connected complexes.
struct CubicalPresentation {
  std::shared_ptr<const CubeComplex> base;
  std::vector<CubicalMap> relators;
};

/// Relator of an induced presentation with the square it came from.
struct InducedRelator {
  int relator = 0;    // index of Y_i
  int component = 0;  // component of E x_X Y_i
  CubicalMap to_relator;
};

struct InducedPresentation {
  CubicalPresentation presentation;
  std::vector<InducedRelator> origin;
};

/// E* = <E | components of E x_X Y_i>, each mapped to E by its left projection.
inline InducedPresentation induced_presentation(const CubicalMap& e, const CubicalPresentation& pres) {
  if (e.target.get() != pres.base.get() && !(*e.target == *pres.base))
    throw Error(ErrorKind::TargetMismatch, "induced presentation: map does not land in the presentation complex");
  InducedPresentation out;
  out.presentation.base = e.source;
  for (std::size_t i = 0; i < pres.relators.size(); ++i) {
    auto fp = fiber_product(e, pres.relators[i]);
    for (std::size_t k = 0; k < fp.components.size(); ++k) {
      auto cv = component_view(fp, static_cast<int>(k));
      out.presentation.relators.push_back(std::move(cv.left));
      out.origin.push_back({static_cast<int>(i), static_cast<int>(k), std::move(cv.right)});
    }
  }
  return out;
}

}  // namespace cubecx
