#pragma once

#include "cubecx/complex.hpp"

#include <memory>
#include <unordered_map>

namespace cubecx {

/// Image of a source cube: target id plus where each source coordinate goes.
struct CubeImage {
  CubeId id = 0;
  Frame corr;
  friend bool operator==(const CubeImage&, const CubeImage&) = default;
};

/// Dimension-preserving cubical map. `images[d][c]` is the image of (d, c).
struct CubicalMap {
  std::shared_ptr<const CubeComplex> source;
  std::shared_ptr<const CubeComplex> target;
  std::vector<std::vector<CubeImage>> images;

  CubeId vertex(CubeId v) const { return images[0][static_cast<std::size_t>(v)].id; }
  const CubeImage& image(int d, CubeId c) const {
    return images[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)];
  }
  /// Edge-end of the target hit by a source edge-end.
  EdgeEnd image(EdgeEnd e) const {
    const auto& im = image(1, e.edge);
    return EdgeEnd{im.id, e.side ^ (im.corr[0].flip ? 1 : 0)};
  }
  std::uint32_t image_label(int d, CubeId c, std::uint32_t label) const {
    const auto& im = image(d, c);
    std::uint32_t out = 0;
    for (std::size_t j = 0; j < im.corr.size(); ++j)
      out |= (((label >> j) & 1u) ^ (im.corr[j].flip ? 1u : 0u)) << im.corr[j].axis;
    return out;
  }
};

inline std::shared_ptr<const CubeComplex> share(CubeComplex x) {
  return std::make_shared<const CubeComplex>(std::move(x));
}

inline CubicalMap identity_map(std::shared_ptr<const CubeComplex> x) {
  CubicalMap f;
  f.source = x;
  f.target = x;
  f.images.resize(static_cast<std::size_t>(x->dim() + 1));
  for (int d = 0; d <= x->dim(); ++d)
    for (std::size_t c = 0; c < x->count(d); ++c)
      f.images[static_cast<std::size_t>(d)].push_back({static_cast<CubeId>(c), identity_frame(d)});
  return f;
}

/// g after f.
inline CubicalMap compose(const CubicalMap& g, const CubicalMap& f) {
  if (f.target.get() != g.source.get() && !(*f.target == *g.source))
    throw Error(ErrorKind::TargetMismatch, "compose: target of the first map is not the source of the second");
  CubicalMap h;
  h.source = f.source;
  h.target = g.target;
  h.images.resize(f.images.size());
  for (std::size_t d = 0; d < f.images.size(); ++d)
    for (const auto& im : f.images[d]) {
      const auto& gi = g.images[d][static_cast<std::size_t>(im.id)];
      CubeImage out{gi.id, {}};
      for (const auto& a : im.corr) {
        const auto& b = gi.corr[static_cast<std::size_t>(a.axis)];
        out.corr.push_back({b.axis, a.flip != b.flip});
      }
      h.images[d].push_back(std::move(out));
    }
  return h;
}

/// Checks that corners and facets commute with the map.
inline Certificate validate_map(const CubicalMap& f) {
  auto cert = make_certificate("map");
  const CubeComplex& s = *f.source;
  const CubeComplex& t = *f.target;
  if (f.images.size() < static_cast<std::size_t>(s.dim() + 1)) {
    cert.fail("ValidationError", {{"reason", "missing dimensions"}});
    return cert;
  }
  for (int d = 0; d <= s.dim(); ++d) {
    if (f.images[static_cast<std::size_t>(d)].size() != s.count(d)) {
      cert.fail("ValidationError", {{"reason", "wrong cube count"}, {"dim", d}});
      return cert;
    }
    for (std::size_t c = 0; c < s.count(d); ++c) {
      const auto& im = f.image(d, static_cast<CubeId>(c));
      nlohmann::ordered_json where{{"dim", d}, {"cube", c}};
      if (im.id < 0 || static_cast<std::size_t>(im.id) >= t.count(d) || im.corr.size() != static_cast<std::size_t>(d) ||
          !detail::is_signed_injection(im.corr, d, -1)) {
        cert.fail("ValidationError", where);
        return cert;
      }
      if (d == 0) continue;
      const Cube& sc = s.cube(d, static_cast<CubeId>(c));
      const Cube& tc = t.cube(d, im.id);
      for (std::uint32_t lab = 0; lab < sc.corners.size(); ++lab)
        if (f.vertex(sc.corners[lab]) != tc.corners[f.image_label(d, static_cast<CubeId>(c), lab)]) {
          cert.fail("IncompatibleFaces", where);
          return cert;
        }
      if (d == 1) continue;
      for (int i = 0; i < d; ++i)
        for (int side = 0; side < 2; ++side) {
          const Facet& F = sc.faces[static_cast<std::size_t>(2 * i + side)];
          const auto& fi = f.image(d - 1, F.id);
          const AxisMap& ci = im.corr[static_cast<std::size_t>(i)];
          std::pair<int, int> fix[1] = {{ci.axis, side ^ (ci.flip ? 1 : 0)}};
          SubCube sub = t.descend(d, im.id, fix);
          bool ok = sub.id == fi.id;
          for (std::size_t j = 0; ok && j < F.corr.size(); ++j) {
            const AxisMap& via_c = im.corr[static_cast<std::size_t>(F.corr[j].axis)];
            AxisMap a{via_c.axis, via_c.flip != F.corr[j].flip};
            const AxisMap& k = sub.frame[static_cast<std::size_t>(fi.corr[j].axis)];
            AxisMap b{k.axis, k.flip != fi.corr[j].flip};
            ok = a == b;
          }
          if (!ok) {
            cert.fail("IncompatibleFaces", where);
            return cert;
          }
        }
    }
  }
  return cert;
}

/// Link edges at every target vertex, as sorted edge-end pairs.
class LinkEdgeIndex {
 public:
  explicit LinkEdgeIndex(const CubeComplex& x) : edges_(x.vertex_count()) {
    for (std::size_t c = 0; c < x.count(2); ++c)
      for (std::uint32_t lab = 0; lab < 4; ++lab) {
        EdgeEnd a = x.edge_at(2, static_cast<CubeId>(c), lab, 0);
        EdgeEnd b = x.edge_at(2, static_cast<CubeId>(c), lab, 1);
        if (b < a) std::swap(a, b);
        edges_[static_cast<std::size_t>(x.cube(2, static_cast<CubeId>(c)).corners[lab])].emplace(a, b);
      }
  }
  bool adjacent(CubeId v, EdgeEnd a, EdgeEnd b) const {
    if (b < a) std::swap(a, b);
    return edges_[static_cast<std::size_t>(v)].count({a, b}) > 0;
  }
  const std::set<std::pair<EdgeEnd, EdgeEnd>>& at(CubeId v) const { return edges_[static_cast<std::size_t>(v)]; }

 private:
  std::vector<std::set<std::pair<EdgeEnd, EdgeEnd>>> edges_;
};

/// Local isometry: injective link maps and no missing squares.
inline Certificate check_local_isometry(const CubicalMap& f) {
  auto cert = make_certificate("local_isometry");
  auto v = validate_map(f);
  if (!v.passed()) {
    cert.fail("NotACubicalMap: " + v.reason, v.witness);
    return cert;
  }
  const CubeComplex& s = *f.source;
  const CubeComplex& t = *f.target;
  auto ends = s.edge_ends();
  LinkEdgeIndex src(s), tgt(t);
  for (std::size_t x = 0; x < s.vertex_count(); ++x) {
    const auto& at = ends[x];
    std::map<EdgeEnd, EdgeEnd> seen;
    for (const auto& e : at) {
      EdgeEnd im = f.image(e);
      auto [it, fresh] = seen.emplace(im, e);
      if (!fresh) {
        cert.fail("LinkNotInjective", {{"vertex", x},
                                       {"edges", {{it->second.edge, it->second.side}, {e.edge, e.side}}},
                                       {"image", {im.edge, im.side}}});
        return cert;
      }
    }
    CubeId fx = f.vertex(static_cast<CubeId>(x));
    for (std::size_t i = 0; i < at.size(); ++i)
      for (std::size_t j = i + 1; j < at.size(); ++j)
        if (tgt.adjacent(fx, f.image(at[i]), f.image(at[j])) && !src.adjacent(static_cast<CubeId>(x), at[i], at[j])) {
          cert.fail("MissingSquare", {{"vertex", x},
                                      {"edges", {{at[i].edge, at[i].side}, {at[j].edge, at[j].side}}}});
          return cert;
        }
  }
  return cert;
}

inline void require_local_isometry(const CubicalMap& f, const char* what) {
  auto c = check_local_isometry(f);
  if (!c.passed()) throw Error(ErrorKind::NotLocalIsometry, std::string(what) + ": " + c.reason);
}

/// Builds a map of graphs from vertex images and edge images given as
/// (target edge, reversed).
inline CubicalMap graph_map(std::shared_ptr<const CubeComplex> source, std::shared_ptr<const CubeComplex> target,
                            const std::vector<CubeId>& vertex_images,
                            const std::vector<std::pair<CubeId, bool>>& edge_images) {
  CubicalMap f;
  f.source = std::move(source);
  f.target = std::move(target);
  f.images.resize(2);
  for (CubeId v : vertex_images) f.images[0].push_back({v, {}});
  for (auto [e, rev] : edge_images) f.images[1].push_back({e, {{0, rev}}});
  return f;
}

}  // namespace cubecx
