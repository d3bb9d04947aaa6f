// Independent brute-force oracles used by the test suite. Nothing here calls
// the library's face-descent or link code.
#pragma once

#include "cubecx/complex.hpp"
#include "cubecx/development.hpp"
#include "cubecx/dual.hpp"
#include "cubecx/freegroup.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using cubecx::CubeComplex;
using cubecx::CubeId;

/// Every face of a cube, described by the set of parent corner labels it covers.
struct FaceRef {
  int dim;
  CubeId id;
  std::vector<std::uint32_t> to_parent;  // face label -> parent label
};

inline std::vector<FaceRef> all_faces(const CubeComplex& x, int d, CubeId c) {
  std::vector<FaceRef> out;
  std::vector<std::uint32_t> ident(std::size_t{1} << d);
  std::iota(ident.begin(), ident.end(), 0u);
  std::vector<FaceRef> stack{{d, c, ident}};
  while (!stack.empty()) {
    FaceRef f = stack.back();
    stack.pop_back();
    out.push_back(f);
    if (f.dim == 0) continue;
    if (f.dim == 1) {
      const auto& e = x.cube(1, f.id);
      for (int s = 0; s < 2; ++s) stack.push_back({0, e.corners[static_cast<std::size_t>(s)], {f.to_parent[static_cast<std::size_t>(s)]}});
      continue;
    }
    const auto& cube = x.cube(f.dim, f.id);
    for (int i = 0; i < f.dim; ++i)
      for (int s = 0; s < 2; ++s) {
        const auto& facet = cube.faces[static_cast<std::size_t>(2 * i + s)];
        std::vector<std::uint32_t> tp(std::size_t{1} << (f.dim - 1));
        for (std::uint32_t lab = 0; lab < tp.size(); ++lab) {
          // label inside f: coordinate i fixed to s, others through corr
          std::uint32_t inner = s ? (1u << i) : 0u;
          for (std::size_t j = 0; j < facet.corr.size(); ++j) {
            std::uint32_t bit = ((lab >> j) & 1u) ^ (facet.corr[j].flip ? 1u : 0u);
            inner |= bit << facet.corr[j].axis;
          }
          tp[lab] = f.to_parent[inner];
        }
        stack.push_back({f.dim - 1, facet.id, tp});
      }
  }
  return out;
}

/// Edge-end at parent corner `label` in direction `axis`: (edge, side).
inline std::pair<CubeId, int> edge_end(const std::vector<FaceRef>& faces, std::uint32_t label, int axis) {
  for (const auto& f : faces) {
    if (f.dim != 1) continue;
    std::uint32_t a = f.to_parent[0], b = f.to_parent[1];
    if (a == label && b == (label ^ (1u << axis))) return {f.id, 0};
    if (b == label && a == (label ^ (1u << axis))) return {f.id, 1};
  }
  return {-1, -1};
}

/// NPC verdict: every link simplicial and flag.
inline bool npc(const CubeComplex& x) {
  std::vector<std::vector<std::vector<std::pair<CubeId, int>>>> simplices(x.vertex_count());
  std::vector<std::set<std::pair<CubeId, int>>> link_vertices(x.vertex_count());
  for (std::size_t e = 0; e < x.count(1); ++e)
    for (int s = 0; s < 2; ++s)
      link_vertices[static_cast<std::size_t>(x.cube(1, static_cast<CubeId>(e)).corners[static_cast<std::size_t>(s)])].insert({static_cast<CubeId>(e), s});
  for (int d = 2; d <= x.dim(); ++d)
    for (std::size_t c = 0; c < x.count(d); ++c) {
      auto faces = all_faces(x, d, static_cast<CubeId>(c));
      const auto& cube = x.cube(d, static_cast<CubeId>(c));
      for (std::uint32_t lab = 0; lab < cube.corners.size(); ++lab) {
        std::vector<std::pair<CubeId, int>> simplex;
        for (int i = 0; i < d; ++i) simplex.push_back(edge_end(faces, lab, i));
        simplices[static_cast<std::size_t>(cube.corners[lab])].push_back(simplex);
      }
    }
  for (std::size_t v = 0; v < x.vertex_count(); ++v) {
    std::set<std::vector<std::pair<CubeId, int>>> seen;
    std::set<std::pair<std::pair<CubeId, int>, std::pair<CubeId, int>>> adj;
    for (auto s : simplices[v]) {
      std::sort(s.begin(), s.end());
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
      if (!seen.insert(s).second) return false;
      if (s.size() == 2) adj.insert({s[0], s[1]});
    }
    std::vector<std::pair<CubeId, int>> lv(link_vertices[v].begin(), link_vertices[v].end());
    std::size_t n = lv.size();
    if (n > 20) continue;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) < 3) continue;
      std::vector<std::pair<CubeId, int>> sub;
      for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1u) sub.push_back(lv[i]);
      bool clique = true;
      for (std::size_t i = 0; i < sub.size() && clique; ++i)
        for (std::size_t j = i + 1; j < sub.size() && clique; ++j) clique = adj.count({sub[i], sub[j]}) > 0;
      if (clique && !seen.count(sub)) return false;
    }
  }
  return true;
}

/// Partition of edges under "opposite in a square", as sorted classes sorted by least edge.
inline std::vector<std::vector<CubeId>> edge_partition(const CubeComplex& x) {
  std::vector<int> parent(x.count(1));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
    return a;
  };
  auto edge_between = [](const std::vector<FaceRef>& faces, std::uint32_t a, std::uint32_t b) {
    for (const auto& f : faces)
      if (f.dim == 1 && ((f.to_parent[0] == a && f.to_parent[1] == b) || (f.to_parent[0] == b && f.to_parent[1] == a)))
        return f.id;
    return CubeId{-1};
  };
  for (int d = 2; d <= x.dim(); ++d)
    for (std::size_t c = 0; c < x.count(d); ++c) {
      auto faces = all_faces(x, d, static_cast<CubeId>(c));
      for (const auto& f : faces) {
        if (f.dim != 2) continue;
        const auto& p = f.to_parent;
        std::pair<CubeId, CubeId> opp[2] = {{edge_between(faces, p[0], p[1]), edge_between(faces, p[2], p[3])},
                                            {edge_between(faces, p[0], p[2]), edge_between(faces, p[1], p[3])}};
        for (auto [e1, e2] : opp) {
          int a = find(e1), b = find(e2);
          if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
      }
    }
  std::map<int, std::vector<CubeId>> groups;
  for (std::size_t e = 0; e < x.count(1); ++e) groups[find(static_cast<int>(e))].push_back(static_cast<CubeId>(e));
  std::vector<std::vector<CubeId>> out;
  for (auto& [r, g] : groups) out.push_back(g);
  std::sort(out.begin(), out.end());
  return out;
}

/// Random square complex: a random multigraph with squares glued along
/// randomly chosen closed 4-edge paths. Often not NPC.
inline CubeComplex random_square_complex(std::mt19937& rng, int max_cubes = 50) {
  std::uniform_int_distribution<int> nv(1, 6);
  int v = nv(rng);
  CubeComplex x(static_cast<std::size_t>(v));
  std::uniform_int_distribution<int> pick(0, v - 1);
  int ne = std::uniform_int_distribution<int>(v, v + 8)(rng);
  for (int i = 0; i < ne; ++i) x.add_edge(pick(rng), pick(rng));
  int budget = max_cubes - v - ne;
  int tries = 200;
  while (budget > 0 && tries-- > 0) {
    std::uniform_int_distribution<int> pe(0, static_cast<int>(x.count(1)) - 1);
    cubecx::SquareSide sides[4];
    for (auto& s : sides) s = {pe(rng), std::uniform_int_distribution<int>(0, 1)(rng) == 1};
    try {
      cubecx::add_square(x, sides[0], sides[1], sides[2], sides[3]);
      --budget;
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) break;
    } catch (const cubecx::Error&) {
    }
  }
  return x;
}

/// Boundary cycle of each square as signed edge ids (+e along, -e against), via face labels.
inline std::vector<std::vector<int>> square_words(const CubeComplex& x) {
  std::vector<std::vector<int>> out;
  for (std::size_t c = 0; c < x.count(2); ++c) {
    auto faces = all_faces(x, 2, static_cast<CubeId>(c));
    const std::uint32_t cyc[5] = {0, 1, 3, 2, 0};
    std::vector<int> w;
    for (int k = 0; k < 4; ++k) {
      for (const auto& f : faces) {
        if (f.dim != 1) continue;
        if (f.to_parent[0] == cyc[k] && f.to_parent[1] == cyc[k + 1]) { w.push_back(f.id + 1); break; }
        if (f.to_parent[1] == cyc[k] && f.to_parent[0] == cyc[k + 1]) { w.push_back(-(f.id + 1)); break; }
      }
    }
    out.push_back(w);
  }
  return out;
}

/// First Betti number mod a large prime.
inline int betti1(const CubeComplex& x) {
  const long long P = 1000003;
  auto rank = [&](std::vector<std::vector<long long>> m) {
    int r = 0;
    std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
      std::size_t piv = static_cast<std::size_t>(r);
      while (piv < m.size() && m[piv][c] % P == 0) ++piv;
      if (piv == m.size()) continue;
      std::swap(m[piv], m[static_cast<std::size_t>(r)]);
      long long inv = 1, b = (m[static_cast<std::size_t>(r)][c] % P + P) % P, e = P - 2;
      while (e) { if (e & 1) inv = inv * b % P; b = b * b % P; e >>= 1; }
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == static_cast<std::size_t>(r)) continue;
        long long f = (m[i][c] % P + P) % P * inv % P;
        if (!f) continue;
        for (std::size_t k = 0; k < cols; ++k) m[i][k] = ((m[i][k] - f * m[static_cast<std::size_t>(r)][k]) % P + P) % P;
      }
      ++r;
    }
    return r;
  };
  std::size_t ne = x.count(1);
  std::vector<std::vector<long long>> d1(ne, std::vector<long long>(x.vertex_count(), 0));
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& c = x.cube(1, static_cast<CubeId>(e)).corners;
    d1[e][static_cast<std::size_t>(c[1])] += 1;
    d1[e][static_cast<std::size_t>(c[0])] -= 1;
  }
  std::vector<std::vector<long long>> d2;
  for (const auto& w : square_words(x)) {
    std::vector<long long> row(ne, 0);
    for (int g : w) row[static_cast<std::size_t>(std::abs(g) - 1)] += g > 0 ? 1 : -1;
    d2.push_back(row);
  }
  return static_cast<int>(ne) - rank(d1) - (d2.empty() ? 0 : rank(d2));
}

/// Fundamental group triviality of a connected complex of dimension <= 2 by
/// Tietze elimination: 1 trivial, 0 nontrivial (abelianization), -1 unknown.
inline int pi1_trivial(const CubeComplex& x) {
  // spanning tree
  std::vector<int> seen(x.vertex_count(), 0);
  std::vector<char> tree(x.count(1), 0);
  std::vector<CubeId> stack{0};
  if (x.vertex_count()) seen[0] = 1;
  while (!stack.empty()) {
    CubeId v = stack.back();
    stack.pop_back();
    for (std::size_t e = 0; e < x.count(1); ++e) {
      const auto& c = x.cube(1, static_cast<CubeId>(e)).corners;
      for (int s = 0; s < 2; ++s)
        if (c[static_cast<std::size_t>(s)] == v && !seen[static_cast<std::size_t>(c[static_cast<std::size_t>(1 - s)])]) {
          seen[static_cast<std::size_t>(c[static_cast<std::size_t>(1 - s)])] = 1;
          tree[e] = 1;
          stack.push_back(c[static_cast<std::size_t>(1 - s)]);
        }
    }
  }
  std::set<int> gens;
  for (std::size_t e = 0; e < x.count(1); ++e)
    if (!tree[e]) gens.insert(static_cast<int>(e) + 1);
  std::vector<std::vector<int>> rels;
  for (auto w : square_words(x)) {
    std::vector<int> r;
    for (int g : w)
      if (gens.count(std::abs(g))) r.push_back(g);
    rels.push_back(r);
  }
  auto reduce = [](std::vector<int> w) {
    std::vector<int> out;
    for (int g : w) {
      if (!out.empty() && out.back() == -g) out.pop_back();
      else out.push_back(g);
    }
    while (out.size() >= 2 && out.front() == -out.back()) {
      out.erase(out.begin());
      out.pop_back();
    }
    return out;
  };
  bool progress = true;
  while (progress && !gens.empty()) {
    progress = false;
    for (auto& r : rels) r = reduce(r);
    for (const auto& r : rels) {
      std::map<int, int> occ;
      for (int g : r) occ[std::abs(g)]++;
      for (auto [g, n] : occ) {
        if (n != 1) continue;
        // r = u g^e v  =>  g^e = u^-1 v^-1
        std::size_t at = 0;
        while (std::abs(r[at]) != g) ++at;
        std::vector<int> u(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(at));
        std::vector<int> v(r.begin() + static_cast<std::ptrdiff_t>(at) + 1, r.end());
        std::vector<int> val;
        for (auto it = u.rbegin(); it != u.rend(); ++it) val.push_back(-*it);
        for (auto it = v.rbegin(); it != v.rend(); ++it) val.push_back(-*it);
        if (r[at] < 0) {
          std::reverse(val.begin(), val.end());
          for (auto& h : val) h = -h;
        }
        std::vector<std::vector<int>> next;
        for (const auto& q : rels) {
          if (&q == &r) continue;
          std::vector<int> w;
          for (int h : q) {
            if (std::abs(h) != g) { w.push_back(h); continue; }
            if (h > 0) w.insert(w.end(), val.begin(), val.end());
            else for (auto it = val.rbegin(); it != val.rend(); ++it) w.push_back(-*it);
          }
          next.push_back(w);
        }
        rels = std::move(next);
        gens.erase(g);
        progress = true;
        break;
      }
      if (progress) break;
    }
  }
  if (gens.empty()) return 1;
  if (betti1(x) > 0) return 0;
  return -1;
}

// Brute force: shortest closed edge path that does not lift to a closed path.
// Essentiality is tested by lifting into a ball of radius >= the length.
inline int systole(std::shared_ptr<const CubeComplex> x, int max_len) {
  auto ends = x->edge_ends();
  for (int len = 1; len <= max_len; ++len) {
    for (std::size_t v = 0; v < x->vertex_count(); ++v) {
      auto ball = cubecx::develop_ball(x, static_cast<CubeId>(v), len);
      std::vector<cubecx::EdgeEnd> path;
      bool found = false;
      std::function<void(CubeId)> go = [&](CubeId at) {
        if (found) return;
        if (static_cast<int>(path.size()) == len) {
          if (at == static_cast<CubeId>(v) && cubecx::lift_path(ball, path) != 0) found = true;
          return;
        }
        for (const auto& e : ends[static_cast<std::size_t>(at)]) {
          path.push_back(e);
          go(x->edge_vertex({e.edge, 1 - e.side}));
          path.pop_back();
        }
      };
      go(static_cast<CubeId>(v));
      if (found) return len;
    }
  }
  return -1;
}

// All pairwise-consistent orientations, then the flip-component of point 0.
inline std::size_t dual_vertex_count(const cubecx::FiniteWallspace& ws) {
  std::size_t n = ws.walls.size();
  auto sides = ws.sides();
  auto meet = [&](std::size_t a, int sa, std::size_t b, int sb) {
    for (std::size_t x = 0; x < ws.points; ++x)
      if (sides[a][x] == sa && sides[b][x] == sb) return true;
    return false;
  };
  std::set<std::uint32_t> good;
  for (std::uint32_t o = 0; o < (1u << n); ++o) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = a + 1; b < n && ok; ++b) ok = meet(a, (o >> a) & 1u, b, (o >> b) & 1u);
    if (ok) good.insert(o);
  }
  std::uint32_t start = 0;
  for (std::size_t w = 0; w < n; ++w) start |= static_cast<std::uint32_t>(sides[w][0]) << w;
  std::set<std::uint32_t> seen{start};
  std::deque<std::uint32_t> q{start};
  while (!q.empty()) {
    auto o = q.front();
    q.pop_front();
    for (std::size_t w = 0; w < n; ++w) {
      auto p = o ^ (1u << w);
      if (good.count(p) && seen.insert(p).second) q.push_back(p);
    }
  }
  return seen.size();
}

/// Cyclically reduced random word over {a, b} of the given length.
inline std::string random_word(std::size_t len, unsigned seed) {
  std::mt19937 rng(seed);
  const std::string letters = "aAbB";
  std::string w;
  while (w.size() < len) {
    w += letters[rng() % 4];
    w = cubecx::cyclic_reduce(cubecx::free_reduce(w));
  }
  return w;
}

// Theta graph with arcs of the given lengths between vertices 0 and 1.
inline std::shared_ptr<const CubeComplex> theta_arcs(std::vector<int> lengths) {
  int n = 2;
  for (int l : lengths) n += l - 1;
  CubeComplex y(static_cast<std::size_t>(n));
  int next = 2;
  for (int l : lengths) {
    int at = 0;
    for (int k = 0; k < l; ++k) {
      int to = k + 1 == l ? 1 : next++;
      y.add_edge(at, to);
      at = to;
    }
  }
  return cubecx::share(std::move(y));
}

}  // namespace oracle
