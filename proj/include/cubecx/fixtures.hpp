#pragma once

#include "cubecx/cubical_map.hpp"

#include <string>

namespace cubecx::fixtures {

/// One vertex, `rank` loops.
inline CubeComplex bouquet(int rank) {
  CubeComplex x(1);
  for (int i = 0; i < rank; ++i) x.add_edge(0, 0);
  return x;
}

/// One vertex, loops a = 0 and b = 1, one square with boundary a b a^-1 b^-1.
inline CubeComplex torus() {
  CubeComplex x = bouquet(2);
  add_square(x, {0}, {1}, {0}, {1});
  return x;
}

inline CubeComplex path_graph(int edges) {
  CubeComplex x(static_cast<std::size_t>(edges + 1));
  for (int i = 0; i < edges; ++i) x.add_edge(i, i + 1);
  return x;
}

inline CubeComplex interval() { return path_graph(1); }

inline CubeComplex cycle_graph(int n) {
  CubeComplex x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x.add_edge(i, (i + 1) % n);
  return x;
}

inline CubeComplex square() { return product(interval(), interval()); }

/// m x n grid of squares.
inline CubeComplex grid(int m, int n) { return product(path_graph(m), path_graph(n)); }

/// Two vertices joined by three edges.
inline CubeComplex theta() {
  CubeComplex x(2);
  for (int i = 0; i < 3; ++i) x.add_edge(0, 1);
  return x;
}

/// Center 0 with leaves 1, 2, 3.
inline CubeComplex tripod() {
  CubeComplex x(4);
  for (int i = 1; i <= 3; ++i) x.add_edge(0, i);
  return x;
}

/// Two squares sharing two consecutive edges: its link is not simplicial.
inline CubeComplex doubled_square() {
  CubeComplex x(5);
  CubeId b = x.add_edge(0, 1), l = x.add_edge(0, 2);
  CubeId r = x.add_edge(1, 3), t = x.add_edge(2, 3);
  CubeId r2 = x.add_edge(1, 4), t2 = x.add_edge(2, 4);
  add_square(x, {b}, {r}, {t}, {l});
  add_square(x, {b}, {r2}, {t2}, {l});
  return x;
}

inline int letter_index(char c) { return std::tolower(static_cast<unsigned char>(c)) - 'a'; }
inline bool letter_inverse(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }

/// The cycle reading `word` around a bouquet (lowercase letters, uppercase inverses).
inline CubicalMap word_cycle(const std::string& word, std::shared_ptr<const CubeComplex> bouquet_target) {
  if (word.empty()) throw Error(ErrorKind::Validation, "empty cyclic word");
  int n = static_cast<int>(word.size());
  auto src = share(cycle_graph(n));
  std::vector<CubeId> verts(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<CubeId, bool>> edges;
  for (char c : word) {
    int k = letter_index(c);
    if (k < 0 || static_cast<std::size_t>(k) >= bouquet_target->count(1))
      throw Error(ErrorKind::Validation, std::string("letter '") + c + "' outside the bouquet");
    edges.emplace_back(k, letter_inverse(c));
  }
  return graph_map(src, std::move(bouquet_target), verts, edges);
}

inline CubicalMap word_cycle(const std::string& word, int rank = 2) { return word_cycle(word, share(bouquet(rank))); }

/// B2 x B2 with the fiber B2 x {pt}.
inline CubicalMap nonexample_product() {
  CubeComplex b2 = bouquet(2);
  auto xx = share(product(b2, b2));
  auto src = share(bouquet(2));
  std::vector<std::pair<CubeId, bool>> edges;
  for (CubeId k = 0; k < 2; ++k) edges.emplace_back(product_cube_id(b2, b2, 1, k, 0, 0), false);
  return graph_map(src, xx, {0}, edges);
}

/// Two hexagons sharing the edge 0 (0 -> 1, label a), immersed in B2. The
/// other sides read baaab (edges 1-5) and BAAAB (edges 6-10) from 0 to 1.
inline CubicalMap two_hexagons() {
  CubeComplex y(10);
  std::vector<std::pair<CubeId, bool>> edges;
  auto edge = [&](CubeId from, CubeId to, CubeId label) {
    y.add_edge(from, to);
    edges.emplace_back(label, false);
  };
  edge(0, 1, 0);
  edge(0, 2, 1);
  edge(2, 3, 0);
  edge(3, 4, 0);
  edge(4, 5, 0);
  edge(5, 1, 1);
  edge(6, 0, 1);
  edge(7, 6, 0);
  edge(8, 7, 0);
  edge(9, 8, 0);
  edge(1, 9, 1);
  return graph_map(share(std::move(y)), share(bouquet(2)), std::vector<CubeId>(10, 0), edges);
}

}  // namespace cubecx::fixtures
