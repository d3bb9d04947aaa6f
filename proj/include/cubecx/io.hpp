#pragma once

#include "cubecx/cubical_map.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace cubecx {

inline std::string corner_key(std::uint32_t label, int d) {
  std::string s(static_cast<std::size_t>(std::max(d, 1)), '0');
  if (d == 0) return "";
  for (int j = 0; j < d; ++j) s[static_cast<std::size_t>(j)] = ((label >> j) & 1u) ? '1' : '0';
  return s;
}

inline Json frame_to_json(const Frame& f) {
  Json a = Json::array();
  for (const auto& m : f) a.push_back({m.axis, m.flip ? 1 : 0});
  return a;
}

inline Json complex_to_json(const CubeComplex& x) {
  Json j;
  j["dim"] = x.dim();
  Json cubes = Json::object();
  Json verts = Json::array();
  for (std::size_t v = 0; v < x.vertex_count(); ++v) verts.push_back(Json{{"id", v}});
  cubes["0"] = std::move(verts);
  for (int d = 1; d <= x.dim(); ++d) {
    Json tab = Json::array();
    for (std::size_t c = 0; c < x.count(d); ++c) {
      const Cube& cube = x.cube(d, static_cast<CubeId>(c));
      Json rec;
      rec["id"] = c;
      Json corners = Json::object();
      for (std::uint32_t lab = 0; lab < cube.corners.size(); ++lab) corners[corner_key(lab, d)] = cube.corners[lab];
      rec["corners"] = std::move(corners);
      Json faces = Json::object();
      for (int i = 0; i < d; ++i)
        for (int s = 0; s < 2; ++s) {
          const Facet& f = cube.faces[static_cast<std::size_t>(2 * i + s)];
          faces[std::to_string(i) + ":" + std::to_string(s)] = Json{{"id", f.id}, {"corr", frame_to_json(f.corr)}};
        }
      rec["faces"] = std::move(faces);
      tab.push_back(std::move(rec));
    }
    cubes[std::to_string(d)] = std::move(tab);
  }
  j["cubes"] = std::move(cubes);
  return j;
}

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

inline Frame frame_from_json(const Json& a, const std::string& where) {
  if (!a.is_array()) parse_fail(where, "corr must be an array");
  Frame f;
  for (const auto& m : a) {
    if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() || !m[1].is_number_integer())
      parse_fail(where, "corr entries are [axis, flip]");
    f.push_back({m[0].get<int>(), m[1].get<int>() != 0});
  }
  return f;
}

inline std::uint32_t parse_corner_key(const std::string& key, int d, const std::string& where) {
  if (static_cast<int>(key.size()) != d) parse_fail(where, "corner key '" + key + "' has wrong length");
  std::uint32_t lab = 0;
  for (int j = 0; j < d; ++j) {
    char c = key[static_cast<std::size_t>(j)];
    if (c != '0' && c != '1') parse_fail(where, "corner key '" + key + "' is not binary");
    if (c == '1') lab |= 1u << j;
  }
  return lab;
}

}  // namespace detail

/// Parses the complex format. Structural soundness is left to validate_complex,
/// but ids must be dense and every record complete.
inline CubeComplex complex_from_json(const Json& j, const std::string& where = "complex") {
  using detail::parse_fail;
  if (!j.is_object() || !j.contains("cubes") || !j["cubes"].is_object()) parse_fail(where, "missing 'cubes'");
  const Json& cubes = j["cubes"];
  int top = 0;
  for (const auto& [k, v] : cubes.items()) {
    int d = 0;
    try {
      d = std::stoi(k);
    } catch (const std::logic_error&) {
      parse_fail(where, "dimension key '" + k + "'");
    }
    if (d < 0 || d > 16) parse_fail(where, "dimension " + k + " out of range");
    if (!v.is_array()) parse_fail(where, "cube table must be an array");
    if (!v.empty()) top = std::max(top, d);
  }
  if (j.contains("dim") && (!j["dim"].is_number_integer() || j["dim"].get<int>() != top))
    parse_fail(where, "'dim' disagrees with the cube tables");
  CubeComplex x;
  auto table = [&](int d) -> const Json* {
    auto key = std::to_string(d);
    return cubes.contains(key) ? &cubes[key] : nullptr;
  };
  auto check_ids = [&](const Json& tab, int d) {
    for (std::size_t i = 0; i < tab.size(); ++i) {
      if (!tab[i].is_object() || !tab[i].contains("id") || !tab[i]["id"].is_number_integer() ||
          tab[i]["id"].get<std::int64_t>() != static_cast<std::int64_t>(i))
        parse_fail(where, "dim " + std::to_string(d) + " ids must be 0..n-1 in order");
    }
  };
  if (const Json* t0 = table(0)) {
    check_ids(*t0, 0);
    x.set_vertex_count(t0->size());
  }
  for (int d = 1; d <= top; ++d) {
    const Json* tab = table(d);
    if (!tab) continue;
    check_ids(*tab, d);
    for (std::size_t i = 0; i < tab->size(); ++i) {
      const Json& rec = (*tab)[i];
      std::string here = where + ": cube " + std::to_string(d) + "/" + std::to_string(i);
      if (!rec.contains("corners") || !rec["corners"].is_object() || rec["corners"].size() != (std::size_t{1} << d))
        parse_fail(here, "needs 2^n corners");
      if (!rec.contains("faces") || !rec["faces"].is_object() || rec["faces"].size() != static_cast<std::size_t>(2 * d))
        parse_fail(here, "needs 2n faces");
      Cube c;
      c.corners.assign(std::size_t{1} << d, -1);
      for (const auto& [k, v] : rec["corners"].items()) {
        if (!v.is_number_integer()) parse_fail(here, "corner value must be an integer");
        c.corners[detail::parse_corner_key(k, d, here)] = v.get<CubeId>();
      }
      if (std::find(c.corners.begin(), c.corners.end(), -1) != c.corners.end()) parse_fail(here, "repeated corner key");
      c.faces.assign(static_cast<std::size_t>(2 * d), Facet{-1, {}});
      std::vector<char> got(static_cast<std::size_t>(2 * d), 0);
      for (const auto& [k, v] : rec["faces"].items()) {
        auto colon = k.find(':');
        int axis = -1, side = -1;
        try {
          axis = std::stoi(k.substr(0, colon));
          side = std::stoi(k.substr(colon + 1));
        } catch (const std::logic_error&) {
          parse_fail(here, "face key '" + k + "'");
        }
        if (colon == std::string::npos || axis < 0 || axis >= d || (side != 0 && side != 1))
          parse_fail(here, "face key '" + k + "'");
        if (!v.is_object() || !v.contains("id") || !v["id"].is_number_integer())
          parse_fail(here, "face record needs an integer id");
        auto slot = static_cast<std::size_t>(2 * axis + side);
        if (got[slot]) parse_fail(here, "repeated face key");
        got[slot] = 1;
        c.faces[slot].id = v["id"].get<CubeId>();
        c.faces[slot].corr = v.contains("corr") ? detail::frame_from_json(v["corr"], here) : Frame{};
      }
      x.add_cube(d, std::move(c));
    }
  }
  return x;
}

inline Json map_to_json(const CubicalMap& f, const Json& source_ref, const Json& target_ref) {
  Json j;
  j["source"] = source_ref;
  j["target"] = target_ref;
  Json assign = Json::object();
  for (std::size_t d = 0; d < f.images.size(); ++d) {
    Json tab = Json::array();
    for (std::size_t c = 0; c < f.images[d].size(); ++c) {
      Json rec{{"id", c}, {"to", f.images[d][c].id}};
      if (d > 0) rec["corr"] = frame_to_json(f.images[d][c].corr);
      tab.push_back(std::move(rec));
    }
    assign[std::to_string(d)] = std::move(tab);
  }
  j["assign"] = std::move(assign);
  return j;
}

inline Json map_to_json(const CubicalMap& f) {
  return map_to_json(f, complex_to_json(*f.source), complex_to_json(*f.target));
}

inline std::string dump(const Json& j) { return j.dump(1) + "\n"; }

/// Reads JSON; parse errors carry the file and line.
inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, path.string() + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1 + static_cast<std::size_t>(
                               std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(e.byte, text.size())), '\n'));
    throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Parse, path.string() + ": cannot write");
  out << text;
}

/// A complex given inline or as a path relative to `base`.
inline std::shared_ptr<const CubeComplex> resolve_complex(const Json& ref, const std::filesystem::path& base,
                                                          const std::string& where) {
  if (ref.is_string()) {
    auto p = base / ref.get<std::string>();
    return share(complex_from_json(read_json(p), p.string()));
  }
  return share(complex_from_json(ref, where));
}

inline CubicalMap map_from_json(const Json& j, const std::filesystem::path& base, const std::string& where,
                                std::shared_ptr<const CubeComplex> source = nullptr,
                                std::shared_ptr<const CubeComplex> target = nullptr) {
  using detail::parse_fail;
  if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("assign"))
    parse_fail(where, "map needs source, target and assign");
  CubicalMap f;
  f.source = source ? source : resolve_complex(j["source"], base, where + ": source");
  f.target = target ? target : resolve_complex(j["target"], base, where + ": target");
  const Json& assign = j["assign"];
  if (!assign.is_object()) parse_fail(where, "assign must be keyed by dimension");
  f.images.resize(static_cast<std::size_t>(f.source->dim() + 1));
  for (int d = 0; d <= f.source->dim(); ++d) {
    auto key = std::to_string(d);
    if (!assign.contains(key) || !assign[key].is_array()) parse_fail(where, "assign lacks dimension " + key);
    const Json& tab = assign[key];
    for (std::size_t c = 0; c < tab.size(); ++c) {
      const Json& rec = tab[c];
      if (!rec.is_object() || !rec.contains("to") || !rec["to"].is_number_integer() || !rec.contains("id") ||
          rec["id"].get<std::int64_t>() != static_cast<std::int64_t>(c))
        parse_fail(where, "assign " + key + " entry " + std::to_string(c));
      CubeImage im{rec["to"].get<CubeId>(), {}};
      if (d > 0) {
        if (!rec.contains("corr")) parse_fail(where, "assign " + key + " entry needs corr");
        im.corr = detail::frame_from_json(rec["corr"], where);
      }
      f.images[static_cast<std::size_t>(d)].push_back(std::move(im));
    }
  }
  return f;
}

inline CubeComplex load_complex(const std::filesystem::path& p) { return complex_from_json(read_json(p), p.string()); }

inline CubicalMap load_map(const std::filesystem::path& p) {
  return map_from_json(read_json(p), p.parent_path(), p.string());
}

}  // namespace cubecx
