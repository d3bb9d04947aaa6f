#pragma once

#include "cubecx/common.hpp"

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cubecx {

using Json = nlohmann::ordered_json;

enum class Status { pass, fail, inconclusive };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

/// Result of every checker. A fail carries a witness that an independent
/// predicate can re-check; an inconclusive result names the exhausted bound.
struct Certificate {
  std::string check;
  Status status = Status::pass;
  std::string reason;
  nlohmann::ordered_json witness;
  std::vector<std::pair<std::string, std::string>> report;
  std::vector<Certificate> children;

  bool passed() const { return status == Status::pass; }

  Certificate& add(std::string name, std::int64_t v) {
    report.emplace_back(std::move(name), std::to_string(v));
    return *this;
  }
  Certificate& add(std::string name, const Rational& v) {
    report.emplace_back(std::move(name), format_rational(v));
    return *this;
  }
  Certificate& add(std::string name, std::string v) {
    report.emplace_back(std::move(name), std::move(v));
    return *this;
  }
  Certificate& add(std::string name, const char* v) { return add(std::move(name), std::string(v)); }
  Certificate& add(std::string name, bool v) { return add(std::move(name), std::string(v ? "true" : "false")); }
  Certificate& add(std::string name, int v) { return add(std::move(name), static_cast<std::int64_t>(v)); }
  Certificate& add(std::string name, std::size_t v) { return add(std::move(name), static_cast<std::int64_t>(v)); }

  void fail(std::string why, nlohmann::ordered_json w = {}) {
    status = Status::fail;
    reason = std::move(why);
    witness = std::move(w);
  }
  void inconclusive(std::string why) {
    if (status == Status::pass) {
      status = Status::inconclusive;
      reason = std::move(why);
    }
  }

  /// Folds a child verdict into this one: fail dominates inconclusive dominates pass.
  void absorb(Certificate child) {
    if (child.status == Status::fail && status != Status::fail) {
      status = Status::fail;
      reason = child.check + ": " + child.reason;
      if (witness.is_null()) witness = child.witness;
    } else if (child.status == Status::inconclusive && status == Status::pass) {
      status = Status::inconclusive;
      reason = child.check + ": " + child.reason;
    }
    children.push_back(std::move(child));
  }

  const std::string* find(const std::string& name) const {
    for (const auto& [k, v] : report)
      if (k == name) return &v;
    return nullptr;
  }
};

inline Certificate make_certificate(std::string check) {
  Certificate c;
  c.check = std::move(check);
  return c;
}

namespace detail {
inline void render(std::ostringstream& os, const Certificate& c, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  os << pad << "[" << to_string(c.status) << "] " << c.check;
  if (!c.reason.empty()) os << " -- " << c.reason;
  os << "\n";
  for (const auto& [k, v] : c.report) os << pad << "  " << k << " = " << v << "\n";
  if (!c.witness.is_null()) os << pad << "  witness = " << c.witness.dump() << "\n";
  for (const auto& child : c.children) render(os, child, depth + 1);
}
}  // namespace detail

/// Stable, diff-friendly text rendering.
inline std::string render(const Certificate& c) {
  std::ostringstream os;
  detail::render(os, c, 0);
  return os.str();
}

inline nlohmann::ordered_json to_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["check"] = c.check;
  j["status"] = std::string(to_string(c.status));
  if (!c.reason.empty()) j["reason"] = c.reason;
  if (!c.witness.is_null()) j["witness"] = c.witness;
  auto rep = nlohmann::ordered_json::array();
  for (const auto& [k, v] : c.report) rep.push_back({k, v});
  j["report"] = rep;
  if (!c.children.empty()) {
    auto ch = nlohmann::ordered_json::array();
    for (const auto& child : c.children) ch.push_back(to_json(child));
    j["children"] = ch;
  }
  return j;
}

}  // namespace cubecx
