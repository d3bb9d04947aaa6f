#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cubecx {

/// Index of a cube inside the table of its dimension.
using CubeId = std::int32_t;

/// Exact rationals; certificates never use floating point.
using Rational = boost::rational<std::int64_t>;

enum class ErrorKind {
  Parse,
  Validation,
  DanglingFace,
  IncompatibleFaces,
  UnknownVertex,
  NotConnected,
  NotNPC,
  NotLocalIsometry,
  NotDisjoint,
  TargetMismatch,
  FrontierContamination,
  FiniteIndexConstraint,
  NotImmersedWedge,
  DegenerateParameters,
  RankTooLow,
  GuardExhausted,
  BudgetExhausted,
  NotAHomomorphism,
  NotSystolic,
  DecompositionInvalid,
  UnknownFixture,
  Unsupported,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::DanglingFace: return "DanglingFace";
    case ErrorKind::IncompatibleFaces: return "IncompatibleFaces";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::NotNPC: return "NotNPC";
    case ErrorKind::NotLocalIsometry: return "NotLocalIsometry";
    case ErrorKind::NotDisjoint: return "NotDisjoint";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::FrontierContamination: return "FrontierContamination";
    case ErrorKind::FiniteIndexConstraint: return "FiniteIndexConstraint";
    case ErrorKind::NotImmersedWedge: return "NotImmersedWedge";
    case ErrorKind::DegenerateParameters: return "DegenerateParameters";
    case ErrorKind::RankTooLow: return "RankTooLow";
    case ErrorKind::GuardExhausted: return "GuardExhausted";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorKind::NotSystolic: return "NotSystolic";
    case ErrorKind::DecompositionInvalid: return "DecompositionInvalid";
    case ErrorKind::UnknownFixture: return "UnknownFixture";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "p/q" or "p".
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(std::stoll(std::string(text)));
    auto num = std::stoll(std::string(text.substr(0, slash)));
    auto den = std::stoll(std::string(text.substr(slash + 1)));
    if (den == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Parse, "not a rational: '" + std::string(text) + "'");
  }
}

/// `value < bound * scale` with exact arithmetic.
inline bool less_than_scaled(std::int64_t value, const Rational& bound, std::int64_t scale) {
  return Rational(value) < bound * Rational(scale);
}

}  // namespace cubecx
