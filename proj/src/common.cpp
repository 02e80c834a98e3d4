#include "nm/common.hpp"

namespace nm {

const char* rule_name(RuleKind r) {
  switch (r) {
    case RuleKind::Assume:
      return "assume";
    case RuleKind::ImpIntro:
      return "impI";
    case RuleKind::ImpElim:
      return "impE";
    case RuleKind::Rep:
      return "rep";
  }
  return "?";
}

const char* mode_name(Mode m) { return m == Mode::Nm ? "nm" : "nm+"; }

std::string CheckViolation::to_string() const {
  std::string s = where + ": " + message;
  if (!expected.empty() || !actual.empty()) {
    s += " (expected '" + expected + "', got '" + actual + "')";
  }
  return s;
}

std::string CheckReport::to_string() const {
  return ok() ? "valid" : violation->to_string();
}

CheckReport CheckReport::fail(std::string where, std::string message,
                              std::string expected, std::string actual) {
  CheckReport r;
  r.violation = CheckViolation{std::move(where), std::move(message),
                               std::move(expected), std::move(actual)};
  return r;
}

PathExplosionError::PathExplosionError(std::size_t limit_)
    : std::runtime_error("more than " + std::to_string(limit_) +
                         " deductive paths"),
      limit(limit_) {}

}  // namespace nm
