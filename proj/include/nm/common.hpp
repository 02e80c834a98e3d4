#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace nm {

// Calculus flavour: Nm is the basic two-rule calculus, NmPlus additionally
// admits n-ary repetition nodes (the merge points of dag compression).
enum class Mode : unsigned char { Nm, NmPlus };

enum class RuleKind : unsigned char { Assume, ImpIntro, ImpElim, Rep };

const char* rule_name(RuleKind r);
const char* mode_name(Mode m);

// First rule violation found by a structural check.  `where` locates the
// node (child-index path for trees, node id for dags); expected/actual are
// rendered formulas when the violation is a formula mismatch.
struct CheckViolation {
  std::string where;
  std::string message;
  std::string expected;
  std::string actual;

  std::string to_string() const;
};

struct CheckReport {
  std::optional<CheckViolation> violation;

  bool ok() const { return !violation.has_value(); }
  std::string to_string() const;

  static CheckReport valid() { return CheckReport{}; }
  static CheckReport fail(std::string where, std::string message,
                          std::string expected = {}, std::string actual = {});
};

struct PathExplosionError : std::runtime_error {
  std::size_t limit;
  explicit PathExplosionError(std::size_t limit_);
};

struct InvalidPlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnfoldAmbiguityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nm
