#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nm {

struct ParseError : std::runtime_error {
  std::size_t offset;  // byte position in the input
  ParseError(const std::string& msg, std::size_t offset_);
};

using FormulaId = std::uint32_t;

// A purely implicational formula: an atom or an implication.  Formulas are
// hash-consed into a process-wide table, so a Formula is a 4-byte handle,
// structural equality is id equality, and ids are stable for the lifetime
// of the process.  The table is append-only and safe for concurrent use.
class Formula {
 public:
  // Invalid handle; any accessor throws until a real formula is assigned.
  Formula() : id_(~FormulaId{0}) {}

  // Atom names are identifiers: [A-Za-z][A-Za-z0-9_]*.
  static Formula var(std::string_view atom_name);
  static Formula imp(Formula antecedent, Formula consequent);

  bool is_var() const;
  bool is_imp() const { return !is_var(); }

  const std::string& atom_name() const;  // pre: is_var()
  Formula antecedent() const;            // pre: is_imp()
  Formula consequent() const;            // pre: is_imp()

  // Atom occurrences plus implication nodes.
  std::size_t size() const;

  FormulaId id() const { return id_; }

  friend bool operator==(Formula a, Formula b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Formula a, Formula b) {
    return a.id_ <=> b.id_;
  }

  static Formula from_id(FormulaId id);  // pre: id was returned by intern()

 private:
  explicit Formula(FormulaId id) : id_(id) {}
  FormulaId id_;
};

// Grammar:  formula := atom | formula "->" formula | "(" formula ")"
// with "->" right-associative and arbitrary whitespace between tokens.
Formula parse_formula(std::string_view text);

// Minimal parenthesization; parse_formula(render_formula(f)) == f.
std::string render_formula(Formula f);

// Structurally equal formulas share one id.  With hash-consed construction
// interning happens up front; this accessor exists for symmetry.
FormulaId intern(Formula f);

// Number of distinct formulas interned so far.
std::size_t interned_formula_count();

std::ostream& operator<<(std::ostream& os, Formula f);

}  // namespace nm

template <>
struct std::hash<nm::Formula> {
  std::size_t operator()(nm::Formula f) const noexcept {
    return std::hash<nm::FormulaId>{}(f.id());
  }
};
