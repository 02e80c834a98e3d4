#include "nm/formula.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace nm {

ParseError::ParseError(const std::string& msg, std::size_t offset_)
    : std::runtime_error(msg + " (at offset " + std::to_string(offset_) + ")"),
      offset(offset_) {}

namespace {

struct FormulaCell {
  bool is_imp = false;
  FormulaId lhs = 0;
  FormulaId rhs = 0;
  std::string name;       // atoms only
  std::size_t size = 1;   // atom occurrences + implication nodes
};

// Process-wide interning table.  Cells are appended under an exclusive lock
// and never move (deque), so readers holding ids need only a shared lock.
class Interner {
 public:
  FormulaId var(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      auto it = vars_.find(std::string(name));
      if (it != vars_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = vars_.try_emplace(std::string(name), 0);
    if (inserted) {
      FormulaCell cell;
      cell.name = it->first;
      cells_.push_back(std::move(cell));
      it->second = static_cast<FormulaId>(cells_.size() - 1);
    }
    return it->second;
  }

  FormulaId imp(FormulaId lhs, FormulaId rhs) {
    const std::uint64_t key = (std::uint64_t(lhs) << 32) | rhs;
    {
      std::shared_lock lock(mutex_);
      auto it = imps_.find(key);
      if (it != imps_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = imps_.try_emplace(key, 0);
    if (inserted) {
      FormulaCell cell;
      cell.is_imp = true;
      cell.lhs = lhs;
      cell.rhs = rhs;
      cell.size = cells_[lhs].size + cells_[rhs].size + 1;
      cells_.push_back(std::move(cell));
      it->second = static_cast<FormulaId>(cells_.size() - 1);
    }
    return it->second;
  }

  const FormulaCell& cell(FormulaId id) const {
    std::shared_lock lock(mutex_);
    if (id >= cells_.size()) {
      throw std::out_of_range("invalid formula handle");
    }
    return cells_[id];
  }

  std::size_t count() const {
    std::shared_lock lock(mutex_);
    return cells_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::deque<FormulaCell> cells_;
  std::unordered_map<std::string, FormulaId> vars_;
  std::unordered_map<std::uint64_t, FormulaId> imps_;
};

Interner& table() {
  static Interner instance;
  return instance;
}

bool valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

}  // namespace

Formula Formula::var(std::string_view atom_name) {
  if (!valid_atom_name(atom_name)) {
    throw std::invalid_argument("invalid atom name: '" +
                                std::string(atom_name) + "'");
  }
  return Formula(table().var(atom_name));
}

Formula Formula::imp(Formula antecedent, Formula consequent) {
  return Formula(table().imp(antecedent.id_, consequent.id_));
}

Formula Formula::from_id(FormulaId id) {
  if (id >= table().count()) throw std::out_of_range("unknown formula id");
  return Formula(id);
}

bool Formula::is_var() const { return !table().cell(id_).is_imp; }

const std::string& Formula::atom_name() const {
  const FormulaCell& c = table().cell(id_);
  if (c.is_imp) throw std::logic_error("atom_name() on an implication");
  return c.name;
}

Formula Formula::antecedent() const {
  const FormulaCell& c = table().cell(id_);
  if (!c.is_imp) throw std::logic_error("antecedent() on an atom");
  return Formula(c.lhs);
}

Formula Formula::consequent() const {
  const FormulaCell& c = table().cell(id_);
  if (!c.is_imp) throw std::logic_error("consequent() on an atom");
  return Formula(c.rhs);
}

std::size_t Formula::size() const { return table().cell(id_).size; }

FormulaId intern(Formula f) { return f.id(); }

std::size_t interned_formula_count() { return table().count(); }

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = implication();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  Formula implication() {
    Formula lhs = primary();
    skip_ws();
    if (peek_arrow()) {
      pos_ += 2;
      Formula rhs = implication();  // right-associative
      return Formula::imp(lhs, rhs);
    }
    return lhs;
  }

  Formula primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a formula");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Formula inner = implication();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') {
        fail("expected ')'");
      }
      ++pos_;
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      return Formula::var(text_.substr(start, pos_ - start));
    }
    fail("expected an atom or '('");
  }

  bool peek_arrow() const {
    return pos_ + 1 < text_.size() && text_[pos_] == '-' &&
           text_[pos_ + 1] == '>';
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void render_into(Formula f, std::string& out) {
  if (f.is_var()) {
    out += f.atom_name();
    return;
  }
  Formula a = f.antecedent();
  if (a.is_imp()) {
    out += '(';
    render_into(a, out);
    out += ')';
  } else {
    render_into(a, out);
  }
  out += " -> ";
  render_into(f.consequent(), out);
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string render_formula(Formula f) {
  std::string out;
  render_into(f, out);
  return out;
}

std::ostream& operator<<(std::ostream& os, Formula f) {
  return os << render_formula(f);
}

}  // namespace nm
