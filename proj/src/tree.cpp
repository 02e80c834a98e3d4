#include "nm/tree.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

namespace nm {

TreeNodePtr make_tree_node(RuleKind rule, Formula conclusion,
                           std::vector<TreeNodePtr> children,
                           std::optional<int> label) {
  for (const auto& c : children) {
    if (!c) throw std::invalid_argument("null child node");
  }
  return std::make_shared<const TreeNode>(rule, conclusion,
                                          std::move(children), label);
}

TreeNodePtr assume(Formula f, std::optional<int> label) {
  return make_tree_node(RuleKind::Assume, f, {}, label);
}

TreeNodePtr imp_intro(Formula antecedent, TreeNodePtr body,
                      std::optional<int> label) {
  if (!body) throw std::invalid_argument("imp_intro: null body");
  Formula conclusion = Formula::imp(antecedent, body->conclusion);
  return make_tree_node(RuleKind::ImpIntro, conclusion, {std::move(body)},
                        label);
}

TreeNodePtr imp_elim(TreeNodePtr minor, TreeNodePtr major) {
  if (!minor || !major) throw std::invalid_argument("imp_elim: null premise");
  Formula mf = major->conclusion;
  if (!mf.is_imp() || mf.antecedent() != minor->conclusion) {
    throw std::invalid_argument(
        "imp_elim: major premise is not an implication of the minor");
  }
  Formula conclusion = mf.consequent();
  return make_tree_node(RuleKind::ImpElim, conclusion,
                        {std::move(minor), std::move(major)});
}

TreeNodePtr rep(std::vector<TreeNodePtr> premises) {
  if (premises.empty()) throw std::invalid_argument("rep: no premises");
  Formula conclusion = premises.front()->conclusion;
  for (const auto& p : premises) {
    if (!p || p->conclusion != conclusion) {
      throw std::invalid_argument("rep: premises must share one conclusion");
    }
  }
  return make_tree_node(RuleKind::Rep, conclusion, std::move(premises));
}

const TreeNode* node_at(const TreeDerivation& d, const TreeAddress& addr) {
  const TreeNode* n = d.root.get();
  for (std::size_t i : addr) {
    if (!n || i >= n->children.size()) {
      throw std::out_of_range("tree address out of range: " +
                              address_to_string(addr));
    }
    n = n->children[i].get();
  }
  return n;
}

std::string address_to_string(const TreeAddress& addr) {
  if (addr.empty()) return "root";
  std::string s = "root";
  for (std::size_t i : addr) {
    s += '.';
    s += std::to_string(i);
  }
  return s;
}

namespace {

std::size_t count_nodes(const TreeNode* n,
                        std::unordered_map<const TreeNode*, std::size_t>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  std::size_t total = 1;
  for (const auto& c : n->children) total += count_nodes(c.get(), memo);
  memo[n] = total;
  return total;
}

}  // namespace

std::size_t tree_node_count(const TreeDerivation& d) {
  std::unordered_map<const TreeNode*, std::size_t> memo;
  return count_nodes(d.root.get(), memo);
}

namespace {

CheckReport check_node(const TreeNode* n, Mode mode, TreeAddress& addr) {
  const std::string where = address_to_string(addr);
  switch (n->rule) {
    case RuleKind::Assume:
      if (!n->children.empty()) {
        return CheckReport::fail(where, "assumption with premises");
      }
      break;
    case RuleKind::ImpIntro: {
      if (n->children.size() != 1) {
        return CheckReport::fail(where, "impI needs exactly one premise");
      }
      if (!n->conclusion.is_imp()) {
        return CheckReport::fail(where, "impI conclusion is not an implication",
                                 "an implication",
                                 render_formula(n->conclusion));
      }
      Formula body = n->children[0]->conclusion;
      if (n->conclusion.consequent() != body) {
        return CheckReport::fail(
            where, "conclusion mismatch",
            render_formula(Formula::imp(n->conclusion.antecedent(), body)),
            render_formula(n->conclusion));
      }
      break;
    }
    case RuleKind::ImpElim: {
      if (n->children.size() != 2) {
        return CheckReport::fail(where,
                                 "impE needs premises [minor, major]");
      }
      Formula minor = n->children[0]->conclusion;
      Formula major = n->children[1]->conclusion;
      if (!major.is_imp()) {
        return CheckReport::fail(where,
                                 "impE major premise is not an implication",
                                 "an implication", render_formula(major));
      }
      if (major.antecedent() != minor) {
        return CheckReport::fail(where, "minor premise mismatch",
                                 render_formula(major.antecedent()),
                                 render_formula(minor));
      }
      if (major.consequent() != n->conclusion) {
        return CheckReport::fail(where, "conclusion mismatch",
                                 render_formula(major.consequent()),
                                 render_formula(n->conclusion));
      }
      break;
    }
    case RuleKind::Rep: {
      if (mode != Mode::NmPlus) {
        return CheckReport::fail(where, "repetition rule outside nm+ mode");
      }
      if (n->children.empty()) {
        return CheckReport::fail(where, "rep needs at least one premise");
      }
      for (const auto& c : n->children) {
        if (c->conclusion != n->conclusion) {
          return CheckReport::fail(where, "conclusion mismatch",
                                   render_formula(n->conclusion),
                                   render_formula(c->conclusion));
        }
      }
      break;
    }
  }
  for (std::size_t i = 0; i < n->children.size(); ++i) {
    addr.push_back(i);
    CheckReport r = check_node(n->children[i].get(), mode, addr);
    addr.pop_back();
    if (!r.ok()) return r;
  }
  return CheckReport::valid();
}

}  // namespace

CheckReport check_tree(const TreeDerivation& d) {
  if (!d.root) return CheckReport::fail("root", "empty derivation");
  TreeAddress addr;
  return check_node(d.root.get(), d.mode, addr);
}

namespace {

void collect_paths(const TreeNode* n, std::vector<const TreeNode*>& stack,
                   std::vector<DeductivePath>& out) {
  stack.push_back(n);
  if (n->rule == RuleKind::Assume) {
    DeductivePath p;
    p.nodes.assign(stack.rbegin(), stack.rend());
    out.push_back(std::move(p));
  }
  for (const auto& c : n->children) collect_paths(c.get(), stack, out);
  stack.pop_back();
}

}  // namespace

std::vector<DeductivePath> enumerate_tree_paths(const TreeDerivation& d) {
  std::vector<DeductivePath> out;
  std::vector<const TreeNode*> stack;
  collect_paths(d.root.get(), stack, out);
  return out;
}

bool is_path_closed(const DeductivePath& p) {
  Formula leaf = p.leaf_formula();
  for (std::size_t i = 1; i < p.nodes.size(); ++i) {
    const TreeNode* n = p.nodes[i];
    if (n->rule == RuleKind::ImpIntro && n->conclusion.is_imp() &&
        n->conclusion.antecedent() == leaf) {
      return true;
    }
  }
  return false;
}

namespace {

// Closure only depends on which ImpIntro antecedents occur above a leaf,
// so one walk with a running multiset decides every path at once.
bool all_leaves_closed(const TreeNode* n,
                       std::map<Formula, std::size_t>& intro_above) {
  if (n->rule == RuleKind::Assume) {
    auto it = intro_above.find(n->conclusion);
    return it != intro_above.end() && it->second > 0;
  }
  const bool is_intro = n->rule == RuleKind::ImpIntro && n->conclusion.is_imp();
  if (is_intro) ++intro_above[n->conclusion.antecedent()];
  bool ok = true;
  for (const auto& c : n->children) {
    if (!all_leaves_closed(c.get(), intro_above)) {
      ok = false;
      break;
    }
  }
  if (is_intro) --intro_above[n->conclusion.antecedent()];
  return ok;
}

}  // namespace

bool tree_proves(const TreeDerivation& d) {
  std::map<Formula, std::size_t> intro_above;
  return all_leaves_closed(d.root.get(), intro_above);
}

namespace {

// Bound variable available to the generator: the antecedent of an ImpIntro
// node that will be constructed above the current position.
struct Binder {
  Formula formula;
  int label;
};

class ProofGenerator {
 public:
  ProofGenerator(std::uint64_t seed, const std::vector<std::string>& atoms)
      : rng_(seed) {
    for (const auto& a : atoms) atoms_.push_back(Formula::var(a));
    if (atoms_.empty()) {
      throw std::invalid_argument("generate_random_proof: no atoms");
    }
  }

  TreeNodePtr build(std::size_t depth) {
    std::vector<Binder> env;
    return gen(env, depth);
  }

 private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  bool chance(int percent) { return pick(100) < std::size_t(percent); }

  Formula random_formula(std::size_t budget) {
    if (budget < 3 || chance(45)) return atoms_[pick(atoms_.size())];
    std::size_t left = 1 + pick(budget - 2);
    return Formula::imp(random_formula(left), random_formula(budget - 1 - left));
  }

  TreeNodePtr var_leaf(const std::vector<Binder>& env) {
    const Binder& b = env[pick(env.size())];
    return assume(b.formula, b.label);
  }

  TreeNodePtr lambda(std::vector<Binder>& env, std::size_t depth) {
    Formula antecedent = random_formula(5);
    int label = next_label_++;
    env.push_back({antecedent, label});
    TreeNodePtr body = gen(env, depth == 0 ? 0 : depth - 1);
    env.pop_back();
    return imp_intro(antecedent, std::move(body), label);
  }

  TreeNodePtr apply(std::vector<Binder>& env, std::size_t depth) {
    TreeNodePtr minor = gen(env, depth - 1);
    Formula arg = minor->conclusion;
    // Reuse a bound implication with the right antecedent when one exists.
    if (chance(50)) {
      for (const Binder& b : env) {
        if (b.formula.is_imp() && b.formula.antecedent() == arg) {
          return imp_elim(std::move(minor), assume(b.formula, b.label));
        }
      }
    }
    int label = next_label_++;
    env.push_back({arg, label});
    TreeNodePtr body = gen(env, depth - 1);
    env.pop_back();
    TreeNodePtr major = imp_intro(arg, std::move(body), label);
    return imp_elim(std::move(minor), std::move(major));
  }

  // Two distinct subproofs of one formula, each under a vacuous
  // introduction of the same antecedent, consumed by a curried major
  // premise.  This is the shape that same-conclusion merging compresses.
  TreeNodePtr diamond(std::vector<Binder>& env, std::size_t depth) {
    TreeNodePtr left = gen(env, depth - 1);
    Formula t1 = left->conclusion;
    int id_label = next_label_++;
    TreeNodePtr right =
        imp_elim(left, imp_intro(t1, assume(t1, id_label), id_label));
    Formula gamma = random_formula(3);
    TreeNodePtr c1 = imp_intro(gamma, left);
    TreeNodePtr c2 = imp_intro(gamma, std::move(right));
    Formula gt = Formula::imp(gamma, t1);
    int lu = next_label_++;
    int lv = next_label_++;
    env.push_back({gt, lu});
    env.push_back({gt, lv});
    TreeNodePtr body = gen(env, depth - 1);
    env.pop_back();
    env.pop_back();
    TreeNodePtr major = imp_intro(gt, imp_intro(gt, std::move(body), lv), lu);
    return imp_elim(std::move(c1),
                    imp_elim(std::move(c2), std::move(major)));
  }

  TreeNodePtr gen(std::vector<Binder>& env, std::size_t depth) {
    if (depth == 0) {
      if (!env.empty()) return var_leaf(env);
      return lambda(env, 0);
    }
    const std::size_t roll = pick(100);
    if (!env.empty() && roll < 30) return var_leaf(env);
    if (roll < 62) return lambda(env, depth);
    if (roll < 82) return apply(env, depth);
    return diamond(env, depth);
  }

  std::mt19937_64 rng_;
  std::vector<Formula> atoms_;
  int next_label_ = 1;
};

}  // namespace

TreeDerivation generate_random_proof(std::uint64_t seed, std::size_t max_depth,
                                     const std::vector<std::string>& atoms) {
  if (max_depth < 1) {
    throw std::invalid_argument("generate_random_proof: max_depth < 1");
  }
  ProofGenerator g(seed, atoms);
  return TreeDerivation{g.build(max_depth), Mode::Nm};
}

namespace {

void signature_node(const TreeNode* n, std::map<int, int>& label_canon,
                    std::string& out) {
  out += '(';
  out += rule_name(n->rule);
  out += ' ';
  out += std::to_string(n->conclusion.id());
  if (n->label) {
    auto it = label_canon.try_emplace(*n->label, int(label_canon.size() + 1));
    out += " l";
    out += std::to_string(it.first->second);
  }
  for (const auto& c : n->children) {
    out += ' ';
    signature_node(c.get(), label_canon, out);
  }
  out += ')';
}

}  // namespace

std::string tree_signature(const TreeDerivation& d) {
  std::string out = mode_name(d.mode);
  out += ' ';
  std::map<int, int> label_canon;
  signature_node(d.root.get(), label_canon, out);
  return out;
}

}  // namespace nm
