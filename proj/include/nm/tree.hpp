#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nm/common.hpp"
#include "nm/formula.hpp"

namespace nm {

class TreeNode;
using TreeNodePtr = std::shared_ptr<const TreeNode>;

// One inference of a tree-like derivation.  Nodes are immutable after
// construction; identical subtrees may share storage, the logical shape is
// still a tree.  Child order is significant: ImpElim children are
// [minor, major].
struct TreeNode {
  RuleKind rule;
  Formula conclusion;
  std::optional<int> label;  // discharge decoration; never affects validity
  std::vector<TreeNodePtr> children;

  TreeNode(RuleKind rule_, Formula conclusion_,
           std::vector<TreeNodePtr> children_, std::optional<int> label_)
      : rule(rule_),
        conclusion(conclusion_),
        label(label_),
        children(std::move(children_)) {}
};

TreeNodePtr make_tree_node(RuleKind rule, Formula conclusion,
                           std::vector<TreeNodePtr> children,
                           std::optional<int> label = std::nullopt);

// Rule-shaped constructors; these compute the forced conclusion and throw
// std::invalid_argument when the premises cannot fit the rule at all.
TreeNodePtr assume(Formula f, std::optional<int> label = std::nullopt);
TreeNodePtr imp_intro(Formula antecedent, TreeNodePtr body,
                      std::optional<int> label = std::nullopt);
TreeNodePtr imp_elim(TreeNodePtr minor, TreeNodePtr major);
TreeNodePtr rep(std::vector<TreeNodePtr> premises);

struct TreeDerivation {
  TreeNodePtr root;
  Mode mode = Mode::Nm;

  Formula conclusion() const { return root->conclusion; }
};

// Child-index path from the root; empty address = root.
using TreeAddress = std::vector<std::size_t>;

const TreeNode* node_at(const TreeDerivation& d, const TreeAddress& addr);
std::string address_to_string(const TreeAddress& addr);

// Number of logical tree nodes (shared storage counted per occurrence).
std::size_t tree_node_count(const TreeDerivation& d);

// Local rule constraints at every node:
//   ImpIntro: conclusion == antecedent -> child conclusion;
//   ImpElim:  children [minor, major], major == minor -> conclusion;
//   Rep(n):   n >= 1 equal premises, NmPlus mode only.
CheckReport check_tree(const TreeDerivation& d);

// Leaf-to-root node sequence; nodes[0] is an Assume leaf, nodes.back() the
// root.  Valid only while the derivation it came from is alive.
struct DeductivePath {
  std::vector<const TreeNode*> nodes;

  Formula leaf_formula() const { return nodes.front()->conclusion; }
  std::size_t length() const { return nodes.size() - 1; }  // h
};

// One path per Assume leaf, in left-to-right leaf order.
// pre: check_tree(d).ok()
std::vector<DeductivePath> enumerate_tree_paths(const TreeDerivation& d);

// A path is closed when some non-leaf node on it (the root included) is an
// ImpIntro conclusion whose antecedent is the leaf formula.
bool is_path_closed(const DeductivePath& p);

// Every deductive path closed.  pre: check_tree(d).ok()
bool tree_proves(const TreeDerivation& d);

// Deterministic generator of valid Nm derivations that prove their
// conclusion by construction (assumptions are only drawn from antecedents
// of ImpIntro nodes built above them).
TreeDerivation generate_random_proof(std::uint64_t seed, std::size_t max_depth,
                                     const std::vector<std::string>& atoms);

// Canonical description of the derivation shape with discharge labels
// renamed by first occurrence; two derivations are equal up to label
// renaming iff their signatures match.
std::string tree_signature(const TreeDerivation& d);

}  // namespace nm
