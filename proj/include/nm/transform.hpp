#pragma once

#include <cstddef>
#include <vector>

#include "nm/dag.hpp"
#include "nm/tree.hpp"

namespace nm {

// One merge: >= 2 disjoint subtrees with equal conclusions, plus the number
// of congruent unary ancestor steps to share above the inserted Rep node.
struct MergeGroup {
  std::vector<TreeAddress> members;
  std::size_t shared_suffix = 0;  // s; the Rep node itself is not counted
};

struct MergePlan {
  std::vector<MergeGroup> groups;

  bool empty() const { return groups.empty(); }
};

// Identity embedding: one dag node per tree node.  Rep-free trees get a
// single color; trees that already contain Rep nodes are colored per leaf
// so that the Rep determinism condition holds.
DagDerivation tree_to_dag(const TreeDerivation& t);

// Maximal identical-subtree sharing (discharge labels included in identity).
// Preserves the multiset of leaf-to-root formula sequences.
// pre: check_tree(t).ok()
DagDerivation hashcons(const TreeDerivation& t);

// Merge each group under one Rep(n) node, share the s congruent ancestor
// steps above it, and reattach the members' continuations as parents of the
// shared suffix top.  Emits the per-branch edge coloring.  Throws
// InvalidPlanError on the first congruence or disjointness violation.
// pre: check_tree(t).ok()
DagDerivation compress(const TreeDerivation& t, const MergePlan& plan);

// Greedy default plan: groups of pairwise-disjoint same-conclusion nodes
// whose ancestor steps stay congruent for at least one step (s >= 1).
// pre: check_tree(t).ok()
MergePlan find_merge_plan(const TreeDerivation& t);

// Recursive duplication from the root under a color context; at Rep nodes
// only premises whose edge colors meet the context are kept, and Rep nodes
// with a single kept premise are elided.  Throws UnfoldAmbiguityError when
// a nonempty context selects no premise of a Rep node.
// pre: check_dag_structure(d).ok()
TreeDerivation unfold(const DagDerivation& d);

}  // namespace nm
