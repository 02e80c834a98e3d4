#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nm/common.hpp"
#include "nm/formula.hpp"
#include "nm/tree.hpp"

namespace nm {

using NodeId = std::uint32_t;

// Nonempty, sorted set of certificate colors.
class ColorSet {
 public:
  ColorSet() = default;
  ColorSet(std::initializer_list<std::uint32_t> colors);
  static ColorSet full(std::uint32_t num_colors);  // {1..num_colors}
  static ColorSet singleton(std::uint32_t color);

  void insert(std::uint32_t color);
  bool contains(std::uint32_t color) const;
  bool empty() const { return colors_.empty(); }
  std::size_t size() const { return colors_.size(); }
  bool intersects(const ColorSet& other) const;
  ColorSet intersect(const ColorSet& other) const;
  std::uint32_t max_color() const;  // 0 when empty

  const std::vector<std::uint32_t>& values() const { return colors_; }
  std::string to_string() const;

  friend bool operator==(const ColorSet&, const ColorSet&) = default;

 private:
  std::vector<std::uint32_t> colors_;
};

// Directed premise edge: child is the premise node, parent consumes it at
// the given premise slot.  The slot matters because one node may fill two
// slots of the same parent.
struct EdgeRef {
  NodeId child = 0;
  NodeId parent = 0;
  std::uint32_t slot = 0;

  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

// The regularity certificate: every premise edge carries a nonempty color
// set, and at every Rep node each color selects at most one premise edge.
struct EdgeColoring {
  std::uint32_t num_colors = 1;
  std::map<EdgeRef, ColorSet> edges;

  const ColorSet* find(const EdgeRef& e) const;
};

struct DagNode {
  RuleKind rule;
  Formula conclusion;
  std::optional<int> label;
  std::vector<NodeId> premises;
};

// Rooted acyclic rule-labeled multigraph; sharing is expressed by a node
// appearing in several premise lists.
struct DagDerivation {
  std::vector<DagNode> nodes;
  NodeId root = 0;
  Mode mode = Mode::NmPlus;
  EdgeColoring coloring;

  Formula conclusion() const { return nodes[root].conclusion; }
};

// Acyclicity, unique parentless root, local rule validity, total coloring
// and the Rep determinism condition.
CheckReport check_dag_structure(const DagDerivation& d);

// Leaf-to-root path: nodes[i+1] consumes nodes[i] at premise slot slots[i].
struct DagPath {
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> slots;
  bool closed = false;   // some non-leaf node is ImpIntro of leaf -> _
  bool regular = false;  // traversed edges share at least one color

  std::size_t length() const { return nodes.size() - 1; }  // h
};

Formula dag_path_leaf_formula(const DagDerivation& d, const DagPath& p);

// Recomputes the closed/regular classification of an explicit route.
DagPath classify_dag_path(const DagDerivation& d, std::vector<NodeId> nodes,
                          std::vector<std::uint32_t> slots);

// All leaf-to-root paths in deterministic order; throws PathExplosionError
// when more than `limit` exist.  pre: check_dag_structure(d).ok()
std::vector<DagPath> enumerate_dag_paths(const DagDerivation& d,
                                         std::size_t limit);

struct ProvabilityResult {
  bool proves = false;
  std::optional<DagPath> open_path;  // witness when proves == false
  std::size_t edge_visits = 0;       // reachability work, for cost ceilings
};

// "All dag paths closed", decided by per-leaf-formula reachability in the
// subgraph that avoids the closing ImpIntro nodes; no enumeration.
ProvabilityResult dag_check_naive(const DagDerivation& d);

// "All regular paths closed": the same reachability test run per color in
// the subgraph G_c of edges whose color set contains c.
ProvabilityResult dag_check_regular(const DagDerivation& d);

bool dag_proves_naive(const DagDerivation& d);
bool dag_proves_regular(const DagDerivation& d);

// Canonical description modulo node ids, discharge-label renaming and
// color permutation; equal signatures == isomorphic certificates.
std::string dag_signature(const DagDerivation& d);

}  // namespace nm
