#include "nm/transform.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace nm {

namespace {

bool is_prefix(const TreeAddress& a, const TreeAddress& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

bool prefix_related(const TreeAddress& a, const TreeAddress& b) {
  return is_prefix(a, b) || is_prefix(b, a);
}

TreeAddress ancestor(const TreeAddress& addr, std::size_t steps) {
  return TreeAddress(addr.begin(), addr.end() - steps);
}

bool has_wide_rep(const TreeNode* n) {
  if (n->rule == RuleKind::Rep && n->children.size() >= 2) return true;
  for (const auto& c : n->children) {
    if (has_wide_rep(c.get())) return true;
  }
  return false;
}

Mode mode_of_nodes(const std::vector<DagNode>& nodes) {
  for (const DagNode& n : nodes) {
    if (n.rule == RuleKind::Rep) return Mode::NmPlus;
  }
  return Mode::Nm;
}

// Identity embedding / hash consing in one pass.  Colors: a single color
// for Rep-free trees; otherwise one color per leaf occurrence with each
// edge carrying the leaves below it, which keeps Rep premises disjoint.
class DagBuilder {
 public:
  DagBuilder(const TreeDerivation& t, bool share)
      : share_(share), leaf_colors_(has_wide_rep(t.root.get())) {
    root_ = build(t.root.get()).first;
    coloring_.num_colors =
        leaf_colors_ ? std::max<std::uint32_t>(next_leaf_ - 1, 1) : 1;
  }

  DagDerivation take() {
    DagDerivation d;
    d.nodes = std::move(nodes_);
    d.root = root_;
    d.coloring = std::move(coloring_);
    d.mode = mode_of_nodes(d.nodes);
    return d;
  }

 private:
  using Key = std::tuple<int, FormulaId, int, std::vector<NodeId>>;

  std::pair<NodeId, ColorSet> build(const TreeNode* n) {
    std::vector<NodeId> kids;
    std::vector<ColorSet> kid_leaves;
    for (const auto& c : n->children) {
      auto [id, leaves] = build(c.get());
      kids.push_back(id);
      kid_leaves.push_back(std::move(leaves));
    }

    NodeId id;
    if (share_) {
      Key key{int(n->rule), n->conclusion.id(), n->label ? *n->label : -1,
              kids};
      auto it = memo_.find(key);
      if (it != memo_.end()) {
        id = it->second;
      } else {
        id = add_node(n, kids);
        memo_.emplace(std::move(key), id);
      }
    } else {
      id = add_node(n, kids);
    }

    ColorSet leaves;
    if (leaf_colors_) {
      if (n->rule == RuleKind::Assume) leaves.insert(next_leaf_++);
      for (std::size_t slot = 0; slot < kids.size(); ++slot) {
        ColorSet& edge =
            coloring_.edges[EdgeRef{kids[slot], id,
                                    static_cast<std::uint32_t>(slot)}];
        for (std::uint32_t c : kid_leaves[slot].values()) {
          edge.insert(c);
          leaves.insert(c);
        }
      }
    } else {
      for (std::size_t slot = 0; slot < kids.size(); ++slot) {
        coloring_.edges[EdgeRef{kids[slot], id,
                                static_cast<std::uint32_t>(slot)}] =
            ColorSet{1};
      }
    }
    return {id, std::move(leaves)};
  }

  NodeId add_node(const TreeNode* n, std::vector<NodeId> kids) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(DagNode{n->rule, n->conclusion, n->label, std::move(kids)});
    return id;
  }

  bool share_;
  bool leaf_colors_;
  std::uint32_t next_leaf_ = 1;
  NodeId root_ = 0;
  std::vector<DagNode> nodes_;
  EdgeColoring coloring_;
  std::map<Key, NodeId> memo_;
};

}  // namespace

DagDerivation tree_to_dag(const TreeDerivation& t) {
  return DagBuilder(t, /*share=*/false).take();
}

DagDerivation hashcons(const TreeDerivation& t) {
  return DagBuilder(t, /*share=*/true).take();
}

namespace {

struct GroupContext {
  Formula formula;
  std::vector<TreeAddress> members;
  std::size_t suffix = 0;
  std::vector<TreeAddress> attach_points;  // ancestor(member, suffix)
  std::vector<TreeAddress> suffix_nodes;   // all shared-step copies
  std::vector<std::uint32_t> colors;       // one per member
  ColorSet group_set;
  NodeId top = 0;
  bool built = false;
};

class Compressor {
 public:
  Compressor(const TreeDerivation& t, const MergePlan& plan) : tree_(t) {
    validate(plan);
    root_id_ = build_plain(tree_.root.get(), {}, std::nullopt);
  }

  DagDerivation take() {
    DagDerivation d;
    d.nodes = std::move(nodes_);
    d.root = root_id_;
    d.coloring = std::move(coloring_);
    d.coloring.num_colors = num_colors_;
    d.mode = mode_of_nodes(d.nodes);
    return d;
  }

 private:
  [[noreturn]] static void reject(const std::string& why) {
    throw InvalidPlanError("invalid merge plan: " + why);
  }

  void validate(const MergePlan& plan) {
    if (!plan.empty() && has_wide_rep(tree_.root.get())) {
      reject("input tree already contains multi-premise repetition nodes");
    }
    std::uint32_t next_color = 1;
    for (const MergeGroup& g : plan.groups) {
      GroupContext ctx;
      if (g.members.size() < 2) {
        reject("merge group needs at least two members");
      }
      const TreeNode* first = nullptr;
      for (const TreeAddress& m : g.members) {
        const TreeNode* node;
        try {
          node = node_at(tree_, m);
        } catch (const std::out_of_range&) {
          reject("member address " + address_to_string(m) + " does not exist");
        }
        if (!first) {
          first = node;
          ctx.formula = node->conclusion;
        } else if (node->conclusion != ctx.formula) {
          reject("members conclude different formulas: " +
                 render_formula(ctx.formula) + " vs " +
                 render_formula(node->conclusion));
        }
        if (m.size() < g.shared_suffix + 1) {
          reject("shared suffix above " + address_to_string(m) +
                 " reaches past the root");
        }
        for (const TreeAddress& other : ctx.members) {
          if (prefix_related(other, m)) {
            reject("group members are nested: " + address_to_string(other) +
                   " and " + address_to_string(m));
          }
        }
        ctx.members.push_back(m);
      }
      ctx.suffix = g.shared_suffix;
      for (std::size_t j = 1; j <= g.shared_suffix; ++j) {
        const TreeNode* templ = node_at(tree_, ancestor(g.members[0], j));
        for (const TreeAddress& m : g.members) {
          TreeAddress a = ancestor(m, j);
          const TreeNode* anc = node_at(tree_, a);
          if (anc->children.size() != 1) {
            reject("ancestor step " + std::to_string(j) + " above " +
                   address_to_string(m) + " is not unary");
          }
          if (anc->rule != templ->rule || anc->conclusion != templ->conclusion) {
            reject("ancestor step " + std::to_string(j) + " above " +
                   address_to_string(m) + " is not congruent");
          }
          ctx.suffix_nodes.push_back(std::move(a));
        }
      }
      for (const TreeAddress& m : ctx.members) {
        ctx.attach_points.push_back(ancestor(m, ctx.suffix));
      }
      for (std::size_t i = 0; i < ctx.members.size(); ++i) {
        ctx.colors.push_back(next_color);
        ctx.group_set.insert(next_color);
        ++next_color;
      }
      groups_.push_back(std::move(ctx));
    }
    num_colors_ = std::max<std::uint32_t>(next_color - 1, 1);

    for (std::size_t i = 0; i < groups_.size(); ++i) {
      for (std::size_t j = i + 1; j < groups_.size(); ++j) {
        if (regions_overlap(groups_[i], groups_[j])) {
          reject("merge groups overlap");
        }
      }
    }
    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
      for (std::size_t mi = 0; mi < groups_[gi].members.size(); ++mi) {
        attach_.emplace(groups_[gi].attach_points[mi], std::pair{gi, mi});
      }
    }
  }

  static bool regions_overlap(const GroupContext& a, const GroupContext& b) {
    for (const TreeAddress& ma : a.members) {
      for (const TreeAddress& mb : b.members) {
        if (prefix_related(ma, mb)) return true;
      }
      for (const TreeAddress& sb : b.suffix_nodes) {
        if (prefix_related(ma, sb)) return true;
      }
    }
    for (const TreeAddress& sa : a.suffix_nodes) {
      for (const TreeAddress& mb : b.members) {
        if (prefix_related(mb, sa)) return true;
      }
      for (const TreeAddress& sb : b.suffix_nodes) {
        if (sa == sb) return true;
      }
    }
    return false;
  }

  NodeId add_node(RuleKind rule, Formula conclusion, std::optional<int> label,
                  std::vector<NodeId> premises,
                  const std::vector<ColorSet>& edge_colors) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    for (std::uint32_t slot = 0; slot < premises.size(); ++slot) {
      coloring_.edges[EdgeRef{premises[slot], id, slot}] = edge_colors[slot];
    }
    nodes_.push_back(DagNode{rule, conclusion, label, std::move(premises)});
    return id;
  }

  NodeId build_plain(const TreeNode* n, const TreeAddress& addr,
                     std::optional<std::uint32_t> branch) {
    std::vector<NodeId> kids;
    std::vector<ColorSet> edge_colors;
    TreeAddress child_addr = addr;
    for (std::size_t i = 0; i < n->children.size(); ++i) {
      child_addr.push_back(i);
      auto at = attach_.find(child_addr);
      if (at != attach_.end()) {
        auto [gi, mi] = at->second;
        kids.push_back(group_top(gi));
        edge_colors.push_back(ColorSet::singleton(groups_[gi].colors[mi]));
      } else {
        kids.push_back(build_plain(n->children[i].get(), child_addr, branch));
        edge_colors.push_back(branch ? ColorSet::singleton(*branch)
                                     : ColorSet::full(num_colors_));
      }
      child_addr.pop_back();
    }
    return add_node(n->rule, n->conclusion, n->label, std::move(kids),
                    edge_colors);
  }

  NodeId group_top(std::size_t gi) {
    GroupContext& g = groups_[gi];
    if (g.built) return g.top;
    std::vector<NodeId> member_ids;
    std::vector<ColorSet> member_colors;
    for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
      member_ids.push_back(build_plain(node_at(tree_, g.members[mi]),
                                       g.members[mi], g.colors[mi]));
      member_colors.push_back(ColorSet::singleton(g.colors[mi]));
    }
    NodeId cur = add_node(RuleKind::Rep, g.formula, std::nullopt,
                          std::move(member_ids), member_colors);
    for (std::size_t j = 1; j <= g.suffix; ++j) {
      const TreeNode* templ = node_at(tree_, ancestor(g.members[0], j));
      cur = add_node(templ->rule, templ->conclusion, templ->label, {cur},
                     {g.group_set});
    }
    g.top = cur;
    g.built = true;
    return cur;
  }

  const TreeDerivation& tree_;
  std::vector<GroupContext> groups_;
  std::map<TreeAddress, std::pair<std::size_t, std::size_t>> attach_;
  std::vector<DagNode> nodes_;
  EdgeColoring coloring_;
  std::uint32_t num_colors_ = 1;
  NodeId root_id_ = 0;
};

}  // namespace

DagDerivation compress(const TreeDerivation& t, const MergePlan& plan) {
  if (plan.empty()) return tree_to_dag(t);
  return Compressor(t, plan).take();
}

namespace {

void collect_addresses(const TreeNode* n, TreeAddress& addr,
                       std::vector<std::pair<TreeAddress, const TreeNode*>>& out) {
  out.push_back({addr, n});
  for (std::size_t i = 0; i < n->children.size(); ++i) {
    addr.push_back(i);
    collect_addresses(n->children[i].get(), addr, out);
    addr.pop_back();
  }
}

}  // namespace

MergePlan find_merge_plan(const TreeDerivation& t) {
  MergePlan plan;
  if (has_wide_rep(t.root.get())) return plan;  // see compress()

  std::vector<std::pair<TreeAddress, const TreeNode*>> all;
  TreeAddress scratch;
  collect_addresses(t.root.get(), scratch, all);

  std::vector<Formula> formula_order;
  std::map<Formula, std::vector<std::size_t>> occurrences;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto [it, fresh] = occurrences.try_emplace(all[i].second->conclusion);
    if (fresh) formula_order.push_back(all[i].second->conclusion);
    it->second.push_back(i);
  }

  std::vector<TreeAddress> used_members;
  std::vector<TreeAddress> used_suffix;
  auto overlaps_used = [&](const TreeAddress& a) {
    for (const TreeAddress& m : used_members) {
      if (prefix_related(a, m)) return true;
    }
    for (const TreeAddress& s : used_suffix) {
      if (prefix_related(a, s)) return true;
    }
    return false;
  };

  for (Formula f : formula_order) {
    const auto& occ = occurrences[f];
    if (occ.size() < 2) continue;
    std::vector<TreeAddress> cands;
    for (std::size_t idx : occ) {
      const TreeAddress& a = all[idx].first;
      if (a.empty() || overlaps_used(a)) continue;
      bool nested = false;
      for (const TreeAddress& kept : cands) {
        if (is_prefix(kept, a)) {
          nested = true;
          break;
        }
      }
      if (!nested) cands.push_back(a);
    }
    if (cands.size() < 2) continue;

    // Partition by the first ancestor step; only congruent classes merge.
    // Labels join the congruence key so that merging never collapses two
    // distinct discharge decorations (unfolding stays label-faithful).
    using StepKey = std::tuple<int, FormulaId, int>;
    auto step_key = [](const TreeNode* n) {
      return StepKey{int(n->rule), n->conclusion.id(),
                     n->label ? *n->label : -1};
    };
    std::vector<std::pair<StepKey, std::vector<TreeAddress>>> classes;
    for (const TreeAddress& a : cands) {
      TreeAddress pa = ancestor(a, 1);
      const TreeNode* parent = node_at(t, pa);
      if (parent->children.size() != 1 || overlaps_used(pa)) continue;
      StepKey key = step_key(parent);
      auto it = std::find_if(classes.begin(), classes.end(),
                             [&](const auto& c) { return c.first == key; });
      if (it == classes.end()) {
        classes.push_back({key, {a}});
      } else {
        it->second.push_back(a);
      }
    }

    for (auto& cls : classes) {
      std::vector<TreeAddress>& members = cls.second;
      if (members.size() < 2) continue;
      std::size_t s = 1;
      while (true) {
        const std::size_t j = s + 1;
        bool extend = true;
        const TreeNode* templ = nullptr;
        for (const TreeAddress& m : members) {
          if (m.size() < j + 1) {
            extend = false;
            break;
          }
          TreeAddress a = ancestor(m, j);
          const TreeNode* anc = node_at(t, a);
          if (anc->children.size() != 1 || overlaps_used(a)) {
            extend = false;
            break;
          }
          if (!templ) {
            templ = anc;
          } else if (anc->rule != templ->rule ||
                     anc->conclusion != templ->conclusion ||
                     anc->label != templ->label) {
            extend = false;
            break;
          }
        }
        if (!extend) break;
        s = j;
      }
      MergeGroup group{members, s};
      for (const TreeAddress& m : members) {
        used_members.push_back(m);
        for (std::size_t j = 1; j <= s; ++j) {
          used_suffix.push_back(ancestor(m, j));
        }
      }
      plan.groups.push_back(std::move(group));
    }
  }
  return plan;
}

namespace {

class Unfolder {
 public:
  explicit Unfolder(const DagDerivation& d) : dag_(d) {}

  TreeDerivation run() {
    TreeNodePtr root = visit(dag_.root, ColorSet::full(dag_.coloring.num_colors));
    Mode mode = has_rep_ ? Mode::NmPlus : Mode::Nm;
    return TreeDerivation{std::move(root), mode};
  }

 private:
  TreeNodePtr visit(NodeId id, const ColorSet& context) {
    auto key = std::pair{id, context.values()};
    auto memo = memo_.find(key);
    if (memo != memo_.end()) return memo->second;

    const DagNode& n = dag_.nodes[id];
    TreeNodePtr result;
    if (n.rule == RuleKind::Rep) {
      std::vector<std::pair<NodeId, ColorSet>> kept;
      for (std::uint32_t slot = 0; slot < n.premises.size(); ++slot) {
        ColorSet narrowed = narrow(n.premises[slot], id, slot, context);
        if (!narrowed.empty()) kept.push_back({n.premises[slot], narrowed});
      }
      if (kept.empty()) {
        throw UnfoldAmbiguityError(
            "no premise of rep node " + std::to_string(id) +
            " matches color context " + context.to_string());
      }
      if (kept.size() == 1) {
        result = visit(kept[0].first, kept[0].second);  // Rep(1) elided
      } else {
        std::vector<TreeNodePtr> kids;
        for (const auto& [pid, ctx] : kept) kids.push_back(visit(pid, ctx));
        has_rep_ = true;
        result = make_tree_node(RuleKind::Rep, n.conclusion, std::move(kids),
                                n.label);
      }
    } else {
      std::vector<TreeNodePtr> kids;
      for (std::uint32_t slot = 0; slot < n.premises.size(); ++slot) {
        ColorSet narrowed = narrow(n.premises[slot], id, slot, context);
        if (narrowed.empty()) {
          throw UnfoldAmbiguityError(
              "empty color context entering node " +
              std::to_string(n.premises[slot]) + " from node " +
              std::to_string(id));
        }
        kids.push_back(visit(n.premises[slot], narrowed));
      }
      result = make_tree_node(n.rule, n.conclusion, std::move(kids), n.label);
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  ColorSet narrow(NodeId child, NodeId parent, std::uint32_t slot,
                  const ColorSet& context) const {
    const ColorSet* edge = dag_.coloring.find(EdgeRef{child, parent, slot});
    return edge ? context.intersect(*edge) : ColorSet{};
  }

  const DagDerivation& dag_;
  std::map<std::pair<NodeId, std::vector<std::uint32_t>>, TreeNodePtr> memo_;
  bool has_rep_ = false;
};

}  // namespace

TreeDerivation unfold(const DagDerivation& d) { return Unfolder(d).run(); }

}  // namespace nm
