#include "nm/dag.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace nm {

ColorSet::ColorSet(std::initializer_list<std::uint32_t> colors) {
  for (std::uint32_t c : colors) insert(c);
}

ColorSet ColorSet::full(std::uint32_t num_colors) {
  ColorSet s;
  s.colors_.resize(num_colors);
  for (std::uint32_t c = 1; c <= num_colors; ++c) s.colors_[c - 1] = c;
  return s;
}

ColorSet ColorSet::singleton(std::uint32_t color) {
  ColorSet s;
  s.colors_.push_back(color);
  return s;
}

void ColorSet::insert(std::uint32_t color) {
  auto it = std::lower_bound(colors_.begin(), colors_.end(), color);
  if (it == colors_.end() || *it != color) colors_.insert(it, color);
}

bool ColorSet::contains(std::uint32_t color) const {
  return std::binary_search(colors_.begin(), colors_.end(), color);
}

bool ColorSet::intersects(const ColorSet& other) const {
  auto a = colors_.begin();
  auto b = other.colors_.begin();
  while (a != colors_.end() && b != other.colors_.end()) {
    if (*a == *b) return true;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return false;
}

ColorSet ColorSet::intersect(const ColorSet& other) const {
  ColorSet out;
  std::set_intersection(colors_.begin(), colors_.end(), other.colors_.begin(),
                        other.colors_.end(), std::back_inserter(out.colors_));
  return out;
}

std::uint32_t ColorSet::max_color() const {
  return colors_.empty() ? 0 : colors_.back();
}

std::string ColorSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < colors_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(colors_[i]);
  }
  s += '}';
  return s;
}

const ColorSet* EdgeColoring::find(const EdgeRef& e) const {
  auto it = edges.find(e);
  return it == edges.end() ? nullptr : &it->second;
}

namespace {

std::string node_where(NodeId id) { return "node " + std::to_string(id); }

CheckReport check_local_rule(const DagDerivation& d, NodeId id) {
  const DagNode& n = d.nodes[id];
  const std::string where = node_where(id);
  const auto premise_formula = [&](std::size_t i) {
    return d.nodes[n.premises[i]].conclusion;
  };
  switch (n.rule) {
    case RuleKind::Assume:
      if (!n.premises.empty()) {
        return CheckReport::fail(where, "assumption with premises");
      }
      break;
    case RuleKind::ImpIntro: {
      if (n.premises.size() != 1) {
        return CheckReport::fail(where, "impI needs exactly one premise");
      }
      if (!n.conclusion.is_imp()) {
        return CheckReport::fail(where, "impI conclusion is not an implication",
                                 "an implication",
                                 render_formula(n.conclusion));
      }
      if (n.conclusion.consequent() != premise_formula(0)) {
        return CheckReport::fail(
            where, "conclusion mismatch",
            render_formula(
                Formula::imp(n.conclusion.antecedent(), premise_formula(0))),
            render_formula(n.conclusion));
      }
      break;
    }
    case RuleKind::ImpElim: {
      if (n.premises.size() != 2) {
        return CheckReport::fail(where, "impE needs premises [minor, major]");
      }
      Formula minor = premise_formula(0);
      Formula major = premise_formula(1);
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
      if (major.consequent() != n.conclusion) {
        return CheckReport::fail(where, "conclusion mismatch",
                                 render_formula(major.consequent()),
                                 render_formula(n.conclusion));
      }
      break;
    }
    case RuleKind::Rep: {
      if (d.mode != Mode::NmPlus) {
        return CheckReport::fail(where, "repetition rule outside nm+ mode");
      }
      if (n.premises.empty()) {
        return CheckReport::fail(where, "rep needs at least one premise");
      }
      for (std::size_t i = 0; i < n.premises.size(); ++i) {
        if (premise_formula(i) != n.conclusion) {
          return CheckReport::fail(where, "conclusion mismatch",
                                   render_formula(n.conclusion),
                                   render_formula(premise_formula(i)));
        }
      }
      break;
    }
  }
  return CheckReport::valid();
}

// Iterative three-color DFS over the premise relation; returns a cycle as a
// node chain when one exists.
std::optional<std::vector<NodeId>> find_cycle(const DagDerivation& d) {
  enum : char { White, Gray, Black };
  std::vector<char> state(d.nodes.size(), White);
  std::vector<NodeId> stack;
  struct Frame {
    NodeId node;
    std::size_t next = 0;
  };
  for (NodeId start = 0; start < d.nodes.size(); ++start) {
    if (state[start] != White) continue;
    std::vector<Frame> frames{{start}};
    state[start] = Gray;
    stack.push_back(start);
    while (!frames.empty()) {
      Frame& f = frames.back();
      const DagNode& n = d.nodes[f.node];
      if (f.next < n.premises.size()) {
        NodeId next = n.premises[f.next++];
        if (state[next] == Gray) {
          auto it = std::find(stack.begin(), stack.end(), next);
          std::vector<NodeId> cycle(it, stack.end());
          cycle.push_back(next);
          return cycle;
        }
        if (state[next] == White) {
          state[next] = Gray;
          stack.push_back(next);
          frames.push_back({next});
        }
      } else {
        state[f.node] = Black;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
  return std::nullopt;
}

}  // namespace

CheckReport check_dag_structure(const DagDerivation& d) {
  if (d.nodes.empty()) return CheckReport::fail("root", "empty derivation");
  if (d.root >= d.nodes.size()) {
    return CheckReport::fail("root", "root id out of range");
  }
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    for (NodeId p : d.nodes[id].premises) {
      if (p >= d.nodes.size()) {
        return CheckReport::fail(node_where(id), "premise id out of range");
      }
    }
  }

  if (auto cycle = find_cycle(d)) {
    std::string chain;
    for (NodeId n : *cycle) {
      if (!chain.empty()) chain += " -> ";
      chain += std::to_string(n);
    }
    return CheckReport::fail(node_where(cycle->front()), "cycle: " + chain);
  }

  std::vector<std::size_t> parent_count(d.nodes.size(), 0);
  for (const DagNode& n : d.nodes) {
    for (NodeId p : n.premises) ++parent_count[p];
  }
  if (parent_count[d.root] != 0) {
    return CheckReport::fail(node_where(d.root), "root has a parent");
  }
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    if (id != d.root && parent_count[id] == 0) {
      return CheckReport::fail(node_where(id),
                               "orphan node (no conclusion consumes it)");
    }
  }

  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    CheckReport r = check_local_rule(d, id);
    if (!r.ok()) return r;
  }

  // The coloring must cover exactly the premise edges.
  std::set<EdgeRef> expected;
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    const DagNode& n = d.nodes[id];
    for (std::uint32_t slot = 0; slot < n.premises.size(); ++slot) {
      expected.insert(EdgeRef{n.premises[slot], id, slot});
    }
  }
  for (const EdgeRef& e : expected) {
    const ColorSet* colors = d.coloring.find(e);
    if (!colors || colors->empty()) {
      return CheckReport::fail(
          node_where(e.parent),
          "missing color on premise edge " + std::to_string(e.child) + " -> " +
              std::to_string(e.parent) + " slot " + std::to_string(e.slot));
    }
    if (colors->values().front() < 1 ||
        colors->max_color() > d.coloring.num_colors) {
      return CheckReport::fail(
          node_where(e.parent),
          "color outside 1.." + std::to_string(d.coloring.num_colors) +
              " on premise edge of slot " + std::to_string(e.slot));
    }
  }
  for (const auto& [edge, colors] : d.coloring.edges) {
    if (!expected.count(edge)) {
      return CheckReport::fail(node_where(edge.parent),
                               "color entry for nonexistent edge " +
                                   std::to_string(edge.child) + " -> " +
                                   std::to_string(edge.parent) + " slot " +
                                   std::to_string(edge.slot));
    }
  }

  // Determinism: at a Rep node every color picks at most one premise.
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    const DagNode& n = d.nodes[id];
    if (n.rule != RuleKind::Rep) continue;
    std::map<std::uint32_t, std::size_t> uses;
    for (std::uint32_t slot = 0; slot < n.premises.size(); ++slot) {
      const ColorSet* colors =
          d.coloring.find(EdgeRef{n.premises[slot], id, slot});
      if (!colors) continue;  // reported above
      for (std::uint32_t c : colors->values()) {
        if (++uses[c] > 1) {
          return CheckReport::fail(
              node_where(id),
              "ambiguous unfolding for color " + std::to_string(c));
        }
      }
    }
  }
  return CheckReport::valid();
}

Formula dag_path_leaf_formula(const DagDerivation& d, const DagPath& p) {
  return d.nodes[p.nodes.front()].conclusion;
}

DagPath classify_dag_path(const DagDerivation& d, std::vector<NodeId> nodes,
                          std::vector<std::uint32_t> slots) {
  DagPath p;
  p.nodes = std::move(nodes);
  p.slots = std::move(slots);

  Formula leaf = d.nodes[p.nodes.front()].conclusion;
  p.closed = false;
  for (std::size_t i = 1; i < p.nodes.size(); ++i) {
    const DagNode& n = d.nodes[p.nodes[i]];
    if (n.rule == RuleKind::ImpIntro && n.conclusion.is_imp() &&
        n.conclusion.antecedent() == leaf) {
      p.closed = true;
      break;
    }
  }

  // Intersection over an empty edge set is the full palette.
  ColorSet running = ColorSet::full(d.coloring.num_colors);
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    const ColorSet* colors = d.coloring.find(
        EdgeRef{p.nodes[i], p.nodes[i + 1], p.slots[i]});
    running = colors ? running.intersect(*colors) : ColorSet{};
    if (running.empty()) break;
  }
  p.regular = !running.empty();
  return p;
}

namespace {

struct ParentEdge {
  NodeId parent;
  std::uint32_t slot;
};

std::vector<std::vector<ParentEdge>> build_parents(const DagDerivation& d) {
  std::vector<std::vector<ParentEdge>> parents(d.nodes.size());
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    const DagNode& n = d.nodes[id];
    for (std::uint32_t slot = 0; slot < n.premises.size(); ++slot) {
      parents[n.premises[slot]].push_back({id, slot});
    }
  }
  for (auto& v : parents) {
    std::sort(v.begin(), v.end(), [](const ParentEdge& a, const ParentEdge& b) {
      return a.parent != b.parent ? a.parent < b.parent : a.slot < b.slot;
    });
  }
  return parents;
}

void enumerate_from(const DagDerivation& d,
                    const std::vector<std::vector<ParentEdge>>& parents,
                    NodeId node, std::vector<NodeId>& nodes,
                    std::vector<std::uint32_t>& slots, std::size_t limit,
                    std::vector<DagPath>& out) {
  nodes.push_back(node);
  if (node == d.root) {
    if (out.size() >= limit) throw PathExplosionError(limit);
    out.push_back(classify_dag_path(d, nodes, slots));
  }
  for (const ParentEdge& e : parents[node]) {
    slots.push_back(e.slot);
    enumerate_from(d, parents, e.parent, nodes, slots, limit, out);
    slots.pop_back();
  }
  nodes.pop_back();
}

}  // namespace

std::vector<DagPath> enumerate_dag_paths(const DagDerivation& d,
                                         std::size_t limit) {
  auto parents = build_parents(d);
  std::vector<DagPath> out;
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> slots;
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    if (d.nodes[id].rule != RuleKind::Assume) continue;
    enumerate_from(d, parents, id, nodes, slots, limit, out);
  }
  return out;
}

namespace {

// Multi-source BFS toward the root through parent edges, skipping every
// ImpIntro node that concludes alpha -> _ (those close a path from alpha)
// and, when `color` is set, every edge whose color set misses it.
std::optional<DagPath> find_open_route(
    const DagDerivation& d, const std::vector<std::vector<ParentEdge>>& parents,
    const std::vector<NodeId>& sources, Formula alpha,
    std::optional<std::uint32_t> color, std::size_t& edge_visits) {
  const NodeId none = static_cast<NodeId>(d.nodes.size());
  std::vector<char> blocked(d.nodes.size(), 0);
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    const DagNode& n = d.nodes[id];
    blocked[id] = n.rule == RuleKind::ImpIntro && n.conclusion.is_imp() &&
                  n.conclusion.antecedent() == alpha;
  }

  std::vector<char> seen(d.nodes.size(), 0);
  std::vector<NodeId> prev_node(d.nodes.size(), none);
  std::vector<std::uint32_t> prev_slot(d.nodes.size(), 0);
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }

  NodeId hit = none;
  while (!queue.empty() && hit == none) {
    NodeId cur = queue.front();
    queue.pop_front();
    if (cur == d.root) {
      hit = cur;
      break;
    }
    for (const ParentEdge& e : parents[cur]) {
      ++edge_visits;
      if (seen[e.parent] || blocked[e.parent]) continue;
      if (color) {
        const ColorSet* colors =
            d.coloring.find(EdgeRef{cur, e.parent, e.slot});
        if (!colors || !colors->contains(*color)) continue;
      }
      seen[e.parent] = 1;
      prev_node[e.parent] = cur;
      prev_slot[e.parent] = e.slot;
      queue.push_back(e.parent);
    }
  }
  if (hit == none) return std::nullopt;

  std::vector<NodeId> route{hit};
  std::vector<std::uint32_t> slots;
  while (prev_node[route.back()] != none) {
    slots.push_back(prev_slot[route.back()]);
    route.push_back(prev_node[route.back()]);
  }
  std::reverse(route.begin(), route.end());
  std::reverse(slots.begin(), slots.end());
  return classify_dag_path(d, std::move(route), std::move(slots));
}

// Assume leaves grouped by conclusion, in ascending first-leaf order.
std::vector<std::pair<Formula, std::vector<NodeId>>> leaf_groups(
    const DagDerivation& d) {
  std::vector<std::pair<Formula, std::vector<NodeId>>> groups;
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    if (d.nodes[id].rule != RuleKind::Assume) continue;
    Formula f = d.nodes[id].conclusion;
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == f; });
    if (it == groups.end()) {
      groups.push_back({f, {id}});
    } else {
      it->second.push_back(id);
    }
  }
  return groups;
}

}  // namespace

ProvabilityResult dag_check_naive(const DagDerivation& d) {
  ProvabilityResult result;
  auto parents = build_parents(d);
  for (const auto& [alpha, leaves] : leaf_groups(d)) {
    auto open = find_open_route(d, parents, leaves, alpha, std::nullopt,
                                result.edge_visits);
    if (open) {
      result.proves = false;
      result.open_path = std::move(open);
      return result;
    }
  }
  result.proves = true;
  return result;
}

ProvabilityResult dag_check_regular(const DagDerivation& d) {
  ProvabilityResult result;
  auto parents = build_parents(d);
  auto groups = leaf_groups(d);
  for (std::uint32_t c = 1; c <= d.coloring.num_colors; ++c) {
    for (const auto& [alpha, leaves] : groups) {
      auto open =
          find_open_route(d, parents, leaves, alpha, c, result.edge_visits);
      if (open) {
        result.proves = false;
        result.open_path = std::move(open);
        return result;
      }
    }
  }
  result.proves = true;
  return result;
}

bool dag_proves_naive(const DagDerivation& d) {
  return dag_check_naive(d).proves;
}

bool dag_proves_regular(const DagDerivation& d) {
  return dag_check_regular(d).proves;
}

std::string dag_signature(const DagDerivation& d) {
  // Canonical node order: DFS from the root along premise lists.
  std::vector<NodeId> order;
  std::vector<std::int64_t> canon(d.nodes.size(), -1);
  std::function<void(NodeId)> visit = [&](NodeId id) {
    if (canon[id] >= 0) return;
    canon[id] = static_cast<std::int64_t>(order.size());
    order.push_back(id);
    for (NodeId p : d.nodes[id].premises) visit(p);
  };
  visit(d.root);

  std::map<int, int> label_canon;
  std::string out = mode_name(d.mode);
  out += "; k=" + std::to_string(d.coloring.num_colors) + "; ";
  std::vector<EdgeRef> edge_order;
  for (NodeId id : order) {
    const DagNode& n = d.nodes[id];
    out += '(';
    out += rule_name(n.rule);
    out += ' ';
    out += std::to_string(n.conclusion.id());
    if (n.label) {
      auto it = label_canon.try_emplace(*n.label, int(label_canon.size() + 1));
      out += " l" + std::to_string(it.first->second);
    }
    out += " [";
    for (std::size_t i = 0; i < n.premises.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(canon[n.premises[i]]);
      edge_order.push_back(
          EdgeRef{n.premises[i], id, static_cast<std::uint32_t>(i)});
    }
    out += "])";
  }

  // Colors are identified by the set of edges carrying them, which is what
  // survives any renaming; sort colors by that membership pattern.
  std::vector<std::pair<std::string, std::uint32_t>> membership;
  for (std::uint32_t c = 1; c <= d.coloring.num_colors; ++c) {
    std::string bits(edge_order.size(), '0');
    for (std::size_t e = 0; e < edge_order.size(); ++e) {
      const ColorSet* colors = d.coloring.find(edge_order[e]);
      if (colors && colors->contains(c)) bits[e] = '1';
    }
    membership.push_back({std::move(bits), c});
  }
  std::sort(membership.begin(), membership.end());
  std::vector<std::uint32_t> color_canon(d.coloring.num_colors + 1, 0);
  for (std::size_t i = 0; i < membership.size(); ++i) {
    color_canon[membership[i].second] = static_cast<std::uint32_t>(i + 1);
  }
  out += " colors:";
  for (const EdgeRef& e : edge_order) {
    const ColorSet* colors = d.coloring.find(e);
    std::vector<std::uint32_t> mapped;
    if (colors) {
      for (std::uint32_t c : colors->values()) mapped.push_back(color_canon[c]);
      std::sort(mapped.begin(), mapped.end());
    }
    out += " {";
    for (std::size_t i = 0; i < mapped.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(mapped[i]);
    }
    out += '}';
  }
  return out;
}

}  // namespace nm
