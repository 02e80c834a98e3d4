#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "nm/dag.hpp"
#include "nm/document.hpp"
#include "nm/tree.hpp"

namespace nmtest {

inline std::string fixture_path(const std::string& name) {
  return std::string(NM_FIXTURES_DIR) + "/" + name;
}

inline nm::TreeDerivation load_tree_fixture(const std::string& name) {
  return nm::tree_from_document(nm::load_document(fixture_path(name)));
}

inline nm::DagDerivation load_dag_fixture(const std::string& name) {
  return nm::dag_from_document(nm::load_document(fixture_path(name)));
}

// Independent leaf counter (path-count oracle for trees).
inline std::size_t count_leaves(const nm::TreeNode* n) {
  if (n->children.empty()) return 1;
  std::size_t total = 0;
  for (const auto& c : n->children) total += count_leaves(c.get());
  return total;
}

// Independent dag path counter: product-free recursive count of
// leaf-to-root routes over the parent relation.
inline std::size_t count_dag_paths(const nm::DagDerivation& d) {
  std::vector<std::vector<nm::NodeId>> parents(d.nodes.size());
  for (nm::NodeId id = 0; id < d.nodes.size(); ++id) {
    for (nm::NodeId p : d.nodes[id].premises) parents[p].push_back(id);
  }
  std::map<nm::NodeId, std::size_t> memo;
  auto count = [&](auto&& self, nm::NodeId at) -> std::size_t {
    if (at == d.root) return 1;
    auto it = memo.find(at);
    if (it != memo.end()) return it->second;
    std::size_t total = 0;
    for (nm::NodeId p : parents[at]) total += self(self, p);
    memo[at] = total;
    return total;
  };
  std::size_t total = 0;
  for (nm::NodeId id = 0; id < d.nodes.size(); ++id) {
    if (d.nodes[id].rule == nm::RuleKind::Assume) total += count(count, id);
  }
  return total;
}

// Formula sequence of a path, as rendered text.
inline std::vector<std::string> tree_path_formulas(const nm::DeductivePath& p) {
  std::vector<std::string> out;
  for (const nm::TreeNode* n : p.nodes) {
    out.push_back(nm::render_formula(n->conclusion));
  }
  return out;
}

inline std::vector<std::string> dag_path_formulas(const nm::DagDerivation& d,
                                                  const nm::DagPath& p) {
  std::vector<std::string> out;
  for (nm::NodeId id : p.nodes) {
    out.push_back(nm::render_formula(d.nodes[id].conclusion));
  }
  return out;
}

template <typename T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace nmtest
