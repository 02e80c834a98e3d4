#include "nm/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace nm {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& why) { throw SchemaError(why); }

ordered_json parse_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("malformed JSON");
  return j;
}

std::int64_t require_int(const ordered_json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_integer()) {
    bad(std::string("missing or non-integer field '") + field + "'");
  }
  return j[field].get<std::int64_t>();
}

std::string require_string(const ordered_json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_string()) {
    bad(std::string("missing or non-string field '") + field + "'");
  }
  return j[field].get<std::string>();
}

Formula parse_doc_formula(const std::string& text) {
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    bad("bad formula '" + text + "': " + e.what());
  }
}

RuleKind rule_from_string(const std::string& s) {
  if (s == "assume") return RuleKind::Assume;
  if (s == "impI") return RuleKind::ImpIntro;
  if (s == "impE") return RuleKind::ImpElim;
  if (s == "rep") return RuleKind::Rep;
  bad("unknown rule '" + s + "'");
}

}  // namespace

ProofDocument parse_document(const std::string& json_text) {
  ordered_json j = parse_json(json_text);
  if (!j.is_object()) bad("document is not a JSON object");

  ProofDocument doc;
  doc.format_version = static_cast<int>(require_int(j, "format_version"));
  if (doc.format_version != 1) {
    bad("unsupported format_version " + std::to_string(doc.format_version));
  }
  doc.kind = require_string(j, "kind");
  if (doc.kind != "tree" && doc.kind != "dag") {
    bad("kind must be 'tree' or 'dag'");
  }
  doc.mode = require_string(j, "mode");
  if (doc.mode != "nm" && doc.mode != "nm+") {
    bad("mode must be 'nm' or 'nm+'");
  }
  doc.root = require_int(j, "root");

  if (!j.contains("nodes") || !j["nodes"].is_array()) {
    bad("missing 'nodes' array");
  }
  std::set<std::int64_t> ids;
  for (const auto& nj : j["nodes"]) {
    if (!nj.is_object()) bad("node entry is not an object");
    DocNode n;
    n.id = require_int(nj, "id");
    if (!ids.insert(n.id).second) {
      bad("duplicate node id " + std::to_string(n.id));
    }
    n.rule = require_string(nj, "rule");
    rule_from_string(n.rule);
    n.formula = require_string(nj, "formula");
    parse_doc_formula(n.formula);
    if (!nj.contains("premises") || !nj["premises"].is_array()) {
      bad("node " + std::to_string(n.id) + " has no 'premises' array");
    }
    for (const auto& p : nj["premises"]) {
      if (!p.is_number_integer()) bad("non-integer premise id");
      n.premises.push_back(p.get<std::int64_t>());
    }
    if (nj.contains("label")) {
      if (!nj["label"].is_number_integer() || nj["label"].get<int>() < 1) {
        bad("label of node " + std::to_string(n.id) +
            " is not a positive integer");
      }
      n.label = nj["label"].get<int>();
    }
    if (nj.contains("antecedent")) {
      if (n.rule != "impI") {
        bad("antecedent on non-impI node " + std::to_string(n.id));
      }
      n.antecedent = require_string(nj, "antecedent");
      Formula a = parse_doc_formula(*n.antecedent);
      Formula c = parse_doc_formula(n.formula);
      if (c.is_imp() && c.antecedent() != a) {
        bad("antecedent of node " + std::to_string(n.id) +
            " does not match its conclusion");
      }
    }
    doc.nodes.push_back(std::move(n));
  }
  if (doc.nodes.empty()) bad("empty 'nodes' array");
  if (!ids.count(doc.root)) bad("root id not among the nodes");
  for (const DocNode& n : doc.nodes) {
    for (std::int64_t p : n.premises) {
      if (!ids.count(p)) {
        bad("node " + std::to_string(n.id) + " references unknown premise " +
            std::to_string(p));
      }
    }
  }

  if (doc.kind == "tree") {
    if (j.contains("colors")) bad("tree documents carry no colors");
  } else {
    if (!j.contains("colors") || !j["colors"].is_array()) {
      bad("dag documents need a 'colors' array");
    }
    std::set<std::tuple<std::int64_t, std::int64_t, std::uint32_t>> keys;
    for (const auto& cj : j["colors"]) {
      DocColor c;
      c.child = require_int(cj, "child");
      c.parent = require_int(cj, "parent");
      std::int64_t slot = require_int(cj, "slot");
      if (slot < 0) bad("negative premise slot");
      c.slot = static_cast<std::uint32_t>(slot);
      if (!keys.insert({c.child, c.parent, c.slot}).second) {
        bad("duplicate color entry for edge " + std::to_string(c.child) +
            " -> " + std::to_string(c.parent));
      }
      if (!cj.contains("colors") || !cj["colors"].is_array()) {
        bad("color entry without 'colors' array");
      }
      for (const auto& v : cj["colors"]) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
          bad("colors must be positive integers");
        }
        c.colors.push_back(v.get<std::uint32_t>());
      }
      doc.colors.push_back(std::move(c));
    }
  }
  return doc;
}

ProofDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

std::string document_to_json(const ProofDocument& doc) {
  ordered_json j;
  j["format_version"] = doc.format_version;
  j["kind"] = doc.kind;
  j["mode"] = doc.mode;
  j["root"] = doc.root;
  j["nodes"] = ordered_json::array();
  for (const DocNode& n : doc.nodes) {
    ordered_json nj;
    nj["id"] = n.id;
    nj["rule"] = n.rule;
    nj["formula"] = n.formula;
    nj["premises"] = n.premises;
    if (n.label) nj["label"] = *n.label;
    if (n.antecedent) nj["antecedent"] = *n.antecedent;
    j["nodes"].push_back(std::move(nj));
  }
  if (doc.kind == "dag") {
    j["colors"] = ordered_json::array();
    for (const DocColor& c : doc.colors) {
      ordered_json cj;
      cj["child"] = c.child;
      cj["parent"] = c.parent;
      cj["slot"] = c.slot;
      cj["colors"] = c.colors;
      j["colors"].push_back(std::move(cj));
    }
  }
  return j.dump(2) + "\n";
}

void save_document(const ProofDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot open '" + path + "' for writing");
  out << document_to_json(doc);
}

namespace {

struct DocIndex {
  std::map<std::int64_t, std::size_t> by_id;

  explicit DocIndex(const ProofDocument& doc) {
    for (std::size_t i = 0; i < doc.nodes.size(); ++i) {
      by_id.emplace(doc.nodes[i].id, i);
    }
  }
};

TreeNodePtr build_tree(const ProofDocument& doc, const DocIndex& index,
                       std::int64_t id, std::set<std::int64_t>& on_path,
                       std::set<std::int64_t>& used, TreeAddress& addr,
                       std::map<std::int64_t, TreeAddress>* id_to_address) {
  if (!on_path.insert(id).second) {
    bad("cycle through node " + std::to_string(id) + " in a tree document");
  }
  if (!used.insert(id).second) {
    bad("node " + std::to_string(id) +
        " is shared; tree documents must be trees");
  }
  const DocNode& n = doc.nodes[index.by_id.at(id)];
  if (id_to_address) (*id_to_address)[id] = addr;
  std::vector<TreeNodePtr> kids;
  for (std::size_t i = 0; i < n.premises.size(); ++i) {
    addr.push_back(i);
    kids.push_back(build_tree(doc, index, n.premises[i], on_path, used, addr,
                              id_to_address));
    addr.pop_back();
  }
  on_path.erase(id);
  return make_tree_node(rule_from_string(n.rule), parse_doc_formula(n.formula),
                        std::move(kids), n.label);
}

}  // namespace

TreeDerivation tree_from_document(
    const ProofDocument& doc, std::map<std::int64_t, TreeAddress>* id_to_address) {
  if (doc.kind != "tree") bad("expected a tree document");
  DocIndex index(doc);
  std::set<std::int64_t> on_path, used;
  TreeAddress addr;
  TreeNodePtr root = build_tree(doc, index, doc.root, on_path, used, addr,
                                id_to_address);
  if (used.size() != doc.nodes.size()) {
    bad("tree document has nodes unreachable from the root");
  }
  return TreeDerivation{std::move(root),
                        doc.mode == "nm" ? Mode::Nm : Mode::NmPlus};
}

DagDerivation dag_from_document(const ProofDocument& doc) {
  if (doc.kind != "dag") bad("expected a dag document");
  DocIndex index(doc);
  DagDerivation d;
  d.mode = doc.mode == "nm" ? Mode::Nm : Mode::NmPlus;
  for (const DocNode& n : doc.nodes) {
    DagNode dn;
    dn.rule = rule_from_string(n.rule);
    dn.conclusion = parse_doc_formula(n.formula);
    dn.label = n.label;
    for (std::int64_t p : n.premises) {
      dn.premises.push_back(static_cast<NodeId>(index.by_id.at(p)));
    }
    d.nodes.push_back(std::move(dn));
  }
  d.root = static_cast<NodeId>(index.by_id.at(doc.root));
  std::uint32_t max_color = 1;
  for (const DocColor& c : doc.colors) {
    auto child = index.by_id.find(c.child);
    auto parent = index.by_id.find(c.parent);
    if (child == index.by_id.end() || parent == index.by_id.end()) {
      bad("color entry references unknown node");
    }
    ColorSet set;
    for (std::uint32_t v : c.colors) {
      set.insert(v);
      max_color = std::max(max_color, v);
    }
    d.coloring.edges[EdgeRef{static_cast<NodeId>(child->second),
                             static_cast<NodeId>(parent->second), c.slot}] =
        std::move(set);
  }
  d.coloring.num_colors = max_color;
  return d;
}

namespace {

void tree_doc_nodes(const TreeNode* n, ProofDocument& doc,
                    std::int64_t& next_id, std::int64_t& my_id) {
  std::vector<std::int64_t> kid_ids;
  for (const auto& c : n->children) {
    std::int64_t kid;
    tree_doc_nodes(c.get(), doc, next_id, kid);
    kid_ids.push_back(kid);
  }
  DocNode dn;
  dn.id = my_id = next_id++;
  dn.rule = rule_name(n->rule);
  dn.formula = render_formula(n->conclusion);
  dn.premises = std::move(kid_ids);
  dn.label = n->label;
  if (n->rule == RuleKind::ImpIntro && n->conclusion.is_imp()) {
    dn.antecedent = render_formula(n->conclusion.antecedent());
  }
  doc.nodes.push_back(std::move(dn));
}

}  // namespace

ProofDocument document_from_tree(const TreeDerivation& t) {
  ProofDocument doc;
  doc.kind = "tree";
  doc.mode = mode_name(t.mode);
  std::int64_t next_id = 1, root_id = 0;
  tree_doc_nodes(t.root.get(), doc, next_id, root_id);
  doc.root = root_id;
  return doc;
}

ProofDocument document_from_dag(const DagDerivation& d) {
  ProofDocument doc;
  doc.kind = "dag";
  doc.mode = mode_name(d.mode);
  doc.root = static_cast<std::int64_t>(d.root) + 1;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const DagNode& n = d.nodes[i];
    DocNode dn;
    dn.id = static_cast<std::int64_t>(i) + 1;
    dn.rule = rule_name(n.rule);
    dn.formula = render_formula(n.conclusion);
    for (NodeId p : n.premises) {
      dn.premises.push_back(static_cast<std::int64_t>(p) + 1);
    }
    dn.label = n.label;
    if (n.rule == RuleKind::ImpIntro && n.conclusion.is_imp()) {
      dn.antecedent = render_formula(n.conclusion.antecedent());
    }
    doc.nodes.push_back(std::move(dn));
  }
  for (const auto& [edge, colors] : d.coloring.edges) {
    DocColor c;
    c.child = static_cast<std::int64_t>(edge.child) + 1;
    c.parent = static_cast<std::int64_t>(edge.parent) + 1;
    c.slot = edge.slot;
    c.colors = colors.values();
    doc.colors.push_back(std::move(c));
  }
  return doc;
}

MergePlan plan_from_json(const std::string& json_text,
                         const std::map<std::int64_t, TreeAddress>& addresses) {
  ordered_json j = parse_json(json_text);
  if (!j.is_object() || !j.contains("groups") || !j["groups"].is_array()) {
    bad("merge plan needs a 'groups' array");
  }
  MergePlan plan;
  for (const auto& gj : j["groups"]) {
    MergeGroup g;
    if (!gj.contains("members") || !gj["members"].is_array()) {
      bad("merge group needs a 'members' array");
    }
    for (const auto& m : gj["members"]) {
      if (!m.is_number_integer()) bad("non-integer member id");
      auto it = addresses.find(m.get<std::int64_t>());
      if (it == addresses.end()) {
        bad("merge plan references unknown node " +
            std::to_string(m.get<std::int64_t>()));
      }
      g.members.push_back(it->second);
    }
    std::int64_t s = require_int(gj, "shared_suffix");
    if (s < 0) bad("negative shared_suffix");
    g.shared_suffix = static_cast<std::size_t>(s);
    plan.groups.push_back(std::move(g));
  }
  return plan;
}

}  // namespace nm
