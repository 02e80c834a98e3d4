#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nm/dag.hpp"
#include "nm/transform.hpp"
#include "nm/tree.hpp"

namespace nm {

// On-disk derivation record.  Node ids are arbitrary but unique; formulas
// are stored as text in the formula grammar; colors are present exactly
// when kind == "dag".
struct DocNode {
  std::int64_t id = 0;
  std::string rule;  // assume | impI | impE | rep
  std::string formula;
  std::vector<std::int64_t> premises;
  std::optional<int> label;
  std::optional<std::string> antecedent;  // impI only

  friend bool operator==(const DocNode&, const DocNode&) = default;
};

struct DocColor {
  std::int64_t child = 0;
  std::int64_t parent = 0;
  std::uint32_t slot = 0;
  std::vector<std::uint32_t> colors;

  friend bool operator==(const DocColor&, const DocColor&) = default;
};

struct ProofDocument {
  int format_version = 1;
  std::string kind;  // tree | dag
  std::string mode;  // nm | nm+
  std::int64_t root = 0;
  std::vector<DocNode> nodes;
  std::vector<DocColor> colors;

  friend bool operator==(const ProofDocument&, const ProofDocument&) = default;
};

// Throw SchemaError on anything that does not match the schema (malformed
// JSON, bad ids, unparseable formulas, colors on a tree, ...).
ProofDocument parse_document(const std::string& json_text);
ProofDocument load_document(const std::string& path);
std::string document_to_json(const ProofDocument& doc);
void save_document(const ProofDocument& doc, const std::string& path);

// Conversions.  tree_from_document rejects premise sharing and cycles
// (SchemaError); rule-level validity stays with check_tree / check_dag.
// When id_to_address is given it receives the doc-id -> tree-address map.
TreeDerivation tree_from_document(
    const ProofDocument& doc,
    std::map<std::int64_t, TreeAddress>* id_to_address = nullptr);
DagDerivation dag_from_document(const ProofDocument& doc);

ProofDocument document_from_tree(const TreeDerivation& t);
ProofDocument document_from_dag(const DagDerivation& d);

// Merge-plan file: {"groups": [{"members": [ids...], "shared_suffix": s}]}
// with node ids of the accompanying tree document.
MergePlan plan_from_json(const std::string& json_text,
                         const std::map<std::int64_t, TreeAddress>& addresses);

}  // namespace nm
