#include "nm/dot.hpp"

#include <map>
#include <sstream>

namespace nm {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

const char* rule_shape(const std::string& rule) {
  if (rule == "assume") return "box";
  if (rule == "rep") return "diamond";
  return "ellipse";
}

}  // namespace

std::string to_dot(const ProofDocument& doc) {
  std::map<std::pair<std::pair<std::int64_t, std::int64_t>, std::uint32_t>,
           const DocColor*>
      colors;
  for (const DocColor& c : doc.colors) {
    colors[{{c.child, c.parent}, c.slot}] = &c;
  }

  std::ostringstream os;
  os << "digraph derivation {\n";
  os << "  rankdir=BT;\n";
  os << "  node [fontname=\"monospace\"];\n";
  for (const DocNode& n : doc.nodes) {
    std::string label = n.rule;
    if (n.label) label += " [" + std::to_string(*n.label) + "]";
    label += "\\n" + escape(n.formula);
    os << "  n" << n.id << " [shape=" << rule_shape(n.rule) << ", label=\""
       << label << "\"";
    if (n.id == doc.root) os << ", penwidth=2";
    os << "];\n";
  }
  for (const DocNode& n : doc.nodes) {
    for (std::size_t slot = 0; slot < n.premises.size(); ++slot) {
      os << "  n" << n.premises[slot] << " -> n" << n.id;
      std::string label;
      if (n.premises.size() > 1) label = std::to_string(slot);
      auto it = colors.find(
          {{n.premises[slot], n.id}, static_cast<std::uint32_t>(slot)});
      if (it != colors.end()) {
        if (!label.empty()) label += " ";
        label += "{";
        for (std::size_t i = 0; i < it->second->colors.size(); ++i) {
          if (i) label += ",";
          label += std::to_string(it->second->colors[i]);
        }
        label += "}";
      }
      if (!label.empty()) os << " [label=\"" << label << "\"]";
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace nm
