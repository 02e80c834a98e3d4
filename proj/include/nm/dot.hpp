#pragma once

#include <string>

#include "nm/document.hpp"

namespace nm {

// Graphviz rendering of a proof document: one node per derivation node,
// one edge per premise slot, oriented premise -> conclusion.  Discharge
// labels show as bracketed superscripts and dag edges carry their colors.
std::string to_dot(const ProofDocument& doc);

}  // namespace nm
