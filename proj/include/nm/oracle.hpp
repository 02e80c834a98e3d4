#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nm/formula.hpp"

namespace nm {

// Multiset context plus goal; duplicates in the context are harmless (the
// calculus is contraction-free, so set semantics suffice).
struct Sequent {
  std::vector<Formula> context;
  Formula goal;
};

// Decision procedure for purely implicational intuitionistic provability
// (which coincides with purely implicational minimal logic), by the
// contraction-free sequent calculus restricted to implication:
//   axiom:        Gamma, p  |-  p                      (p atomic)
//   right:        Gamma, a  |-  b        =>  Gamma |- a -> b
//   left (atom):  Gamma, p, b  |-  G     =>  Gamma, p, p -> b |- G
//   left (nest):  Gamma, b -> c |- a -> b  and  Gamma, c |- G
//                                        =>  Gamma, (a -> b) -> c |- G
// Terminates unconditionally (the degree measure shrinks on every rule).
bool decide_ljt(Formula f);
bool decide_sequent(const Sequent& s);

// Finite reflexive-transitive Kripke frame with a persistent valuation.
// World 0 is the root; ge_mask[w] is the bitmask of worlds v with w <= v
// (w included), and each atom's extension is an upward-closed world mask.
struct KripkeModel {
  std::size_t num_worlds = 0;
  std::vector<std::uint32_t> ge_mask;
  std::vector<std::pair<std::string, std::uint32_t>> valuation;

  bool valid() const;  // reflexivity, transitivity, persistence
};

// Forcing relation, evaluated recursively per world.
bool model_forces(const KripkeModel& m, std::size_t world, Formula f);

// Exhaustive search over rooted models with at most max_worlds worlds for
// one whose root refutes f; every witness is re-verified with model_forces
// before it is returned.  Returns nullopt when no such model exists within
// the bound.
std::optional<KripkeModel> countermodel_search(Formula f,
                                               std::size_t max_worlds);

// Deterministic pseudo-random formula with size(f) <= max_size.
Formula random_formula(std::uint64_t seed, std::size_t max_size,
                       const std::vector<std::string>& atoms);

std::string model_to_string(const KripkeModel& m);

}  // namespace nm
