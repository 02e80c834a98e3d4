// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails.  Run via ctest (nm_acceptance) or directly.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nm/commands.hpp"
#include "nm/dag.hpp"
#include "nm/document.hpp"
#include "nm/oracle.hpp"
#include "nm/transform.hpp"
#include "nm/tree.hpp"

using namespace nm;

namespace {

int failures = 0;

struct Criterion {
  std::string name;
  std::vector<std::string> problems;
  std::chrono::steady_clock::time_point start;

  explicit Criterion(std::string name_)
      : name(std::move(name_)), start(std::chrono::steady_clock::now()) {}

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }

  double elapsed_s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }

  void finish(double time_limit_s = 0.0) {
    const double t = elapsed_s();
    if (time_limit_s > 0.0 && t > time_limit_s) {
      problems.push_back("runtime " + std::to_string(t) + "s exceeds " +
                         std::to_string(time_limit_s) + "s");
    }
    if (problems.empty()) {
      std::printf("PASS  %-14s (%.2fs)\n", name.c_str(), t);
    } else {
      ++failures;
      std::printf("FAIL  %-14s (%.2fs)\n", name.c_str(), t);
      for (const std::string& p : problems) {
        std::printf("      - %s\n", p.c_str());
      }
    }
  }
};

std::string fixture(const std::string& name) {
  return std::string(NM_FIXTURES_DIR) + "/" + name;
}

const char* kConclusion =
    "((d -> (d -> b) -> g -> b) -> (a -> (a -> b) -> g -> b) -> s) -> s";

// Criterion 1: the tree fixture checks, shows 5 closed paths, proves, and
// its conclusion is the expected formula.  Under one second.
void criterion_basic_tree() {
  Criterion c("basic-tree");
  TreeDerivation t = tree_from_document(load_document(fixture("basic_tree.json")));
  c.require(check_tree(t).ok(), "fixture fails check_tree");
  auto paths = enumerate_tree_paths(t);
  c.require(paths.size() == 5,
            "expected 5 paths, got " + std::to_string(paths.size()));
  for (const auto& p : paths) {
    c.require(is_path_closed(p),
              "open path from " + render_formula(p.leaf_formula()));
  }
  c.require(tree_proves(t), "tree_proves rejected the fixture");
  c.require(render_formula(t.conclusion()) == kConclusion,
            "conclusion renders to '" + render_formula(t.conclusion()) + "'");
  c.require(parse_formula(render_formula(t.conclusion())) == t.conclusion(),
            "conclusion text does not reparse");
  c.finish(1.0);
}

// Criterion 2: the dag fixture checks; the naive criterion fails with an
// open witness from the first assumption through the crossing intro node;
// the regular criterion accepts; 9 paths split 5 closed-regular /
// 4 open-irregular.  Under one second.
void criterion_basic_dag() {
  Criterion c("basic-dag");
  DagDerivation d = dag_from_document(load_document(fixture("basic_dag.json")));
  c.require(check_dag_structure(d).ok(), "fixture fails check_dag_structure");

  ProvabilityResult naive = dag_check_naive(d);
  c.require(!naive.proves, "naive criterion unexpectedly accepted");
  if (naive.open_path) {
    c.require(dag_path_leaf_formula(d, *naive.open_path) == Formula::var("a"),
              "naive witness does not start at assumption a");
    Formula cross = parse_formula("(d -> b) -> g -> b");
    bool via = false;
    for (NodeId id : naive.open_path->nodes) {
      via |= d.nodes[id].conclusion == cross;
    }
    c.require(via, "naive witness avoids the crossing intro node");
    c.require(!naive.open_path->closed, "naive witness is not open");
  } else {
    c.require(false, "naive check returned no witness");
  }

  c.require(dag_check_regular(d).proves, "regular criterion rejected");

  auto paths = enumerate_dag_paths(d, 1000);
  std::size_t closed_regular = 0, open_irregular = 0, other = 0;
  for (const DagPath& p : paths) {
    if (p.closed && p.regular) {
      ++closed_regular;
    } else if (!p.closed && !p.regular) {
      ++open_irregular;
    } else {
      ++other;
    }
  }
  c.require(paths.size() == 9,
            "expected 9 paths, got " + std::to_string(paths.size()));
  c.require(closed_regular == 5, "expected 5 closed regular paths, got " +
                                     std::to_string(closed_regular));
  c.require(open_irregular == 4, "expected 4 open irregular paths, got " +
                                     std::to_string(open_irregular));
  c.require(other == 0, "mixed path classifications");
  c.finish(1.0);
}

// Criterion 3: auto-compression of the tree fixture is isomorphic to the
// dag fixture (colors up to permutation, labels up to renaming) and inserts
// exactly one binary repetition node.
void criterion_compress_golden() {
  Criterion c("compress");
  TreeDerivation t = tree_from_document(load_document(fixture("basic_tree.json")));
  DagDerivation expected =
      dag_from_document(load_document(fixture("basic_dag.json")));
  DagDerivation d = compress(t, find_merge_plan(t));
  c.require(check_dag_structure(d).ok(), "compressed dag fails the check");
  c.require(dag_signature(d) == dag_signature(expected),
            "compressed dag is not isomorphic to the fixture");
  std::size_t reps = 0;
  bool binary = true;
  for (const DagNode& n : d.nodes) {
    if (n.rule == RuleKind::Rep) {
      ++reps;
      binary &= n.premises.size() == 2;
    }
  }
  c.require(reps == 1, "expected exactly one repetition node, got " +
                           std::to_string(reps));
  c.require(binary, "repetition node is not binary");
  c.finish();
}

// Criterion 4: unfolding the dag fixture recovers the tree fixture up to
// discharge-label renaming, and the result proves.
void criterion_unfold_golden() {
  Criterion c("unfold");
  DagDerivation d = dag_from_document(load_document(fixture("basic_dag.json")));
  TreeDerivation expected =
      tree_from_document(load_document(fixture("basic_tree.json")));
  TreeDerivation t = unfold(d);
  c.require(check_tree(t).ok(), "unfolded tree fails check_tree");
  c.require(tree_signature(t) == tree_signature(expected),
            "unfolded tree differs from the fixture");
  c.require(tree_proves(t), "unfolded tree does not prove");
  c.finish();
}

// Criterion 5: 200 generated proofs (depth <= 8, 4 atoms) all check, prove,
// and have theorem conclusions; their auto-compressions verify regularly
// and unfold back to proving trees.  Under 60 seconds.
void criterion_soundness_suite() {
  Criterion c("soundness");
  const std::vector<std::string> atoms{"a", "b", "c", "d"};
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const std::size_t depth = 1 + seed % 8;
    TreeDerivation t = generate_random_proof(seed, depth, atoms);
    if (!check_tree(t).ok()) {
      c.require(false, "seed " + std::to_string(seed) + ": invalid tree");
      continue;
    }
    if (!tree_proves(t)) {
      c.require(false, "seed " + std::to_string(seed) + ": tree does not prove");
    }
    if (!decide_ljt(t.conclusion())) {
      c.require(false, "seed " + std::to_string(seed) +
                           ": conclusion rejected by the oracle");
    }
    DagDerivation d = compress(t, find_merge_plan(t));
    if (!check_dag_structure(d).ok()) {
      c.require(false, "seed " + std::to_string(seed) + ": invalid compression");
      continue;
    }
    if (!dag_proves_regular(d)) {
      c.require(false, "seed " + std::to_string(seed) +
                           ": compression fails the regular criterion");
    }
    TreeDerivation back = unfold(d);
    if (!tree_proves(back)) {
      c.require(false, "seed " + std::to_string(seed) +
                           ": unfolded compression does not prove");
    }
    ++checked;
  }
  c.require(checked == 200, "only " + std::to_string(checked) +
                                " of 200 instances ran to completion");
  c.finish(60.0);
}

// Criterion 6: on every corpus dag with at most 10000 enumerable paths the
// reachability-based verdicts equal the enumeration-based ones.
void criterion_verifier_equivalence() {
  Criterion c("equivalence");
  std::vector<DagDerivation> corpus;
  corpus.push_back(dag_from_document(load_document(fixture("basic_dag.json"))));
  {
    TreeDerivation t =
        tree_from_document(load_document(fixture("basic_tree.json")));
    corpus.push_back(tree_to_dag(t));
    corpus.push_back(hashcons(t));
  }
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    TreeDerivation t =
        generate_random_proof(seed, 1 + seed % 7, {"a", "b", "c"});
    corpus.push_back(hashcons(t));
    corpus.push_back(compress(t, find_merge_plan(t)));
  }
  {
    // A dag that is not provable at all, for the negative side.
    DagDerivation lone;
    lone.nodes.push_back({RuleKind::Assume, Formula::var("a"), std::nullopt, {}});
    lone.root = 0;
    corpus.push_back(lone);
  }
  std::size_t compared = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const DagDerivation& d = corpus[i];
    if (!check_dag_structure(d).ok()) {
      c.require(false, "corpus dag " + std::to_string(i) + " is invalid");
      continue;
    }
    std::vector<DagPath> paths;
    try {
      paths = enumerate_dag_paths(d, 10000);
    } catch (const PathExplosionError&) {
      continue;  // outside the criterion's population
    }
    bool all_closed = true, regular_closed = true;
    for (const DagPath& p : paths) {
      all_closed &= p.closed;
      if (p.regular) regular_closed &= p.closed;
    }
    if (dag_check_naive(d).proves != all_closed) {
      c.require(false, "naive mismatch on corpus dag " + std::to_string(i));
    }
    if (dag_check_regular(d).proves != regular_closed) {
      c.require(false, "regular mismatch on corpus dag " + std::to_string(i));
    }
    ++compared;
  }
  c.require(compared >= 100, "corpus too small: " + std::to_string(compared));
  c.finish();
}

// Criterion 7: syntactic and semantic oracles agree on 1000 random
// formulas (size <= 9, 3 atoms) within the 6-world bound, and Peirce's law
// is refuted by a model with at most 2 worlds.
void criterion_oracle_consistency() {
  Criterion c("oracle");
  std::size_t theorems = 0, refuted = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    Formula f = random_formula(seed, 9, {"a", "b", "c"});
    const bool provable = decide_ljt(f);
    auto model = countermodel_search(f, 6);
    if (provable) {
      ++theorems;
      if (model) {
        c.require(false, "seed " + std::to_string(seed) +
                             ": countermodel for a theorem " +
                             render_formula(f));
      }
    } else {
      if (!model) {
        c.require(false, "seed " + std::to_string(seed) +
                             ": no countermodel within 6 worlds for " +
                             render_formula(f));
        continue;
      }
      ++refuted;
      if (!model->valid() || model_forces(*model, 0, f)) {
        c.require(false, "seed " + std::to_string(seed) +
                             ": witness fails re-verification");
      }
    }
  }
  c.require(theorems + refuted == 1000,
            "sample accounting is off: " + std::to_string(theorems) + " + " +
                std::to_string(refuted));
  c.require(theorems > 0 && refuted > 0, "degenerate sample split");

  Formula peirce = parse_formula("((p -> q) -> p) -> p");
  c.require(!decide_ljt(peirce), "Peirce's law accepted");
  auto model = countermodel_search(peirce, 2);
  c.require(model.has_value() && model->num_worlds <= 2,
            "no 2-world countermodel for Peirce's law");
  std::printf("      oracle sample: %zu theorems, %zu refuted\n", theorems,
              refuted);
  c.finish();
}

// Criterion 8: the dag fixture separates the two dag criteria.
void criterion_strictness() {
  Criterion c("strictness");
  DagDerivation d = dag_from_document(load_document(fixture("basic_dag.json")));
  c.require(dag_proves_regular(d), "regular criterion rejected the fixture");
  c.require(!dag_proves_naive(d), "naive criterion accepted the fixture");
  c.finish();
}

}  // namespace

int main() {
  try {
    criterion_basic_tree();
    criterion_basic_dag();
    criterion_compress_golden();
    criterion_unfold_golden();
    criterion_soundness_suite();
    criterion_verifier_equivalence();
    criterion_oracle_consistency();
    criterion_strictness();
  } catch (const std::exception& e) {
    std::printf("FAIL  (exception escaped a criterion: %s)\n", e.what());
    return 1;
  }
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
