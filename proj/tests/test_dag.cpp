#include <doctest.h>

#include "nm/dag.hpp"
#include "nm/transform.hpp"
#include "nm/tree.hpp"
#include "test_util.hpp"

using namespace nm;
using namespace nmtest;

namespace {

DagDerivation two_node_cycle() {
  Formula a = Formula::var("a");
  DagDerivation d;
  d.nodes.push_back({RuleKind::Rep, a, std::nullopt, {1}});
  d.nodes.push_back({RuleKind::Rep, a, std::nullopt, {0}});
  d.nodes.push_back({RuleKind::ImpIntro, Formula::imp(a, a), std::nullopt, {0}});
  d.root = 2;
  d.coloring.num_colors = 1;
  d.coloring.edges[{1, 0, 0}] = ColorSet{1};
  d.coloring.edges[{0, 1, 0}] = ColorSet{1};
  d.coloring.edges[{0, 2, 0}] = ColorSet{1};
  return d;
}

// Rep(2) over two distinct assumptions of the same formula.
DagDerivation small_rep_dag(ColorSet left, ColorSet right) {
  Formula a = Formula::var("a");
  DagDerivation d;
  d.nodes.push_back({RuleKind::Assume, a, 1, {}});
  d.nodes.push_back({RuleKind::Assume, a, 2, {}});
  d.nodes.push_back({RuleKind::Rep, a, std::nullopt, {0, 1}});
  d.nodes.push_back(
      {RuleKind::ImpIntro, Formula::imp(a, a), 1, {2}});
  d.root = 3;
  d.coloring.num_colors = std::max(left.max_color(), right.max_color());
  d.coloring.edges[{0, 2, 0}] = left;
  d.coloring.edges[{1, 2, 1}] = right;
  d.coloring.edges[{2, 3, 0}] = ColorSet::full(d.coloring.num_colors);
  return d;
}

}  // namespace

TEST_CASE("shipped dag fixture passes the structural check") {
  DagDerivation d = load_dag_fixture("basic_dag.json");
  CHECK(d.nodes.size() == 16);
  CHECK(d.coloring.num_colors == 2);
  CHECK(check_dag_structure(d).ok());
}

TEST_CASE("cycles are rejected with a witness") {
  CheckReport r = check_dag_structure(two_node_cycle());
  REQUIRE_FALSE(r.ok());
  CHECK(r.violation->message.find("cycle") != std::string::npos);
}

TEST_CASE("ambiguous rep coloring is rejected") {
  DagDerivation d = small_rep_dag(ColorSet{1}, ColorSet{1});
  CheckReport r = check_dag_structure(d);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violation->message == "ambiguous unfolding for color 1");

  CHECK(check_dag_structure(small_rep_dag(ColorSet{1}, ColorSet{2})).ok());
}

TEST_CASE("structural violations: orphans, root parents, colors") {
  Formula a = Formula::var("a");
  DagDerivation d;
  d.nodes.push_back({RuleKind::Assume, a, std::nullopt, {}});
  d.nodes.push_back({RuleKind::ImpIntro, Formula::imp(a, a), std::nullopt, {0}});
  d.nodes.push_back({RuleKind::Assume, a, std::nullopt, {}});  // orphan
  d.root = 1;
  d.coloring.edges[{0, 1, 0}] = ColorSet{1};
  CheckReport r = check_dag_structure(d);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violation->message.find("orphan") != std::string::npos);

  d.nodes.pop_back();
  CHECK(check_dag_structure(d).ok());

  SUBCASE("missing color") {
    d.coloring.edges.clear();
    CheckReport miss = check_dag_structure(d);
    REQUIRE_FALSE(miss.ok());
    CHECK(miss.violation->message.find("missing color") != std::string::npos);
  }
  SUBCASE("color out of range") {
    d.coloring.edges[{0, 1, 0}] = ColorSet{2};  // num_colors == 1
    CHECK_FALSE(check_dag_structure(d).ok());
  }
  SUBCASE("color entry for nonexistent edge") {
    d.coloring.edges[{1, 0, 0}] = ColorSet{1};
    CheckReport extra = check_dag_structure(d);
    REQUIRE_FALSE(extra.ok());
    CHECK(extra.violation->message.find("nonexistent edge") !=
          std::string::npos);
  }
  SUBCASE("root with a parent") {
    d.root = 0;
    CheckReport bad = check_dag_structure(d);
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.violation->message.find("root has a parent") !=
          std::string::npos);
  }
  SUBCASE("premise id out of range") {
    d.nodes[1].premises[0] = 9;
    CHECK_FALSE(check_dag_structure(d).ok());
  }
  SUBCASE("repetition outside nm+ mode") {
    DagDerivation r2 = small_rep_dag(ColorSet{1}, ColorSet{2});
    r2.mode = Mode::Nm;
    CheckReport bad = check_dag_structure(r2);
    REQUIRE_FALSE(bad.ok());
    CHECK(bad.violation->message == "repetition rule outside nm+ mode");
  }
}

TEST_CASE("dag fixture has nine paths: five closed regular, four open irregular") {
  DagDerivation d = load_dag_fixture("basic_dag.json");
  auto paths = enumerate_dag_paths(d, 1000);
  CHECK(paths.size() == count_dag_paths(d));  // independent route counter
  REQUIRE(paths.size() == 9);

  std::size_t closed_regular = 0, open_irregular = 0;
  for (const DagPath& p : paths) {
    if (p.closed && p.regular) ++closed_regular;
    if (!p.closed && !p.regular) ++open_irregular;
    CHECK(p.closed == p.regular);  // no mixed classifications here
  }
  CHECK(closed_regular == 5);
  CHECK(open_irregular == 4);
}

TEST_CASE("the crossing path from the first assumption is open and irregular") {
  DagDerivation d = load_dag_fixture("basic_dag.json");
  Formula a = Formula::var("a");
  Formula cross = parse_formula("(d -> b) -> g -> b");
  bool found = false;
  for (const DagPath& p : enumerate_dag_paths(d, 1000)) {
    if (dag_path_leaf_formula(d, p) != a) continue;
    bool via_cross = false;
    for (NodeId id : p.nodes) via_cross |= d.nodes[id].conclusion == cross;
    if (!via_cross) continue;
    found = true;
    CHECK_FALSE(p.closed);
    CHECK_FALSE(p.regular);
  }
  CHECK(found);
}

TEST_CASE("path explosion honors the limit") {
  DagDerivation d = load_dag_fixture("basic_dag.json");
  CHECK_THROWS_AS(enumerate_dag_paths(d, 8), PathExplosionError);
  CHECK_NOTHROW(enumerate_dag_paths(d, 9));
}

TEST_CASE("every path of a tree-shaped dag is regular") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TreeDerivation t = generate_random_proof(seed, 4, {"a", "b"});
    DagDerivation d = tree_to_dag(t);
    REQUIRE(check_dag_structure(d).ok());
    for (const DagPath& p : enumerate_dag_paths(d, 10000)) {
      CHECK(p.regular);
    }
  }
}

TEST_CASE("naive check rejects the fixture with the documented witness") {
  DagDerivation d = load_dag_fixture("basic_dag.json");
  ProvabilityResult r = dag_check_naive(d);
  CHECK_FALSE(r.proves);
  REQUIRE(r.open_path.has_value());
  CHECK(dag_path_leaf_formula(d, *r.open_path) == Formula::var("a"));
  Formula cross = parse_formula("(d -> b) -> g -> b");
  bool via_cross = false;
  for (NodeId id : r.open_path->nodes) {
    via_cross |= d.nodes[id].conclusion == cross;
  }
  CHECK(via_cross);
  CHECK_FALSE(r.open_path->closed);
}

TEST_CASE("regular check accepts the fixture") {
  DagDerivation d = load_dag_fixture("basic_dag.json");
  ProvabilityResult r = dag_check_regular(d);
  CHECK(r.proves);
  CHECK_FALSE(r.open_path.has_value());
}

TEST_CASE("a lone assumption proves nothing") {
  DagDerivation d;
  d.nodes.push_back({RuleKind::Assume, Formula::var("a"), std::nullopt, {}});
  d.root = 0;
  REQUIRE(check_dag_structure(d).ok());
  CHECK_FALSE(dag_proves_naive(d));
  CHECK_FALSE(dag_proves_regular(d));
  auto paths = enumerate_dag_paths(d, 10);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].length() == 0);
  CHECK_FALSE(paths[0].closed);
  CHECK(paths[0].regular);  // empty intersection domain
}

TEST_CASE("removing a closing intro step breaks the regular criterion") {
  // Rebuild the fixture with the (d -> b)-discharging intro replaced by an
  // assumed copy of its conclusion under a Rep(1); the new branch is never
  // discharged, so an open regular path appears.
  DagDerivation d = load_dag_fixture("basic_dag.json");
  const NodeId closer = 10;  // impI (d -> b) -> g -> b  (fixture id 11)
  REQUIRE(d.nodes[closer].rule == RuleKind::ImpIntro);
  REQUIRE(render_formula(d.nodes[closer].conclusion) == "(d -> b) -> g -> b");

  NodeId fresh = static_cast<NodeId>(d.nodes.size());
  d.nodes.push_back(
      {RuleKind::Assume, d.nodes[closer].conclusion, std::nullopt, {}});
  const NodeId old_premise = d.nodes[closer].premises[0];
  d.coloring.edges.erase(EdgeRef{old_premise, closer, 0});
  d.nodes[closer].rule = RuleKind::Rep;
  d.nodes[closer].premises = {fresh};
  d.coloring.edges[EdgeRef{fresh, closer, 0}] = ColorSet{2};

  REQUIRE(check_dag_structure(d).ok());
  CHECK(dag_proves_regular(d) == false);
}

TEST_CASE("regular equals tree provability on identity embeddings") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TreeDerivation t = generate_random_proof(seed, 4, {"a", "b", "c"});
    DagDerivation d = tree_to_dag(t);
    REQUIRE(check_dag_structure(d).ok());
    CHECK(dag_proves_regular(d) == tree_proves(t));
    CHECK(dag_proves_naive(d) == tree_proves(t));
  }
  // An unproved tree, for the negative side.
  TreeDerivation open_tree{
      imp_elim(assume(Formula::var("a")),
               assume(parse_formula("a -> b"))),
      Mode::Nm};
  DagDerivation d = tree_to_dag(open_tree);
  CHECK_FALSE(dag_proves_regular(d));
  CHECK_FALSE(dag_proves_naive(d));
}

TEST_CASE("naive provability implies regular provability") {
  std::vector<DagDerivation> corpus;
  corpus.push_back(load_dag_fixture("basic_dag.json"));
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    TreeDerivation t = generate_random_proof(seed, 4, {"a", "b"});
    corpus.push_back(hashcons(t));
    corpus.push_back(compress(t, find_merge_plan(t)));
  }
  bool strict_somewhere = false;
  for (const DagDerivation& d : corpus) {
    REQUIRE(check_dag_structure(d).ok());
    const bool naive = dag_proves_naive(d);
    const bool regular = dag_proves_regular(d);
    if (naive) CHECK(regular);
    strict_somewhere |= (regular && !naive);
  }
  CHECK(strict_somewhere);  // witnessed by the fixture
}

TEST_CASE("classification is invariant under color permutation") {
  DagDerivation d = load_dag_fixture("basic_dag.json");
  DagDerivation swapped = d;
  for (auto& [edge, colors] : swapped.coloring.edges) {
    ColorSet renamed;
    for (std::uint32_t c : colors.values()) renamed.insert(c == 1 ? 2 : 1);
    colors = renamed;
  }
  REQUIRE(check_dag_structure(swapped).ok());
  auto before = enumerate_dag_paths(d, 100);
  auto after = enumerate_dag_paths(swapped, 100);
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(before[i].closed == after[i].closed);
    CHECK(before[i].regular == after[i].regular);
  }
  CHECK(dag_proves_naive(d) == dag_proves_naive(swapped));
  CHECK(dag_proves_regular(d) == dag_proves_regular(swapped));
  CHECK(dag_signature(d) == dag_signature(swapped));
}

TEST_CASE("reachability verdicts match enumeration") {
  std::vector<DagDerivation> corpus;
  corpus.push_back(load_dag_fixture("basic_dag.json"));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TreeDerivation t = generate_random_proof(seed, 5, {"a", "b", "c"});
    corpus.push_back(hashcons(t));
    corpus.push_back(compress(t, find_merge_plan(t)));
  }
  for (const DagDerivation& d : corpus) {
    REQUIRE(check_dag_structure(d).ok());
    std::vector<DagPath> paths;
    try {
      paths = enumerate_dag_paths(d, 10000);
    } catch (const PathExplosionError&) {
      continue;
    }
    bool all_closed = true, all_regular_closed = true;
    for (const DagPath& p : paths) {
      all_closed &= p.closed;
      if (p.regular) all_regular_closed &= p.closed;
    }
    CHECK(dag_proves_naive(d) == all_closed);
    CHECK(dag_proves_regular(d) == all_regular_closed);
  }
}

TEST_CASE("verifier work stays under the edge-visit ceiling") {
  auto ceiling = [](const DagDerivation& d) {
    std::size_t edges = 0, leaves = 0;
    for (const DagNode& n : d.nodes) {
      edges += n.premises.size();
      leaves += n.rule == RuleKind::Assume;
    }
    return std::size_t(d.coloring.num_colors) * d.nodes.size() * leaves *
           std::max<std::size_t>(edges, 1);
  };
  std::vector<DagDerivation> corpus;
  corpus.push_back(load_dag_fixture("basic_dag.json"));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TreeDerivation t = generate_random_proof(seed, 5, {"a", "b"});
    corpus.push_back(compress(t, find_merge_plan(t)));
  }
  for (const DagDerivation& d : corpus) {
    CHECK(dag_check_regular(d).edge_visits <= ceiling(d));
    CHECK(dag_check_naive(d).edge_visits <= ceiling(d));
  }
}
