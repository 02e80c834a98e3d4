#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nm {

// Command cores shared by the CLI and the test suites.  Exit codes:
//   0  valid and proving / success
//   1  valid but not proving (check, prove)
//   2  structurally invalid input
//   3  I/O, schema, formula or plan errors
//   4  path explosion (paths)

struct CheckOptions {
  enum class Criterion { Default, Naive, Regular };
  std::vector<std::string> files;
  Criterion criterion = Criterion::Default;  // tree test / regular for dags
  bool json = false;
  int jobs = 1;
};
int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err);

struct CompressOptions {
  std::string file;
  std::string plan = "auto";  // "auto" or a merge-plan JSON path
  std::string output;         // empty = stdout
};
int cmd_compress(const CompressOptions& opt, std::ostream& out,
                 std::ostream& err);

struct UnfoldOptions {
  std::string file;
  std::string output;
};
int cmd_unfold(const UnfoldOptions& opt, std::ostream& out, std::ostream& err);

struct PathsOptions {
  std::string file;
  std::size_t limit = 10000;
};
int cmd_paths(const PathsOptions& opt, std::ostream& out, std::ostream& err);

struct ProveOptions {
  std::string formula;
  std::size_t max_worlds = 6;
};
int cmd_prove(const ProveOptions& opt, std::ostream& out, std::ostream& err);

struct GenOptions {
  std::uint64_t seed = 0;
  std::size_t depth = 4;
  std::vector<std::string> atoms = {"a", "b", "c"};
  std::string output;
};
int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err);

struct DotOptions {
  std::string file;
  std::string output;
};
int cmd_dot(const DotOptions& opt, std::ostream& out, std::ostream& err);

int cmd_stats(const std::string& file, std::ostream& out, std::ostream& err);

}  // namespace nm
