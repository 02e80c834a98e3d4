#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nm/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "nmproof - checker, compressor and analyzer for natural-deduction "
      "proofs in purely implicational minimal logic"};
  app.require_subcommand(1);

  nm::CheckOptions check_opt;
  bool naive = false, regular = false;
  auto* check = app.add_subcommand(
      "check", "Verify a proof document and decide whether it proves");
  check->add_option("files", check_opt.files, "proof documents (JSON)")
      ->required();
  check->add_flag("--naive", naive, "require every dag path to be closed");
  check->add_flag("--regular", regular,
                  "require every regular dag path to be closed (default "
                  "for dag documents)");
  check->add_flag("--json", check_opt.json, "machine-readable report");
  check->add_option("--jobs", check_opt.jobs, "check files concurrently")
      ->default_val(1);

  nm::CompressOptions compress_opt;
  auto* compress = app.add_subcommand(
      "compress", "Merge same-conclusion subproofs into a dag document");
  compress->add_option("file", compress_opt.file, "tree document")->required();
  compress->add_option("--plan", compress_opt.plan,
                       "'auto' or a merge-plan JSON file");
  compress->add_option("-o,--output", compress_opt.output,
                       "output path (default: stdout)");

  nm::UnfoldOptions unfold_opt;
  auto* unfold =
      app.add_subcommand("unfold", "Expand a dag document back into a tree");
  unfold->add_option("file", unfold_opt.file, "dag document")->required();
  unfold->add_option("-o,--output", unfold_opt.output,
                     "output path (default: stdout)");

  nm::PathsOptions paths_opt;
  auto* paths = app.add_subcommand(
      "paths", "Tabulate deductive paths with closed/regular classification");
  paths->add_option("file", paths_opt.file, "proof document")->required();
  paths->add_option("--limit", paths_opt.limit, "maximum number of paths")
      ->default_val(10000);

  nm::ProveOptions prove_opt;
  auto* prove = app.add_subcommand(
      "prove", "Decide provability of a formula (sequent calculus)");
  prove->add_option("formula", prove_opt.formula, "formula text")->required();
  prove->add_option("--max-worlds", prove_opt.max_worlds,
                    "countermodel search bound")
      ->default_val(6);

  nm::GenOptions gen_opt;
  auto* gen =
      app.add_subcommand("gen", "Generate a random valid proof document");
  gen->add_option("--seed", gen_opt.seed, "random seed")->default_val(0);
  gen->add_option("--depth", gen_opt.depth, "generator depth")->default_val(4);
  gen->add_option("--atoms", gen_opt.atoms, "atom names");
  gen->add_option("-o,--output", gen_opt.output,
                  "output path (default: stdout)");

  nm::DotOptions dot_opt;
  auto* dot = app.add_subcommand("dot", "Render a proof document as Graphviz");
  dot->add_option("file", dot_opt.file, "proof document")->required();
  dot->add_option("-o,--output", dot_opt.output,
                  "output path (default: stdout)");

  std::string stats_file;
  auto* stats = app.add_subcommand("stats", "Summarize a proof document");
  stats->add_option("file", stats_file, "proof document")->required();

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    if (naive && regular) {
      std::cerr << "error: --naive and --regular are mutually exclusive\n";
      return 3;
    }
    if (naive) check_opt.criterion = nm::CheckOptions::Criterion::Naive;
    if (regular) check_opt.criterion = nm::CheckOptions::Criterion::Regular;
    return nm::cmd_check(check_opt, std::cout, std::cerr);
  }
  if (compress->parsed()) {
    return nm::cmd_compress(compress_opt, std::cout, std::cerr);
  }
  if (unfold->parsed()) return nm::cmd_unfold(unfold_opt, std::cout, std::cerr);
  if (paths->parsed()) return nm::cmd_paths(paths_opt, std::cout, std::cerr);
  if (prove->parsed()) return nm::cmd_prove(prove_opt, std::cout, std::cerr);
  if (gen->parsed()) return nm::cmd_gen(gen_opt, std::cout, std::cerr);
  if (dot->parsed()) return nm::cmd_dot(dot_opt, std::cout, std::cerr);
  if (stats->parsed()) return nm::cmd_stats(stats_file, std::cout, std::cerr);
  return 3;
}
