// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include <CLI11.hpp>
#include <iostream>

#include "wmlab/cli.hpp"
#include "wmlab/error.hpp"

namespace cli = wmlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"wmlab: weak memory model workbench"};
  app.require_subcommand(1);
  cli::Options opts;
  std::vector<std::string> files;
  std::string values, dot_out;

  auto common = [&](CLI::App* sub, bool many_files) {
    if (many_files)
      sub->add_option("files", files, "litmus files")->required()->check(CLI::ExistingFile);
    else
      sub->add_option("file", files, "litmus file")->required()->expected(1)->check(CLI::ExistingFile);
    sub->add_option("-m,--model", opts.models,
                    "imm, immsc, rc11, tso, armv8, weakestmo (repeatable)");
    sub->add_option("--map", opts.map, "fence-after-w | fence-before-r | armv8");
    sub->add_option("--values", values, "value domain, e.g. 0,1");
    sub->add_flag("--strict-psc", opts.strict_psc,
                  "add SC order to the thin-air acyclicity check");
    sub->add_flag("--json", opts.json, "JSON report");
    sub->add_option("--es-events", opts.bounds.max_events,
                    "weakestmo: max non-init events per structure");
    sub->add_option("--es-forks", opts.bounds.max_forks,
                    "weakestmo: max extra branches per thread");
    sub->add_option("-j,--jobs", opts.jobs, "worker threads (0: all cores)");
  };

  auto* check = app.add_subcommand("check", "judge exists clauses under models");
  common(check, true);
  auto* sim = app.add_subcommand("simulate", "build event structures along traversals");
  common(sim, true);
  sim->add_flag("--trace", opts.trace, "per-step JSON log");
  sim->add_option("--dot-out", dot_out, "write per-step structure DOT files here");
  auto* diff = app.add_subcommand("diff", "allowed outcomes per model, implication checks");
  common(diff, true);
  auto* exp = app.add_subcommand("export", "DOT or JSON of (consistent) executions");
  common(exp, false);
  exp->add_option("--dot-out", dot_out, "write one DOT file per graph here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitError;
  }
  try {
    if (!values.empty()) opts.values = cli::parse_values(values);
  } catch (const wmlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitError;
  }
  if (!dot_out.empty()) opts.dot_out = dot_out;
  std::vector<std::filesystem::path> paths(files.begin(), files.end());

  if (check->parsed()) return cli::cmd_check(paths, opts, std::cout, std::cerr);
  if (sim->parsed()) return cli::cmd_simulate(paths, opts, std::cout, std::cerr);
  if (diff->parsed()) return cli::cmd_diff(paths, opts, std::cout, std::cerr);
  return cli::cmd_export(paths.front(), opts, std::cout, std::cerr);
}
