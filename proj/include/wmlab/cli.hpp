// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

// Command implementations behind the `wmlab` tool.  Each command writes its
// report to `out`, diagnostics to `err`, and returns the process exit code:
// 0 when every expectation holds, 1 when one does not (or a simulation
// fails), 2 on errors such as unreadable files or bad flags.

#ifndef WMLAB_CLI_HPP_
#define WMLAB_CLI_HPP_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmlab/event_structure.hpp"
#include "wmlab/litmus.hpp"
#include "wmlab/models.hpp"

namespace wmlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitError = 2;
inline constexpr int kSchemaVersion = 1;

struct Options {
  std::vector<std::string> models;  // empty: every model
  std::optional<std::string> map;   // fence-after-w | fence-before-r | armv8
  std::optional<std::vector<Value>> values;
  bool strict_psc = false;
  bool trace = false;
  std::optional<std::filesystem::path> dot_out;
  bool json = false;
  EnumerationBounds bounds;
  unsigned jobs = 0;  // 0: hardware concurrency
};

// A model as checked: name plus the mapping scheme for tso/armv8.
struct ModelRun {
  std::string model;
  std::string scheme;  // empty unless tso or armv8

  std::string display() const;
};

struct ClauseVerdict {
  std::string text;
  bool allowed = false;
  std::optional<bool> expected;
  bool matches() const { return !expected || *expected == allowed; }
};

struct ModelOutcome {
  ModelRun run;
  std::size_t candidates = 0;  // graphs, or extracted executions for weakestmo
  std::size_t consistent = 0;
  std::vector<ClauseVerdict> clauses;
};

struct TestOutcome {
  std::string name;
  std::string file;
  std::vector<ModelOutcome> models;
  bool matches() const;
};

// Resolves the model list and --map into concrete runs.  Throws
// UnsupportedFeature for unknown names or a missing/mismatched scheme.
std::vector<ModelRun> resolve_models(const Options& opts);

// Executions of p's every model run, judged against its exists clauses.
TestOutcome check_program(const Program& p, const std::vector<ModelRun>& runs,
                          const Options& opts);

// The graphs an extracted Weakestmo execution yields: every extraction of
// every bounded structure that runs all threads to completion and whose
// associated graph (without syntactic dependencies) is IMM_SC-consistent.
// Deduplicated, in discovery order.
std::vector<ExecutionGraph> weakestmo_executions(const Program& p,
                                                 const EnumerationBounds& b);

nlohmann::json to_json(const TestOutcome& t);

int cmd_check(const std::vector<std::filesystem::path>& files,
              const Options& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const std::vector<std::filesystem::path>& files,
                 const Options& opts, std::ostream& out, std::ostream& err);
// Allowed-outcome matrix across models plus implication checks between
// IMM_SC and the compiled models on every candidate.
int cmd_diff(const std::vector<std::filesystem::path>& files,
             const Options& opts, std::ostream& out, std::ostream& err);
// DOT (or JSON with --json) of every candidate consistent under the first
// selected model, or every candidate when no model is given.
int cmd_export(const std::filesystem::path& file, const Options& opts,
               std::ostream& out, std::ostream& err);

std::vector<Value> parse_values(const std::string& s);

}  // namespace wmlab::cli

#endif  // WMLAB_CLI_HPP_
