// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include "wmlab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "wmlab/error.hpp"
#include "wmlab/simulation.hpp"
#include "wmlab/traversal.hpp"

namespace wmlab::cli {

namespace {

const std::vector<std::string>& all_models() {
  static const std::vector<std::string> m{"imm",   "immsc", "rc11",
                                          "tso",   "armv8", "weakestmo"};
  return m;
}

const char* kFenceAfterW = "fence-after-w";
const char* kFenceBeforeR = "fence-before-r";
const char* kArm = "armv8";

TsoScheme tso_scheme(const std::string& s) {
  return s == kFenceBeforeR ? TsoScheme::FenceBeforeScRead
                            : TsoScheme::FenceAfterScWrite;
}

std::vector<ExecutionGraph> candidates(const Program& p, const Options& opts) {
  return opts.values ? enumerate_executions(p, *opts.values)
                     : enumerate_executions(p);
}

// Runs fn over items on up to `jobs` threads; results keep item order.
template <typename T, typename F>
auto parallel_map(const std::vector<T>& items, unsigned jobs, F fn)
    -> std::vector<decltype(fn(items[0]))> {
  using R = decltype(fn(items[0]));
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::optional<R>> slots(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < items.size();) {
      try {
        slots[i].emplace(fn(items[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < std::min<std::size_t>(jobs, items.size()); ++k)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<R> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::string allow_word(bool allowed) { return allowed ? "allowed" : "forbidden"; }

void print_outcome(std::ostream& out, const TestOutcome& t) {
  out << "test " << t.name << " (" << t.file << ")\n";
  for (const auto& m : t.models) {
    out << "  " << std::left << std::setw(22) << m.run.display() << " candidates "
        << m.candidates << ", consistent " << m.consistent << "\n";
    for (const auto& c : m.clauses) {
      out << "    " << c.text << ": " << allow_word(c.allowed);
      if (c.expected)
        out << " (expected " << allow_word(*c.expected) << ") "
            << (c.matches() ? "ok" : "MISMATCH");
      out << "\n";
    }
  }
}

// Loads files, reporting parse errors; returns nothing on failure.
std::optional<std::vector<Program>> load_all(
    const std::vector<std::filesystem::path>& files, std::ostream& err) {
  std::vector<Program> out;
  for (const auto& f : files) {
    try {
      out.push_back(load_program(f));
    } catch (const Error& e) {
      err << f.string() << ": " << e.what() << "\n";
      return std::nullopt;
    }
  }
  return out;
}

nlohmann::json report(const std::string& command) {
  return {{"schema", kSchemaVersion}, {"command", command}};
}

}  // namespace

std::string ModelRun::display() const {
  return scheme.empty() || scheme == model ? model : model + "[" + scheme + "]";
}

bool TestOutcome::matches() const {
  for (const auto& m : models)
    for (const auto& c : m.clauses)
      if (!c.matches()) return false;
  return true;
}

std::vector<ModelRun> resolve_models(const Options& opts) {
  const std::vector<std::string>& names =
      opts.models.empty() ? all_models() : opts.models;
  if (opts.map && *opts.map != kFenceAfterW && *opts.map != kFenceBeforeR &&
      *opts.map != kArm)
    throw UnsupportedFeature("unknown --map scheme '" + *opts.map + "'");
  const bool explicit_list = !opts.models.empty();
  std::vector<ModelRun> out;
  for (const auto& m : names) {
    if (std::find(all_models().begin(), all_models().end(), m) == all_models().end())
      throw UnsupportedFeature("unknown model '" + m + "'");
    if (m == "tso") {
      if (opts.map && *opts.map != kArm) {
        out.push_back({m, *opts.map});
      } else if (explicit_list) {
        throw UnsupportedFeature("--model tso needs --map fence-after-w or fence-before-r");
      } else {
        out.push_back({m, kFenceAfterW});
        out.push_back({m, kFenceBeforeR});
      }
    } else if (m == "armv8") {
      if (explicit_list && opts.map != kArm)
        throw UnsupportedFeature("--model armv8 needs --map armv8");
      out.push_back({m, kArm});
    } else {
      out.push_back({m, ""});
    }
  }
  return out;
}

std::vector<ExecutionGraph> weakestmo_executions(const Program& p,
                                                 const EnumerationBounds& b) {
  std::vector<ExecutionGraph> out;
  std::set<std::string> seen;
  for (const auto& s : enumerate_structures(p, b)) {
    for (const auto& x : extract_candidates(s)) {
      // No program: the structure does not see syntactic dependencies.
      ExecutionGraph g = associated_graph(s, x);
      if (!runs_to_completion(p, g)) continue;
      if (!check_immsc(g).consistent) continue;
      if (seen.insert(describe(g)).second) out.push_back(std::move(g));
    }
  }
  return out;
}

TestOutcome check_program(const Program& p, const std::vector<ModelRun>& runs,
                          const Options& opts) {
  TestOutcome t{p.name, "", {}};
  std::vector<ExecutionGraph> graphs;
  bool have_graphs = false;
  for (const auto& run : runs) {
    ModelOutcome m{run, 0, 0, {}};
    std::vector<FinalState> finals;
    if (run.model == "weakestmo") {
      auto execs = weakestmo_executions(p, opts.bounds);
      m.candidates = m.consistent = execs.size();
      for (const auto& g : execs) finals.push_back(final_state(p, g));
    } else {
      if (!have_graphs) {
        graphs = candidates(p, opts);
        have_graphs = true;
      }
      CheckOptions co;
      co.strict_psc = opts.strict_psc;
      co.tso_scheme = tso_scheme(run.scheme);
      m.candidates = graphs.size();
      for (const auto& g : graphs) {
        if (!check_model(run.model, g, co).consistent) continue;
        ++m.consistent;
        finals.push_back(final_state(p, g));
      }
    }
    for (const auto& clause : p.outcomes) {
      ClauseVerdict v;
      v.text = clause.text;
      v.allowed = std::any_of(finals.begin(), finals.end(), [&](const FinalState& f) {
        return satisfies(clause, f);
      });
      if (auto it = clause.expect.find(run.model); it != clause.expect.end())
        v.expected = it->second;
      m.clauses.push_back(v);
    }
    t.models.push_back(std::move(m));
  }
  return t;
}

nlohmann::json to_json(const TestOutcome& t) {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : t.models) {
    nlohmann::json clauses = nlohmann::json::array();
    for (const auto& c : m.clauses) {
      nlohmann::json j{{"clause", c.text}, {"allowed", c.allowed}, {"matches", c.matches()}};
      j["expected"] = c.expected ? nlohmann::json(*c.expected) : nlohmann::json();
      clauses.push_back(j);
    }
    models.push_back({{"model", m.run.model},
                      {"scheme", m.run.scheme},
                      {"candidates", m.candidates},
                      {"consistent", m.consistent},
                      {"clauses", clauses}});
  }
  return {{"name", t.name}, {"file", t.file}, {"matches", t.matches()}, {"models", models}};
}

std::vector<Value> parse_values(const std::string& s) {
  std::vector<Value> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw UnsupportedFeature("bad value '" + item + "' in --values");
    out.push_back(static_cast<Value>(v));
  }
  if (out.empty()) throw UnsupportedFeature("--values needs at least one value");
  return out;
}

int cmd_check(const std::vector<std::filesystem::path>& files,
              const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    const auto runs = resolve_models(opts);
    auto programs = load_all(files, err);
    if (!programs) return kExitError;
    std::vector<std::size_t> idx(files.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    auto outcomes = parallel_map(idx, opts.jobs, [&](std::size_t i) {
      TestOutcome t = check_program((*programs)[i], runs, opts);
      t.file = files[i].string();
      return t;
    });
    bool ok = true;
    nlohmann::json j = report("check");
    j["tests"] = nlohmann::json::array();
    for (const auto& t : outcomes) {
      ok = ok && t.matches();
      if (opts.json)
        j["tests"].push_back(to_json(t));
      else
        print_outcome(out, t);
    }
    if (opts.json) {
      j["matches"] = ok;
      out << j.dump(2) << "\n";
    } else {
      out << (ok ? "all expectations hold" : "expectation mismatch") << "\n";
    }
    return ok ? kExitOk : kExitMismatch;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

namespace {

struct SimReport {
  std::string graph;
  bool pass = false;
  std::string error;
  std::size_t steps = 0;
  std::size_t final_events = 0;
  std::vector<std::string> forks;
  std::vector<nlohmann::json> trace;
};

std::size_t cf_pairs(const EventStructure& s) { return s.derive().cf_imm.size(); }

SimReport simulate_one(const Program& p, const ExecutionGraph& g, std::size_t k,
                       const Options& opts) {
  SimReport r;
  r.graph = describe(g);
  try {
    SimState st = sim_init(p, g);
    const Traversal t = full_traversal(g);
    auto dump = [&](std::size_t step) {
      if (!opts.dot_out) return;
      std::ostringstream name;
      name << p.name << "-g" << k << "-step" << step;
      std::ofstream f(*opts.dot_out / (name.str() + ".dot"));
      if (!f) throw Error("cannot write to " + opts.dot_out->string());
      f << to_dot(st.s, name.str());
    };
    dump(0);
    for (const auto& s : t.steps) {
      SimStepLog log;
      const std::size_t before = cf_pairs(st.s);
      st = sim_step(st, s, &log);
      ++r.steps;
      if (cf_pairs(st.s) > before)
        r.forks.push_back(std::string(to_string(s.action)) + " " + to_string(g.ids[s.event]));
      if (opts.trace) r.trace.push_back(to_json(log, st.s));
      dump(r.steps);
    }
    if (!isomorphic_by_position(associated_graph(st.s, st.x, &p), g))
      throw TheoremViolation("final associated graph differs from the input");
    r.final_events = st.s.size() - st.s.init_count();
    r.pass = true;
  } catch (const TheoremViolation& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

int cmd_simulate(const std::vector<std::filesystem::path>& files,
                 const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    auto programs = load_all(files, err);
    if (!programs) return kExitError;
    if (opts.dot_out) std::filesystem::create_directories(*opts.dot_out);
    bool ok = true;
    nlohmann::json j = report("simulate");
    j["tests"] = nlohmann::json::array();
    for (std::size_t i = 0; i < programs->size(); ++i) {
      const Program& p = (*programs)[i];
      std::vector<ExecutionGraph> graphs;
      for (auto& g : candidates(p, opts))
        if (check_immsc(g).consistent) graphs.push_back(std::move(g));
      std::vector<std::size_t> idx(graphs.size());
      for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
      auto reports = parallel_map(idx, opts.jobs, [&](std::size_t k) {
        return simulate_one(p, graphs[k], k, opts);
      });
      std::size_t passed = 0;
      nlohmann::json runs = nlohmann::json::array();
      if (!opts.json) out << "test " << p.name << " (" << files[i].string() << ")\n";
      for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        passed += r.pass;
        if (opts.json) {
          nlohmann::json jr{{"graph", r.graph},          {"pass", r.pass},
                            {"steps", r.steps},          {"final_events", r.final_events},
                            {"forks", r.forks}};
          if (!r.pass) jr["error"] = r.error;
          if (opts.trace) jr["trace"] = r.trace;
          runs.push_back(jr);
          continue;
        }
        out << "  g" << k << " " << (r.pass ? "pass" : "FAIL") << "  " << r.graph << "\n";
        if (r.pass) {
          out << "     " << r.steps << " steps, " << r.final_events
              << " events in the final structure";
          for (const auto& f : r.forks) out << ", fork at " << f;
          out << "\n";
        } else {
          out << "     " << r.error << "\n";
        }
        if (opts.trace)
          for (const auto& step : r.trace) out << "     " << step.dump() << "\n";
      }
      ok = ok && passed == reports.size();
      if (opts.json)
        j["tests"].push_back({{"name", p.name},
                              {"file", files[i].string()},
                              {"executions", reports.size()},
                              {"passed", passed},
                              {"runs", runs}});
      else
        out << "  " << passed << "/" << reports.size() << " executions simulated\n";
    }
    if (opts.json) {
      j["pass"] = ok;
      out << j.dump(2) << "\n";
    }
    return ok ? kExitOk : kExitMismatch;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

namespace {

// Implications that compilation correctness predicts on a single candidate:
// target-consistent ⇒ source IMM_SC-consistent.
std::vector<std::string> implication_violations(const ExecutionGraph& g) {
  std::vector<std::string> out;
  if (check_immsc(g).consistent) return out;
  if (check_tso(map_to_tso(g, TsoScheme::FenceAfterScWrite)).consistent)
    out.push_back("tso[fence-after-w]");
  if (check_tso(map_to_tso(g, TsoScheme::FenceBeforeScRead)).consistent)
    out.push_back("tso[fence-before-r]");
  if (check_armv8(map_to_armv8(g)).consistent) out.push_back("armv8");
  if (check_imm(split_sc(g)).consistent) out.push_back("imm[split-sc]");
  return out;
}

}  // namespace

int cmd_diff(const std::vector<std::filesystem::path>& files,
             const Options& opts, std::ostream& out, std::ostream& err) {
  try {
    Options o = opts;
    if (o.models.empty()) o.models = {"imm", "immsc", "rc11"};
    std::vector<ModelRun> runs;
    for (const auto& m : o.models) {
      // tso without a scheme expands to both; armv8 has one.
      Options one = o;
      one.models = {m};
      if (m == "tso" && !o.map) {
        for (const char* s : {kFenceAfterW, kFenceBeforeR}) {
          one.map = s;
          for (auto& r : resolve_models(one)) runs.push_back(r);
        }
        continue;
      }
      if (m == "armv8") one.map = kArm;
      for (auto& r : resolve_models(one)) runs.push_back(r);
    }
    auto programs = load_all(files, err);
    if (!programs) return kExitError;
    std::vector<std::size_t> idx(files.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    struct Row {
      TestOutcome t;
      std::vector<std::string> violations;
      std::size_t candidates = 0;
    };
    auto rows = parallel_map(idx, opts.jobs, [&](std::size_t i) {
      const Program& p = (*programs)[i];
      Row r{check_program(p, runs, o), {}, 0};
      r.t.file = files[i].string();
      for (const auto& g : candidates(p, o)) {
        ++r.candidates;
        for (const auto& v : implication_violations(g))
          r.violations.push_back(v + ": " + describe(g));
      }
      return r;
    });
    std::size_t violations = 0;
    nlohmann::json j = report("diff");
    j["models"] = nlohmann::json::array();
    for (const auto& r : runs) j["models"].push_back(r.display());
    j["tests"] = nlohmann::json::array();
    for (const auto& r : rows) {
      violations += r.violations.size();
      if (opts.json) {
        nlohmann::json clauses = nlohmann::json::array();
        for (std::size_t c = 0; c < r.t.models.front().clauses.size(); ++c) {
          nlohmann::json verdicts = nlohmann::json::object();
          for (const auto& m : r.t.models) verdicts[m.run.display()] = m.clauses[c].allowed;
          clauses.push_back({{"clause", r.t.models.front().clauses[c].text}, {"allowed", verdicts}});
        }
        j["tests"].push_back({{"name", r.t.name},
                              {"file", r.t.file},
                              {"candidates", r.candidates},
                              {"clauses", clauses},
                              {"implication_violations", r.violations}});
        continue;
      }
      out << "test " << r.t.name << " (" << r.candidates << " candidates)\n";
      for (std::size_t c = 0; c < (r.t.models.empty() ? 0 : r.t.models.front().clauses.size()); ++c) {
        out << "  " << r.t.models.front().clauses[c].text << "\n";
        for (const auto& m : r.t.models)
          out << "    " << std::left << std::setw(22) << m.run.display()
              << allow_word(m.clauses[c].allowed) << "\n";
      }
      for (const auto& v : r.violations) out << "  IMPLICATION VIOLATED " << v << "\n";
    }
    if (opts.json) {
      j["implication_violations"] = violations;
      out << j.dump(2) << "\n";
    } else {
      out << violations << " implication violations\n";
    }
    return violations == 0 ? kExitOk : kExitMismatch;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_export(const std::filesystem::path& file, const Options& opts,
               std::ostream& out, std::ostream& err) {
  try {
    if (opts.models.size() > 1) throw UnsupportedFeature("export takes at most one --model");
    auto programs = load_all({file}, err);
    if (!programs) return kExitError;
    const Program& p = programs->front();
    std::vector<ExecutionGraph> graphs;
    if (!opts.models.empty() && opts.models[0] == "weakestmo") {
      graphs = weakestmo_executions(p, opts.bounds);
    } else {
      std::optional<ModelRun> run;
      if (!opts.models.empty()) run = resolve_models(opts).front();
      CheckOptions co;
      co.strict_psc = opts.strict_psc;
      if (run) co.tso_scheme = tso_scheme(run->scheme);
      for (auto& g : candidates(p, opts))
        if (!run || check_model(run->model, g, co).consistent) graphs.push_back(std::move(g));
    }
    if (opts.dot_out) std::filesystem::create_directories(*opts.dot_out);
    nlohmann::json j = report("export");
    j["name"] = p.name;
    j["graphs"] = nlohmann::json::array();
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      const std::string name = p.name + "-g" + std::to_string(k);
      if (opts.json) {
        j["graphs"].push_back(to_json(graphs[k]));
      } else if (opts.dot_out) {
        std::ofstream f(*opts.dot_out / (name + ".dot"));
        if (!f) throw Error("cannot write to " + opts.dot_out->string());
        f << to_dot(graphs[k], DotOptions{name});
      } else {
        out << to_dot(graphs[k], DotOptions{name});
      }
    }
    if (opts.json) out << j.dump(2) << "\n";
    else if (opts.dot_out)
      out << graphs.size() << " graphs written to " << opts.dot_out->string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace wmlab::cli
