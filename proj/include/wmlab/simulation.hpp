// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

// Builds an event structure alongside a traversal of a consistent execution
// graph, keeping a selected execution X that tracks the covered and issued
// events, and checks the relation between the two after every step.

#ifndef WMLAB_SIMULATION_HPP_
#define WMLAB_SIMULATION_HPP_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmlab/event_structure.hpp"
#include "wmlab/graph.hpp"
#include "wmlab/litmus.hpp"
#include "wmlab/models.hpp"
#include "wmlab/traversal.hpp"

namespace wmlab {

struct SimState {
  const Program* program = nullptr;
  const ExecutionGraph* graph = nullptr;
  TraversalConfig tc;
  EventStructure s;
  EventSet x;

  // Graph index of structure event e: init by location, otherwise
  // (tid, number of non-init po-predecessors + 1).  Empty if g has no such
  // event.
  std::optional<std::size_t> s2g(std::size_t e) const;
};

// Clause names: 1 2 3 4 5a 5b 6 7 8a 8b 9 10 11 12.  Witnesses carry the
// offending graph events (for lifted relations) or structure events as
// (tid, index).
Verdict check_simrel(const SimState& st);

// Throws PreconditionError for an inconsistent graph, TheoremViolation if
// the relation fails at the start.
SimState sim_init(const Program& p, const ExecutionGraph& g);

// What one step did to the structure.
struct SimStepLog {
  TravAction action;
  EventId event;
  std::vector<std::size_t> added;  // structure indices
  std::vector<std::size_t> reused;
  nlohmann::json choices;          // per added event: jf / ew / co placement
  Verdict simrel;
};

// Moves to `next`, which must be a traversal step from st.tc.  Throws
// TheoremViolation when the branch cannot be built or the relation fails.
SimState sim_step(const SimState& st, const TravStep& step,
                  SimStepLog* log = nullptr);

struct SimResult {
  EventStructure s;
  EventSet x;
  Traversal traversal;
  std::vector<SimStepLog> log;
};

// Label-, po-, rf- and co-preserving bijection given by position.
bool isomorphic_by_position(const ExecutionGraph& a, const ExecutionGraph& b);

// Follows full_traversal(g) from sim_init; at the end checks that x is
// extractable and its associated graph matches g.
SimResult run_simulation(const Program& p, const ExecutionGraph& g);

nlohmann::json to_json(const SimStepLog& log, const EventStructure& s);

}  // namespace wmlab

#endif  // WMLAB_SIMULATION_HPP_
