// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

// Traversals of a consistent execution graph: writes are issued once the
// external reads they depend on read from issued writes, and events are
// covered in program order.

#ifndef WMLAB_TRAVERSAL_HPP_
#define WMLAB_TRAVERSAL_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "wmlab/graph.hpp"
#include "wmlab/rel.hpp"

namespace wmlab {

struct TraversalConfig {
  EventSet covered;
  EventSet issued;
  bool operator==(const TraversalConfig&) const = default;
};

// ⟨Init, Init⟩; throws PreconditionError unless g is IMM_SC-consistent.
TraversalConfig init_config(const ExecutionGraph& g);
// ⟨E, W ∪ Init⟩.
TraversalConfig final_config(const ExecutionGraph& g);
bool is_final(const ExecutionGraph& g, const TraversalConfig& tc);

// Invariant violations of tc, empty when valid.
std::vector<std::string> config_issues(const ExecutionGraph& g,
                                       const TraversalConfig& tc);

// C ∪ I ∪ dom(rfi?;ppo;[I]) ∪ codom([I];rfi)
EventSet determined(const ExecutionGraph& g, const TraversalConfig& tc);
// [W];(rf;[C])?;hb? ∪ rf;[determined];po?
Rel viewfront(const ExecutionGraph& g, const TraversalConfig& tc);
// For each read, the co-last same-location write in its viewfront.
Rel stable_justification(const ExecutionGraph& g, const TraversalConfig& tc);

enum class TravAction { Issue, Cover, IssueCover };
std::string_view to_string(TravAction a);

struct TravStep {
  TravAction action;
  std::size_t event;
  TraversalConfig next;
};

bool can_issue(const ExecutionGraph& g, const TraversalConfig& tc,
               std::size_t w);
bool can_cover(const ExecutionGraph& g, const TraversalConfig& tc,
               std::size_t e);

// Successors in search order: covers (plain or fused with the issue of an
// unissued write) by event index, then issues by event index.
std::vector<TravStep> trav_steps(const ExecutionGraph& g,
                                 const TraversalConfig& tc);

struct Traversal {
  TraversalConfig start;
  std::vector<TravStep> steps;

  std::vector<TraversalConfig> configs() const;
};

// Depth-first search from init_config to final_config.  Throws
// TheoremViolation naming the configurations where every branch got stuck.
Traversal full_traversal(const ExecutionGraph& g);

// Is every consecutive pair of configs a single traversal step?
bool is_valid_traversal(const ExecutionGraph& g,
                        const std::vector<TraversalConfig>& configs);

nlohmann::json to_json(const ExecutionGraph& g, const Traversal& t);
std::string describe(const ExecutionGraph& g, const TraversalConfig& tc);

}  // namespace wmlab

#endif  // WMLAB_TRAVERSAL_HPP_
