// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#ifndef WMLAB_MODELS_HPP_
#define WMLAB_MODELS_HPP_

#include <string>
#include <vector>

#include "wmlab/graph.hpp"

namespace wmlab {

// A cycle (or, for completeness, a single offending event) in the relation
// named by `relation`.  Consecutive events, wrapping around, are related.
struct Witness {
  std::string axiom;
  std::string relation;
  std::vector<EventId> events;
};

struct Verdict {
  bool consistent = true;
  std::vector<std::string> violated;
  std::vector<Witness> witnesses;  // one per violated axiom, same order

  bool violates(const std::string& axiom) const;
  std::string summary() const;
};

struct ImmOptions {
  // Adds psc_base (and bob) to the thin-air acyclicity check.
  bool strict_psc = false;
};

// completeness, coherence, no-thin-air (rf ∪ ppo acyclic), psc (psc_f
// acyclic; vacuous without SC fences).
Verdict check_imm(const ExecutionGraph& g);
// check_imm plus acyclicity of psc_base ∪ psc_f.
Verdict check_immsc(const ExecutionGraph& g, const ImmOptions& opts = {});
// completeness, coherence, psc, po ∪ rf acyclic.
Verdict check_rc11(const ExecutionGraph& g);
Verdict check_tso(const TsoGraph& g);
Verdict check_armv8(const ArmGraph& g);

// IMM-style blocking order: po;[W^⊒rel] ∪ [R^⊒acq];po ∪ po;[F] ∪ [F];po.
Rel barrier_order(const ExecutionGraph& g);

enum class TsoScheme { FenceAfterScWrite, FenceBeforeScRead };

// Compilation mappings.  Events keep their thread; serials are doubled so
// an inserted fence sits at 2n+1 (after event n) or 2n-1 (before it).
TsoGraph map_to_tso(const ExecutionGraph& g, TsoScheme scheme);
ArmGraph map_to_armv8(const ExecutionGraph& g);
// Puts an SC fence right before every SC access and weakens the access to
// acquire (reads) or release (writes).  Serials are renumbered per thread.
ExecutionGraph split_sc(const ExecutionGraph& g);

// Graph-level model names: imm, immsc, rc11, tso, armv8.
const std::vector<std::string>& graph_models();

struct CheckOptions {
  bool strict_psc = false;
  TsoScheme tso_scheme = TsoScheme::FenceAfterScWrite;
};

// Dispatches on a model name; tso and armv8 check the mapped graph.
// Throws UnsupportedFeature for other names.
Verdict check_model(const std::string& model, const ExecutionGraph& g,
                    const CheckOptions& opts = {});

}  // namespace wmlab

#endif  // WMLAB_MODELS_HPP_
