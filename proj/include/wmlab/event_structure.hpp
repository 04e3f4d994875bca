// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

// Event structures for the relaxed+SC fragment: events with po forming a
// forest per thread, a justification write per read, equal-write classes
// and a coherence order over those classes.

#ifndef WMLAB_EVENT_STRUCTURE_HPP_
#define WMLAB_EVENT_STRUCTURE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wmlab/error.hpp"
#include "wmlab/graph.hpp"
#include "wmlab/label.hpp"
#include "wmlab/litmus.hpp"
#include "wmlab/models.hpp"
#include "wmlab/rel.hpp"

namespace wmlab {

constexpr int kNone = -1;

struct EsEvent {
  std::uint32_t tid = 0;  // 0 for init events
  Label label;
  int parent = kNone;     // immediate po-predecessor in the thread
  int jf = kNone;         // reads: justifying write
  int ew_class = kNone;   // writes: equal-write class
  std::uint32_t depth = 0;  // position in the thread, 1-based; 0 for init
};

struct EsDerived {
  Rel po, po_imm, jf, ew, co, cf, cf_imm, jfe, rf, fr, eco, hb, ecf;
  EventSet vis;
};

class EventStructure {
 public:
  EventStructure() = default;
  // Only the init writes, one per location.
  static EventStructure initial(const std::vector<std::string>& locations);
  static EventStructure initial(const Program& p) { return initial(p.locations); }

  std::size_t size() const { return events_.size(); }
  const EsEvent& event(std::size_t e) const { return events_.at(e); }
  const std::vector<EsEvent>& events() const { return events_; }
  const std::vector<std::string>& locations() const { return locations_; }
  std::size_t init_count() const { return locations_.size(); }
  bool is_init(std::size_t e) const { return events_[e].tid == 0; }
  std::size_t init_event(Loc loc) const { return static_cast<std::size_t>(loc); }

  // Per location, the equal-write classes in coherence order.
  const std::vector<std::vector<int>>& co_order() const { return co_order_; }
  // Members of an equal-write class, ascending.
  std::vector<std::size_t> class_members(int ew_class) const;
  int class_count() const { return next_class_; }

  EventSet all() const { return EventSet::full(size()); }
  EventSet init_events() const;
  EventSet reads() const;
  EventSet writes() const;
  EventSet thread_events(std::uint32_t tid) const;
  std::vector<std::uint32_t> thread_ids() const;
  // Events with `e` as immediate po-predecessor; kNone lists thread roots.
  std::vector<std::size_t> children(std::uint32_t tid, int e) const;
  // The thread path from its root to e, inclusive.
  std::vector<std::size_t> path_to(int e) const;
  bool po_before(std::size_t a, std::size_t b) const;
  bool in_conflict(std::size_t a, std::size_t b) const;

  EsDerived derive() const;

  // Low-level mutation used by add_event; performs no consistency checks.
  std::size_t push_event(const EsEvent& e);
  void join_class(std::size_t write, int ew_class);
  // Places write's (fresh) class directly after `after_class` for its
  // location.
  void place_class_after(std::size_t write, int after_class);

  // Canonical description, equal for structures that differ only in the
  // order events were added.
  std::string canonical_key() const;

 private:
  std::vector<std::string> locations_;
  std::vector<EsEvent> events_;
  std::vector<std::vector<int>> co_order_;
  int next_class_ = 0;
};

// One nondeterministic construction step.
struct EsChoice {
  std::uint32_t tid = 1;
  int parent = kNone;     // kNone: new root of the thread
  Label label;            // reads carry the value they will observe
  int justification = kNone;  // reads
  int ew_with = kNone;    // writes: join this write's class
  int co_after = kNone;   // writes not joining: new class right after this
                          // write's class
};

class StepRejected : public Error {
 public:
  enum class Reason {
    InvalidStep,
    ConflictingJustification,
    CoEwTyping,
    InconsistentStructure,
  };
  StepRejected(Reason r, const std::string& msg) : Error(msg), reason_(r) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

std::string_view to_string(StepRejected::Reason r);

// Axiom names: cf_imm-read, cf_imm-justification, ecf-irreflexivity,
// jf-non-conflict, jfe-visible, coherence.
Verdict check_es_consistent(const EventStructure& s);

// The label the thread would produce next after `parent` (kNone for its
// first event), or nothing if the thread ends there.  Reads come back with
// value 0.
std::optional<Label> next_label(const Program& p, const EventStructure& s,
                                std::uint32_t tid, int parent);

// Returns the extended structure or throws StepRejected.  po ∪ jf
// acyclicity is asserted on the result.
EventStructure add_event(const EventStructure& s, const EsChoice& c,
                         const Program& p);

struct EnumerationBounds {
  std::size_t max_events = 12;  // non-init events
  std::size_t max_forks = 2;    // per thread: extra children beyond the first
};

// Every consistent structure reachable within the bounds, one per
// isomorphism class, in discovery order.
std::vector<EventStructure> enumerate_structures(
    const Program& p, const EnumerationBounds& bounds = {});

// Is x conflict-free, rf-complete, visible, po-downward-closed and maximal?
bool is_extractable(const EventStructure& s, const EsDerived& d,
                    const EventSet& x);
std::vector<EventSet> extract_candidates(const EventStructure& s);

// Events re-identified as (tid, depth) and (0, loc).  With a program, data
// and ppo are recomputed from it.
ExecutionGraph associated_graph(const EventStructure& s, const EventSet& x,
                                const Program* p = nullptr);
// The graph id of every event of s.
EventId graph_id(const EventStructure& s, std::size_t e);

std::string to_dot(const EventStructure& s, const std::string& name = "S");
nlohmann::json to_json(const EventStructure& s);

}  // namespace wmlab

#endif  // WMLAB_EVENT_STRUCTURE_HPP_
