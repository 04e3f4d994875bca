// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include "wmlab/traversal.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "wmlab/models.hpp"

namespace wmlab {

namespace {

Rel rf_internal(const ExecutionGraph& g) { return g.rf & g.po; }

// Source of read r, if any.
std::optional<std::size_t> rf_source(const ExecutionGraph& g, std::size_t r) {
  return g.rf.predecessors(r).first();
}

std::string set_str(const ExecutionGraph& g, const EventSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](std::size_t i) {
    if (g.ids[i].is_init()) return;
    out += (first ? "" : " ") + to_string(g.ids[i]);
    first = false;
  });
  return out + "}";
}

}  // namespace

TraversalConfig init_config(const ExecutionGraph& g) {
  Verdict v = check_immsc(g);
  if (!v.consistent)
    throw PreconditionError("traversal of an inconsistent graph: " + v.summary());
  return {g.init_events(), g.init_events()};
}

TraversalConfig final_config(const ExecutionGraph& g) {
  return {g.all(), g.writes() | g.init_events()};
}

bool is_final(const ExecutionGraph& g, const TraversalConfig& tc) {
  return tc == final_config(g);
}

std::vector<std::string> config_issues(const ExecutionGraph& g,
                                       const TraversalConfig& tc) {
  std::vector<std::string> out;
  const EventSet init = g.init_events();
  if (tc.covered.universe() != g.size() || tc.issued.universe() != g.size())
    return {"configuration over the wrong carrier"};
  if (!tc.issued.subset_of(g.writes() | init)) out.push_back("I ⊄ W ∪ Init");
  if (!init.subset_of(tc.covered & tc.issued)) out.push_back("Init ⊄ C ∩ I");
  if (!compose(g.po, Rel::identity_on(tc.covered)).domain().subset_of(tc.covered))
    out.push_back("C not po-downward-closed");
  if (!(tc.covered & g.writes()).subset_of(tc.issued)) out.push_back("C ∩ W ⊄ I");
  return out;
}

EventSet determined(const ExecutionGraph& g, const TraversalConfig& tc) {
  const Rel rfi = rf_internal(g);
  const Rel to_issued = Rel::identity_on(tc.issued);
  return tc.covered | tc.issued |
         compose({opt(rfi), g.ppo, to_issued}).domain() |
         compose(to_issued, rfi).codomain();
}

Rel viewfront(const ExecutionGraph& g, const TraversalConfig& tc) {
  const Rel hb = derive(g).hb;
  const Rel observed = compose({Rel::identity_on(g.writes()),
                                opt(compose(g.rf, Rel::identity_on(tc.covered))),
                                opt(hb)});
  const Rel via_determined =
      compose({g.rf, Rel::identity_on(determined(g, tc)), opt(g.po)});
  return observed | via_determined;
}

Rel stable_justification(const ExecutionGraph& g, const TraversalConfig& tc) {
  const Rel vf = viewfront(g, tc);
  const Rel candidates = restrict(vf & g.same_loc(), g.writes(), g.reads());
  return candidates - compose(g.co, vf);
}

std::string_view to_string(TravAction a) {
  switch (a) {
    case TravAction::Issue: return "issue";
    case TravAction::Cover: return "cover";
    case TravAction::IssueCover: return "issue+cover";
  }
  return "?";
}

bool can_issue(const ExecutionGraph& g, const TraversalConfig& tc,
               std::size_t w) {
  if (!g.labels[w].is_write() || tc.issued.contains(w)) return false;
  // External reads feeding w through ppo must read from issued writes.
  bool ok = true;
  g.ppo.predecessors(w).for_each([&](std::size_t r) {
    auto src = rf_source(g, r);
    if (src && !g.po.contains(*src, r) && !tc.issued.contains(*src)) ok = false;
  });
  return ok;
}

bool can_cover(const ExecutionGraph& g, const TraversalConfig& tc,
               std::size_t e) {
  if (tc.covered.contains(e)) return false;
  if (!g.po.predecessors(e).subset_of(tc.covered)) return false;
  if (g.labels[e].is_read()) {
    auto src = rf_source(g, e);
    return src && tc.issued.contains(*src);
  }
  if (g.labels[e].is_write()) return tc.issued.contains(e);
  return true;
}

std::vector<TravStep> trav_steps(const ExecutionGraph& g,
                                 const TraversalConfig& tc) {
  std::vector<TravStep> out;
  for (std::size_t e = 0; e < g.size(); ++e) {
    if (can_cover(g, tc, e)) {
      TraversalConfig next = tc;
      next.covered.insert(e);
      out.push_back({TravAction::Cover, e, next});
    } else if (g.labels[e].is_write() && !tc.covered.contains(e) &&
               g.po.predecessors(e).subset_of(tc.covered) && can_issue(g, tc, e)) {
      TraversalConfig next = tc;
      next.issued.insert(e);
      next.covered.insert(e);
      out.push_back({TravAction::IssueCover, e, next});
    }
  }
  for (std::size_t w = 0; w < g.size(); ++w) {
    if (!can_issue(g, tc, w)) continue;
    TraversalConfig next = tc;
    next.issued.insert(w);
    out.push_back({TravAction::Issue, w, next});
  }
  return out;
}

std::vector<TraversalConfig> Traversal::configs() const {
  std::vector<TraversalConfig> out{start};
  for (const auto& s : steps) out.push_back(s.next);
  return out;
}

Traversal full_traversal(const ExecutionGraph& g) {
  Traversal t{init_config(g), {}};
  const TraversalConfig goal = final_config(g);
  std::set<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> dead;
  std::vector<std::string> stuck;

  std::function<bool(const TraversalConfig&)> search =
      [&](const TraversalConfig& tc) {
        if (tc == goal) return true;
        auto key = std::make_pair(tc.covered.words(), tc.issued.words());
        if (dead.count(key)) return false;
        auto steps = trav_steps(g, tc);
        if (steps.empty()) stuck.push_back(describe(g, tc));
        for (auto& s : steps) {
          t.steps.push_back(s);
          if (search(s.next)) return true;
          t.steps.pop_back();
        }
        dead.insert(key);
        return false;
      };
  if (!search(t.start)) {
    std::string msg = "no full traversal of " + describe(g) + "; stuck at";
    for (const auto& s : stuck) msg += " " + s;
    throw TheoremViolation(msg);
  }
  return t;
}

bool is_valid_traversal(const ExecutionGraph& g,
                        const std::vector<TraversalConfig>& configs) {
  for (std::size_t i = 0; i + 1 < configs.size(); ++i) {
    bool found = false;
    for (const auto& s : trav_steps(g, configs[i]))
      found = found || s.next == configs[i + 1];
    if (!found) return false;
  }
  return true;
}

nlohmann::json to_json(const ExecutionGraph& g, const Traversal& t) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : t.steps) {
    auto add = [&](std::string_view action) {
      out.push_back({{"action", std::string(action)},
                     {"event", event_id_json(g.ids[s.event])}});
    };
    // The fused step is an issue immediately followed by a cover.
    if (s.action == TravAction::IssueCover) {
      add("issue");
      add("cover");
    } else {
      add(to_string(s.action));
    }
  }
  return out;
}

std::string describe(const ExecutionGraph& g, const TraversalConfig& tc) {
  std::ostringstream os;
  os << "<C=" << set_str(g, tc.covered) << ", I=" << set_str(g, tc.issued) << ">";
  return os.str();
}

}  // namespace wmlab
