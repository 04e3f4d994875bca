// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include "wmlab/simulation.hpp"

#include <algorithm>

namespace wmlab {

using nlohmann::json;

std::optional<std::size_t> SimState::s2g(std::size_t e) const {
  const EsEvent& ev = s.event(e);
  if (ev.tid == 0)
    return graph->index_of(EventId{0, static_cast<std::uint32_t>(ev.label.loc)});
  return graph->index_of(EventId{ev.tid, ev.depth});
}

namespace {

EventSet grow(const EventSet& x, std::size_t n) {
  EventSet out(n);
  x.for_each([&](std::size_t e) { out.insert(e); });
  return out;
}

// Everything covered or po-before an issued write.
EventSet simulated_part(const ExecutionGraph& g, const TraversalConfig& tc) {
  return tc.covered | compose(opt(g.po), Rel::identity_on(tc.issued)).domain();
}

struct Lift {
  const ExecutionGraph& g;
  std::vector<std::size_t> img;

  EventSet set(const EventSet& a) const {
    EventSet out(g.size());
    a.for_each([&](std::size_t e) { out.insert(img[e]); });
    return out;
  }
  Rel rel(const Rel& r) const {
    Rel out(g.size());
    r.for_each([&](std::size_t a, std::size_t b) { out.insert(img[a], img[b]); });
    return out;
  }
  EventSet preimage(const EventSet& a) const {
    EventSet out(img.size());
    for (std::size_t e = 0; e < img.size(); ++e)
      if (a.contains(img[e])) out.insert(e);
    return out;
  }
};

EventId es_id(const EventStructure& s, std::size_t e) {
  return EventId{s.event(e).tid, static_cast<std::uint32_t>(e)};
}

}  // namespace

Verdict check_simrel(const SimState& st) {
  const ExecutionGraph& g = *st.graph;
  const EventStructure& s = st.s;
  Verdict v;
  auto fail = [&](const std::string& clause, const std::string& rel,
                  std::vector<EventId> evs = {}) {
    v.consistent = false;
    v.violated.push_back(clause);
    v.witnesses.push_back({clause, rel, std::move(evs)});
  };
  // Lifted pairs outside `allowed`, reported on graph events.
  auto check_in = [&](const std::string& clause, const std::string& rel,
                      const Rel& lifted, const Rel& allowed) {
    const Rel extra = lifted - allowed;
    if (extra.empty()) return;
    auto [a, b] = extra.pairs().front();
    fail(clause, rel, {g.ids[a], g.ids[b]});
  };

  if (!check_immsc(g).consistent) fail("1", "G is not IMM_SC-consistent");
  if (!check_es_consistent(s).consistent) fail("2", "S is not consistent");
  const EsDerived d = s.derive();
  if (st.x.universe() != s.size() || !is_extractable(s, d, st.x)) {
    fail("3", "X is not extractable");
    if (st.x.universe() != s.size()) return v;
  }

  Lift lift{g, {}};
  for (std::size_t e = 0; e < s.size(); ++e) {
    auto i = st.s2g(e);
    if (!i) {
      fail("5a", "event without a graph counterpart", {es_id(s, e)});
      return v;
    }
    lift.img.push_back(*i);
  }

  const EventSet part = simulated_part(g, st.tc);
  if (!(lift.set(s.all()) == part && lift.set(st.x) == part))
    fail("4", "⌈S.E⌉ = ⌈X⌉ = C ∪ dom(po?;[I])");

  for (std::size_t e = 0; e < s.size(); ++e) {
    const Label& a = s.event(e).label;
    const Label& b = g.labels[lift.img[e]];
    if (a.kind != b.kind || a.mode != b.mode || a.loc != b.loc ||
        s.event(e).tid != g.ids[lift.img[e]].tid) {
      fail("5a", "tid/type/loc/mode agree", {es_id(s, e)});
      break;
    }
  }
  const EventSet x_ci = st.x & lift.preimage(st.tc.covered | st.tc.issued);
  for (std::size_t e : x_ci.elements())
    if (s.event(e).label.val != g.labels[lift.img[e]].val) {
      fail("5b", "values agree on X ∩ ⌊C ∪ I⌋", {es_id(s, e)});
      break;
    }

  check_in("6", "⌈S.po⌉ ⊆ G.po", lift.rel(d.po), g.po);

  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      if (lift.img[a] == lift.img[b] && !d.cf.contains(a, b)) {
        fail("7", "⌊id⌋ ⊆ S.cf?", {es_id(s, a), es_id(s, b)});
        a = b = s.size();
      }

  const Rel g_hb = derive(g).hb;
  check_in("8a", "⌈S.jf⌉ ⊆ G.rf?;G.hb?", lift.rel(d.jf),
           compose(opt(g.rf), opt(g_hb)));
  const EventSet x_c = st.x & lift.preimage(st.tc.covered);
  check_in("8b", "⌈S.jf;[X ∩ ⌊C⌋]⌉ ⊆ G.rf",
           lift.rel(compose(d.jf, Rel::identity_on(x_c))), g.rf);

  const Rel to_x_i = Rel::identity_on(st.x & lift.preimage(st.tc.issued));
  const EventSet uncovered =
      d.jfe.domain() - compose(d.ew, to_x_i).domain();
  if (!uncovered.empty())
    fail("9", "dom(S.jfe) ⊆ dom(S.ew;[X ∩ ⌊I⌋])", {es_id(s, *uncovered.first())});

  check_in("10", "⌈S.ew⌉ ⊆ id", lift.rel(d.ew), Rel::identity(g.size()));

  const Rel ew_ok = opt(compose({d.ew, to_x_i, d.ew}));
  if (!d.ew.subset_of(ew_ok)) {
    auto [a, b] = (d.ew - ew_ok).pairs().front();
    fail("11", "S.ew ⊆ (S.ew;[X ∩ ⌊I⌋];S.ew)?", {es_id(s, a), es_id(s, b)});
  }

  check_in("12", "⌈S.co⌉ ⊆ G.co?", lift.rel(d.co), opt(g.co));
  return v;
}

SimState sim_init(const Program& p, const ExecutionGraph& g) {
  SimState st;
  st.program = &p;
  st.graph = &g;
  st.tc = init_config(g);
  st.s = EventStructure::initial(p);
  st.x = st.s.all();
  Verdict v = check_simrel(st);
  if (!v.consistent)
    throw TheoremViolation("simulation relation fails initially: " + v.summary());
  return st;
}

SimState sim_step(const SimState& st, const TravStep& step, SimStepLog* log) {
  const ExecutionGraph& g = *st.graph;
  const Program& p = *st.program;
  const TraversalConfig& next = step.next;
  const std::uint32_t t = g.ids[step.event].tid;
  auto violation = [&](const std::string& what) {
    return TheoremViolation(std::string(to_string(step.action)) + " " +
                            to_string(g.ids[step.event]) + ": " + what);
  };

  const Rel sjf = stable_justification(g, next);
  std::uint32_t length = 0;
  simulated_part(g, next).for_each([&](std::size_t e) {
    if (g.ids[e].tid == t) length = std::max(length, g.ids[e].serial);
  });

  // Representative in X of a graph event.
  auto representative = [&](std::size_t gi) -> std::optional<std::size_t> {
    for (std::size_t e : st.x.elements())
      if (st.s2g(e) == gi) return e;
    return std::nullopt;
  };

  SimState out = st;
  out.tc = next;
  EventStructure& s = out.s;
  std::vector<std::size_t> branch, added, reused;
  json choices = json::array();
  ThreadRunner run(p, t);
  int cur = kNone;

  for (std::uint32_t k = 1; k <= length; ++k) {
    if (run.done()) throw violation("thread " + std::to_string(t) + " ended early");
    const auto gi = g.index_of(EventId{t, k});
    if (!gi) throw violation("graph lacks " + to_string(EventId{t, k}));
    Label label = run.peek();
    EsChoice c;
    c.tid = t;
    c.parent = cur;
    json choice = {{"position", event_id_json(EventId{t, k})}};

    if (label.is_read()) {
      auto src = sjf.predecessors(*gi).first();
      if (!src) throw violation("no stable justification for " + to_string(g.ids[*gi]));
      const EventId sid = g.ids[*src];
      int j = kNone;
      if (sid.is_init()) {
        j = static_cast<int>(s.init_event(label.loc));
      } else if (sid.tid == t && sid.serial < k) {
        j = static_cast<int>(branch[sid.serial - 1]);
      } else if (sid.tid != t && st.tc.issued.contains(*src)) {
        auto r = representative(*src);
        if (!r) throw violation("issued " + to_string(sid) + " has no representative");
        j = static_cast<int>(*r);
      } else {
        throw violation("justification source " + to_string(sid) +
                        " is neither issued nor po-earlier");
      }
      label.val = s.event(j).label.val;
      c.justification = j;
      choice["jf"] = j;
    } else {
      // Writes and fences: the value follows from the reads so far.
      ThreadRunner probe = run;
      label = probe.step();
    }

    std::optional<std::size_t> found;
    for (std::size_t ch : s.children(t, cur)) {
      const EsEvent& ev = s.event(ch);
      if (ev.label == label && (!label.is_read() || ev.jf == c.justification)) {
        found = ch;
        break;
      }
    }
    run.step(label.val);
    if (found) {
      cur = static_cast<int>(*found);
      reused.push_back(*found);
      branch.push_back(*found);
      continue;
    }

    c.label = label;
    if (label.is_write()) {
      // Join the class of an issued X write at the same position with the
      // same label; otherwise slot in before every write mapped to this
      // position or later in G's coherence order.
      auto rep = representative(*gi);
      if (rep && st.tc.issued.contains(*gi) && s.event(*rep).label == label) {
        c.ew_with = static_cast<int>(*rep);
        choice["ew"] = *rep;
      } else {
        const auto& order = s.co_order().at(static_cast<std::size_t>(label.loc));
        int after = kNone;
        for (int cls : order) {
          const std::size_t m = s.class_members(cls).front();
          auto img = out.s2g(m);
          if (img && g.co.contains(*img, *gi)) after = static_cast<int>(m);
        }
        if (after == kNone) throw violation("no co position for the new write");
        c.co_after = after;
        choice["co_after"] = after;
      }
    }
    try {
      s = add_event(s, c, p);
    } catch (const StepRejected& e) {
      throw violation(std::string("construction step rejected (") +
                      std::string(to_string(e.reason())) + "): " + e.what());
    }
    cur = static_cast<int>(s.size() - 1);
    added.push_back(s.size() - 1);
    branch.push_back(s.size() - 1);
    choice["event"] = s.size() - 1;
    choices.push_back(std::move(choice));
  }

  out.x = grow(st.x, s.size()) - s.thread_events(t);
  for (auto e : branch) out.x.insert(e);

  Verdict v = check_simrel(out);
  if (log) {
    log->action = step.action;
    log->event = g.ids[step.event];
    log->added = added;
    log->reused = reused;
    log->choices = choices;
    log->simrel = v;
  }
  if (!v.consistent) throw violation("simulation relation fails: " + v.summary());
  return out;
}

bool isomorphic_by_position(const ExecutionGraph& a, const ExecutionGraph& b) {
  return a.ids == b.ids && a.labels == b.labels && a.po == b.po &&
         a.rf == b.rf && a.co == b.co;
}

SimResult run_simulation(const Program& p, const ExecutionGraph& g) {
  SimState st = sim_init(p, g);
  SimResult res;
  res.traversal = full_traversal(g);
  for (const auto& step : res.traversal.steps) {
    SimStepLog log;
    st = sim_step(st, step, &log);
    res.log.push_back(std::move(log));
  }
  const EsDerived d = st.s.derive();
  if (!is_extractable(st.s, d, st.x))
    throw TheoremViolation("final selection is not extractable");
  if (!isomorphic_by_position(associated_graph(st.s, st.x, &p), g))
    throw TheoremViolation("final selection differs from " + describe(g));
  res.s = std::move(st.s);
  res.x = std::move(st.x);
  return res;
}

json to_json(const SimStepLog& log, const EventStructure& s) {
  json added = json::array();
  for (auto e : log.added)
    added.push_back({{"event", e},
                     {"position", event_id_json(graph_id(s, e))},
                     {"label", to_string(s.event(e).label, s.locations())}});
  return {{"action", std::string(to_string(log.action))},
          {"target", event_id_json(log.event)},
          {"added", added},
          {"reused", log.reused},
          {"choices", log.choices},
          {"simrel", log.simrel.consistent ? "holds" : log.simrel.summary()}};
}

}  // namespace wmlab
