// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include "wmlab/models.hpp"

#include <algorithm>
#include <sstream>

namespace wmlab {

bool Verdict::violates(const std::string& axiom) const {
  return std::find(violated.begin(), violated.end(), axiom) != violated.end();
}

std::string Verdict::summary() const {
  if (consistent) return "consistent";
  std::ostringstream os;
  os << "violates";
  for (std::size_t i = 0; i < violated.size(); ++i) {
    os << " " << violated[i];
    if (i < witnesses.size() && !witnesses[i].events.empty()) {
      os << " [" << witnesses[i].relation << ":";
      for (auto id : witnesses[i].events) os << " " << to_string(id);
      os << "]";
    }
  }
  return os.str();
}

namespace {

class Checker {
 public:
  explicit Checker(const std::vector<EventId>& ids) : ids_(ids) {}

  void require_acyclic(const char* axiom, const char* relname, const Rel& r) {
    if (is_acyclic(r)) return;
    fail(axiom, relname, shortest_cycle(r));
  }

  // `r` must be irreflexive; the witness is a cycle in `explain`.
  void require_irreflexive(const char* axiom, const Rel& r,
                           const char* relname, const Rel& explain) {
    if (r.is_irreflexive()) return;
    fail(axiom, relname, shortest_cycle(explain));
  }

  void require_complete(const EventSet& reads, const Rel& rf) {
    EventSet missing = reads - rf.codomain();
    if (missing.empty()) return;
    fail("completeness", "R \\ codom(rf)", {*missing.first()});
  }

  template <class G>
  void require_co_total(const G& g) {
    const EventSet W = g.writes();
    for (std::size_t a : W.elements())
      for (std::size_t b : W.elements())
        if (a < b && g.labels[a].loc == g.labels[b].loc &&
            !g.co.contains(a, b) && !g.co.contains(b, a)) {
          fail("coherence", "co totality", {a, b});
          return;
        }
  }

  Verdict take() { return std::move(v_); }

 private:
  void fail(const char* axiom, const char* relname,
            const std::vector<std::size_t>& cycle) {
    if (v_.violates(axiom)) return;
    v_.consistent = false;
    v_.violated.emplace_back(axiom);
    Witness w{axiom, relname, {}};
    for (auto i : cycle) w.events.push_back(ids_[i]);
    v_.witnesses.push_back(std::move(w));
  }

  const std::vector<EventId>& ids_;
  Verdict v_;
};

void imm_core(Checker& c, const ExecutionGraph& g, const DerivedRels& d) {
  c.require_complete(g.reads(), g.rf);
  c.require_irreflexive("coherence", compose(d.hb, opt(d.eco)), "hb ∪ eco",
                        d.hb | d.eco);
}

}  // namespace

Rel barrier_order(const ExecutionGraph& g) {
  const EventSet all = g.all();
  const EventSet rel_w = g.select([&](std::size_t i) {
    return g.labels[i].is_write() && at_least_rel(g.labels[i].mode);
  });
  const EventSet acq_r = g.select([&](std::size_t i) {
    return g.labels[i].is_read() && at_least_acq(g.labels[i].mode);
  });
  const EventSet F = g.fences();
  return restrict(g.po, all, rel_w) | restrict(g.po, acq_r, all) |
         restrict(g.po, all, F) | restrict(g.po, F, all);
}

Verdict check_imm(const ExecutionGraph& g) {
  const DerivedRels d = derive(g);
  Checker c(g.ids);
  imm_core(c, g, d);
  c.require_acyclic("no-thin-air", "rf ∪ ppo", g.rf | g.ppo);
  c.require_acyclic("psc", "psc_f", d.psc_f);
  return c.take();
}

Verdict check_immsc(const ExecutionGraph& g, const ImmOptions& opts) {
  const DerivedRels d = derive(g);
  Checker c(g.ids);
  imm_core(c, g, d);
  if (opts.strict_psc)
    c.require_acyclic("no-thin-air", "rf ∪ ppo ∪ bob ∪ psc_base ∪ psc_f",
                      g.rf | g.ppo | barrier_order(g) | d.psc_base | d.psc_f);
  else
    c.require_acyclic("no-thin-air", "rf ∪ ppo", g.rf | g.ppo);
  c.require_acyclic("psc", "psc_base ∪ psc_f", d.psc_base | d.psc_f);
  return c.take();
}

Verdict check_rc11(const ExecutionGraph& g) {
  const DerivedRels d = derive(g);
  Checker c(g.ids);
  c.require_complete(g.reads(), g.rf);
  c.require_co_total(g);
  c.require_irreflexive("coherence", compose(d.hb, opt(d.eco)), "hb ∪ eco",
                        d.hb | d.eco);
  c.require_acyclic("psc", "psc_base ∪ psc_f", d.psc_base | d.psc_f);
  c.require_acyclic("po-rf-acyclic", "po ∪ rf", g.po | g.rf);
  return c.take();
}

Verdict check_tso(const TsoGraph& g) {
  Checker c(g.ids);
  c.require_complete(g.reads(), g.rf);
  c.require_co_total(g);
  const Rel fr = g.fr();
  const Rel po_loc = g.po & g.same_loc();
  c.require_acyclic("sc-per-loc", "po|loc ∪ rf ∪ fr ∪ co",
                    po_loc | g.rf | fr | g.co);

  const EventSet RW = g.reads() | g.writes();
  const EventSet MF = g.fences();
  const Rel ppo = restrict(g.po, RW, RW) - restrict(g.po, g.writes(), g.reads());
  const Rel fence = compose(restrict(g.po, RW, MF), restrict(g.po, MF, RW));
  const Rel hb = ppo | fence | g.external(g.rf) | g.co | fr;
  c.require_acyclic("tso-no-thin-air", "ppo ∪ fence ∪ rfe ∪ co ∪ fr", hb);
  return c.take();
}

Verdict check_armv8(const ArmGraph& g) {
  Checker c(g.ids);
  c.require_complete(g.reads(), g.rf);
  c.require_co_total(g);
  const Rel fr = g.fr();
  const Rel po_loc = g.po & g.same_loc();
  c.require_acyclic("sc-per-loc", "po|loc ∪ rf ∪ fr ∪ co",
                    po_loc | g.rf | fr | g.co);

  const EventSet all = g.all(), R = g.reads(), W = g.writes();
  auto with_mode = [&](Kind k, std::initializer_list<ArmMode> modes) {
    return g.select([&](std::size_t i) {
      if (g.labels[i].kind != k) return false;
      for (ArmMode m : modes)
        if (g.labels[i].mode == m) return true;
      return false;
    });
  };
  const Rel rfi = g.internal(g.rf);
  const Rel coi = g.internal(g.co);
  const Rel obs = g.external(g.rf) | g.external(fr) | g.external(g.co);
  const Rel dob = compose(g.addr | g.data, opt(rfi)) |
                  compose({g.ctrl | g.data, Rel::identity_on(W), opt(coi)}) |
                  compose({g.addr, g.po, Rel::identity_on(W)});
  const EventSet F_sy = with_mode(Kind::Fence, {ArmMode::Sy});
  const EventSet F_ld = with_mode(Kind::Fence, {ArmMode::Ld});
  const EventSet R_acq = with_mode(Kind::Read, {ArmMode::Q, ArmMode::A});
  const EventSet R_A = with_mode(Kind::Read, {ArmMode::A});
  const EventSet W_L = with_mode(Kind::Write, {ArmMode::L});
  const Rel bob = compose(restrict(g.po, all, F_sy), g.po) |
                  compose(restrict(g.po, R, F_ld), g.po) |
                  restrict(g.po, R_acq, all) |
                  compose(restrict(g.po, all, W_L), opt(coi)) |
                  restrict(g.po, W_L, R_A);
  c.require_acyclic("external", "obs ∪ dob ∪ aob ∪ bob", obs | dob | bob);
  return c.take();
}

const std::vector<std::string>& graph_models() {
  static const std::vector<std::string> names{"imm", "immsc", "rc11", "tso",
                                              "armv8"};
  return names;
}

Verdict check_model(const std::string& model, const ExecutionGraph& g,
                    const CheckOptions& opts) {
  if (model == "imm") return check_imm(g);
  if (model == "immsc") return check_immsc(g, ImmOptions{opts.strict_psc});
  if (model == "rc11") return check_rc11(g);
  if (model == "tso") return check_tso(map_to_tso(g, opts.tso_scheme));
  if (model == "armv8") return check_armv8(map_to_armv8(g));
  throw UnsupportedFeature("no graph-level checker for model '" + model + "'");
}

}  // namespace wmlab
