// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include "wmlab/rel.hpp"

#include <algorithm>
#include <bit>
#include <deque>

namespace wmlab {

std::string to_string(EventId id) {
  return "(" + std::to_string(id.tid) + "," + std::to_string(id.serial) + ")";
}

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

}  // namespace

// ---------------------------------------------------------------- EventSet

EventSet::EventSet(std::size_t universe)
    : n_(universe), words_(words_for(universe), 0) {}

EventSet::EventSet(std::size_t universe,
                   std::initializer_list<std::size_t> elems)
    : EventSet(universe) {
  for (auto e : elems) insert(e);
}

EventSet EventSet::full(std::size_t universe) {
  EventSet s(universe);
  for (std::size_t i = 0; i < universe; ++i) s.insert(i);
  return s;
}

void EventSet::insert(std::size_t i) {
  if (i >= n_)
    throw StructuralError("element " + std::to_string(i) +
                          " outside universe of size " + std::to_string(n_));
  words_[i >> 6] |= std::uint64_t{1} << (i & 63);
}

void EventSet::erase(std::size_t i) {
  if (i < n_) words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

std::size_t EventSet::size() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool EventSet::empty() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

bool EventSet::subset_of(const EventSet& o) const {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~o.words_[i]) != 0) return false;
  return true;
}

bool EventSet::intersects(const EventSet& o) const {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & o.words_[i]) != 0) return true;
  return false;
}

std::optional<std::size_t> EventSet::first() const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w] != 0)
      return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  return std::nullopt;
}

std::vector<std::size_t> EventSet::elements() const {
  std::vector<std::size_t> out;
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

EventSet& EventSet::operator|=(const EventSet& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

EventSet& EventSet::operator&=(const EventSet& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

EventSet& EventSet::operator-=(const EventSet& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

void EventSet::check_same(const EventSet& o) const {
  if (n_ != o.n_)
    throw StructuralError("event sets over different universes (" +
                          std::to_string(n_) + " vs " +
                          std::to_string(o.n_) + ")");
}

// --------------------------------------------------------------------- Rel

Rel::Rel(std::size_t universe)
    : n_(universe), w_(words_for(universe)), bits_(n_ * w_, 0) {}

Rel::Rel(std::size_t universe,
         std::initializer_list<std::pair<std::size_t, std::size_t>> pairs)
    : Rel(universe) {
  for (auto [a, b] : pairs) insert(a, b);
}

Rel Rel::identity(std::size_t universe) {
  Rel r(universe);
  for (std::size_t i = 0; i < universe; ++i) r.insert(i, i);
  return r;
}

Rel Rel::identity_on(const EventSet& a) {
  Rel r(a.universe());
  a.for_each([&](std::size_t i) { r.insert(i, i); });
  return r;
}

Rel Rel::product(const EventSet& a, const EventSet& b) {
  if (a.universe() != b.universe())
    throw StructuralError("product of sets over different universes");
  Rel r(a.universe());
  a.for_each([&](std::size_t i) {
    std::copy(b.words().begin(), b.words().end(), r.row(i));
  });
  return r;
}

void Rel::insert(std::size_t a, std::size_t b) {
  if (a >= n_ || b >= n_)
    throw StructuralError("pair (" + std::to_string(a) + "," +
                          std::to_string(b) + ") outside carrier of size " +
                          std::to_string(n_));
  row(a)[b >> 6] |= std::uint64_t{1} << (b & 63);
}

void Rel::erase(std::size_t a, std::size_t b) {
  if (a < n_ && b < n_) row(a)[b >> 6] &= ~(std::uint64_t{1} << (b & 63));
}

EventSet Rel::successors(std::size_t a) const {
  EventSet s(n_);
  if (a < n_) std::copy(row(a), row(a) + w_, s.words().begin());
  return s;
}

EventSet Rel::predecessors(std::size_t b) const {
  EventSet s(n_);
  for (std::size_t a = 0; a < n_; ++a)
    if (contains(a, b)) s.insert(a);
  return s;
}

std::size_t Rel::size() const {
  std::size_t c = 0;
  for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool Rel::empty() const {
  return std::all_of(bits_.begin(), bits_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

std::vector<std::pair<std::size_t, std::size_t>> Rel::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for_each([&](std::size_t a, std::size_t b) { out.emplace_back(a, b); });
  return out;
}

Rel Rel::inverse() const {
  Rel r(n_);
  for_each([&](std::size_t a, std::size_t b) { r.insert(b, a); });
  return r;
}

EventSet Rel::domain() const {
  EventSet s(n_);
  for (std::size_t a = 0; a < n_; ++a)
    if (std::any_of(row(a), row(a) + w_, [](std::uint64_t w) { return w; }))
      s.insert(a);
  return s;
}

EventSet Rel::codomain() const {
  EventSet s(n_);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t w = 0; w < w_; ++w) s.words()[w] |= row(a)[w];
  return s;
}

bool Rel::is_irreflexive() const {
  for (std::size_t a = 0; a < n_; ++a)
    if (contains(a, a)) return false;
  return true;
}

bool Rel::is_transitive() const { return compose(*this, *this).subset_of(*this); }

bool Rel::is_functional() const {
  for (std::size_t a = 0; a < n_; ++a) {
    std::size_t c = 0;
    for (std::size_t w = 0; w < w_; ++w)
      c += static_cast<std::size_t>(std::popcount(row(a)[w]));
    if (c > 1) return false;
  }
  return true;
}

bool Rel::subset_of(const Rel& o) const {
  check_same(o);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if ((bits_[i] & ~o.bits_[i]) != 0) return false;
  return true;
}

Rel& Rel::operator|=(const Rel& o) {
  check_same(o);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

Rel& Rel::operator&=(const Rel& o) {
  check_same(o);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

Rel& Rel::operator-=(const Rel& o) {
  check_same(o);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
  return *this;
}

void Rel::check_same(const Rel& o) const {
  if (n_ != o.n_)
    throw StructuralError("relations over different carriers (" +
                          std::to_string(n_) + " vs " +
                          std::to_string(o.n_) + ")");
}

Rel compose(const Rel& a, const Rel& b) {
  a.check_same(b);
  Rel r(a.n_);
  for (std::size_t i = 0; i < a.n_; ++i) {
    std::uint64_t* out = r.row(i);
    a.successors(i).for_each([&](std::size_t k) {
      const std::uint64_t* src = b.row(k);
      for (std::size_t w = 0; w < a.w_; ++w) out[w] |= src[w];
    });
  }
  return r;
}

Rel compose(std::initializer_list<Rel> chain) {
  if (chain.size() == 0) throw StructuralError("empty composition");
  auto it = chain.begin();
  Rel r = *it++;
  for (; it != chain.end(); ++it) r = compose(r, *it);
  return r;
}

Rel closure(const Rel& r, Closure kind) {
  switch (kind) {
    case Closure::Reflexive: {
      Rel out = r;
      (r.domain() | r.codomain()).for_each([&](std::size_t i) {
        out.insert(i, i);
      });
      return out;
    }
    case Closure::ReflexiveOf:
      return r | Rel::identity(r.n_);
    case Closure::Transitive: {
      // Warshall over bit rows.
      Rel out = r;
      for (std::size_t k = 0; k < out.n_; ++k) {
        const std::uint64_t* rk = out.row(k);
        for (std::size_t i = 0; i < out.n_; ++i) {
          if (!out.contains(i, k)) continue;
          std::uint64_t* ri = out.row(i);
          for (std::size_t w = 0; w < out.w_; ++w) ri[w] |= rk[w];
        }
      }
      return out;
    }
    case Closure::ReflexiveTransitive:
      return closure(r, Closure::Transitive) | Rel::identity(r.n_);
  }
  return r;
}

bool is_acyclic(const Rel& r) {
  // Kahn's algorithm.
  const std::size_t n = r.universe();
  std::vector<std::size_t> indeg(n, 0);
  r.for_each([&](std::size_t, std::size_t b) { ++indeg[b]; });
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::size_t a = ready.back();
    ready.pop_back();
    ++seen;
    r.successors(a).for_each([&](std::size_t b) {
      if (--indeg[b] == 0) ready.push_back(b);
    });
  }
  return seen == n;
}

Rel restrict(const Rel& r, const EventSet& dom, const EventSet& cod) {
  if (dom.universe() != r.universe() || cod.universe() != r.universe())
    throw StructuralError("restriction by a set over a different universe");
  Rel out(r.universe());
  dom.for_each([&](std::size_t a) {
    (r.successors(a) & cod).for_each([&](std::size_t b) { out.insert(a, b); });
  });
  return out;
}

std::vector<std::size_t> shortest_path(const Rel& r, std::size_t a,
                                       std::size_t b) {
  const std::size_t n = r.universe();
  const std::size_t none = n;
  std::vector<std::size_t> parent(n, none);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue;
  // Paths of length >= 1 only; a == b asks for a cycle through a.
  r.successors(a).for_each([&](std::size_t s) {
    if (!seen[s]) {
      seen[s] = true;
      parent[s] = a;
      queue.push_back(s);
    }
  });
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    if (cur == b) {
      std::vector<std::size_t> path{b};
      std::size_t p = parent[b];
      while (p != a) {
        path.push_back(p);
        p = parent[p];
      }
      path.push_back(a);
      std::reverse(path.begin(), path.end());
      return path;
    }
    r.successors(cur).for_each([&](std::size_t s) {
      if (!seen[s]) {
        seen[s] = true;
        parent[s] = cur;
        queue.push_back(s);
      }
    });
  }
  return {};
}

std::vector<std::size_t> shortest_cycle(const Rel& r) {
  std::vector<std::size_t> best;
  for (std::size_t s = 0; s < r.universe(); ++s) {
    auto path = shortest_path(r, s, s);
    if (path.empty()) continue;
    path.pop_back();
    if (best.empty() || path.size() < best.size()) best = std::move(path);
    if (best.size() == 1) break;
  }
  return best;
}

}  // namespace wmlab
