// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

// Finite binary relations over a dense universe {0, ..., n-1}.
//
// Graphs and event structures keep their events in a vector and hand out
// indices; a Rel is an n-by-n bit matrix over those indices.  Mixing
// relations from different universes is a structural error.

#ifndef WMLAB_REL_HPP_
#define WMLAB_REL_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wmlab/error.hpp"

namespace wmlab {

// Event identity in execution graphs.  Thread 0 holds the initialization
// writes, whose serial is the index of the location they initialize.
struct EventId {
  std::uint32_t tid = 0;
  std::uint32_t serial = 0;

  bool is_init() const { return tid == 0; }
  auto operator<=>(const EventId&) const = default;
};

std::string to_string(EventId id);

class EventSet {
 public:
  EventSet() = default;
  explicit EventSet(std::size_t universe);
  EventSet(std::size_t universe, std::initializer_list<std::size_t> elems);

  static EventSet full(std::size_t universe);

  std::size_t universe() const { return n_; }
  bool contains(std::size_t i) const {
    return i < n_ && ((words_[i >> 6] >> (i & 63)) & 1u) != 0;
  }
  void insert(std::size_t i);
  void erase(std::size_t i);
  std::size_t size() const;
  bool empty() const;
  bool subset_of(const EventSet& other) const;
  bool intersects(const EventSet& other) const;
  std::optional<std::size_t> first() const;
  std::vector<std::size_t> elements() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        int b = __builtin_ctzll(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  EventSet& operator|=(const EventSet& o);
  EventSet& operator&=(const EventSet& o);
  EventSet& operator-=(const EventSet& o);
  friend EventSet operator|(EventSet a, const EventSet& b) { return a |= b; }
  friend EventSet operator&(EventSet a, const EventSet& b) { return a &= b; }
  friend EventSet operator-(EventSet a, const EventSet& b) { return a -= b; }
  bool operator==(const EventSet& o) const = default;

  // Raw word access for Rel.
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  void check_same(const EventSet& o) const;

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class Closure {
  Reflexive,            // R ∪ identity on the field of R
  Transitive,           // R+
  ReflexiveTransitive,  // R*, identity over the whole carrier
  ReflexiveOf,          // R?, identity over the whole carrier
};

class Rel {
 public:
  Rel() = default;
  explicit Rel(std::size_t universe);
  Rel(std::size_t universe,
      std::initializer_list<std::pair<std::size_t, std::size_t>> pairs);

  static Rel identity(std::size_t universe);
  // [A]
  static Rel identity_on(const EventSet& a);
  // A × B
  static Rel product(const EventSet& a, const EventSet& b);

  std::size_t universe() const { return n_; }
  bool contains(std::size_t a, std::size_t b) const {
    return a < n_ && b < n_ &&
           ((bits_[a * w_ + (b >> 6)] >> (b & 63)) & 1u) != 0;
  }
  void insert(std::size_t a, std::size_t b);
  void erase(std::size_t a, std::size_t b);

  EventSet successors(std::size_t a) const;
  EventSet predecessors(std::size_t b) const;
  std::size_t size() const;
  bool empty() const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t w = 0; w < w_; ++w) {
        std::uint64_t bits = bits_[a * w_ + w];
        while (bits != 0) {
          int b = __builtin_ctzll(bits);
          f(a, w * 64 + static_cast<std::size_t>(b));
          bits &= bits - 1;
        }
      }
    }
  }

  Rel inverse() const;
  EventSet domain() const;
  EventSet codomain() const;
  bool is_irreflexive() const;
  bool is_transitive() const;
  // Every element has at most one successor.
  bool is_functional() const;
  bool subset_of(const Rel& o) const;

  Rel& operator|=(const Rel& o);
  Rel& operator&=(const Rel& o);
  Rel& operator-=(const Rel& o);
  friend Rel operator|(Rel a, const Rel& b) { return a |= b; }
  friend Rel operator&(Rel a, const Rel& b) { return a &= b; }
  friend Rel operator-(Rel a, const Rel& b) { return a -= b; }
  bool operator==(const Rel& o) const = default;

 private:
  friend Rel compose(const Rel&, const Rel&);
  friend Rel closure(const Rel&, Closure);
  void check_same(const Rel& o) const;
  std::uint64_t* row(std::size_t a) { return bits_.data() + a * w_; }
  const std::uint64_t* row(std::size_t a) const { return bits_.data() + a * w_; }

  std::size_t n_ = 0;
  std::size_t w_ = 0;  // words per row
  std::vector<std::uint64_t> bits_;
};

// a ; b
Rel compose(const Rel& a, const Rel& b);
Rel compose(std::initializer_list<Rel> chain);
Rel closure(const Rel& r, Closure kind);
inline Rel plus(const Rel& r) { return closure(r, Closure::Transitive); }
inline Rel star(const Rel& r) { return closure(r, Closure::ReflexiveTransitive); }
inline Rel opt(const Rel& r) { return closure(r, Closure::ReflexiveOf); }

bool is_acyclic(const Rel& r);
// [A] ; r ; [B]
Rel restrict(const Rel& r, const EventSet& dom, const EventSet& cod);
// Pairs whose endpoints agree (or disagree) under a key function.
template <class Key>
Rel same_key(std::size_t universe, Key&& key) {
  Rel r(universe);
  for (std::size_t a = 0; a < universe; ++a)
    for (std::size_t b = 0; b < universe; ++b)
      if (key(a) && key(b) && *key(a) == *key(b)) r.insert(a, b);
  return r;
}

// Shortest cycle of r, as the list of its nodes (first node not repeated).
// Among cycles of minimal length the one found from the smallest start node
// with smallest successors first is returned.  Empty if r is acyclic.
std::vector<std::size_t> shortest_cycle(const Rel& r);

// Shortest path from a to b in r (inclusive of both ends), empty if none.
std::vector<std::size_t> shortest_path(const Rel& r, std::size_t a,
                                       std::size_t b);

}  // namespace wmlab

#endif  // WMLAB_REL_HPP_
