// Copyright (c) 2026, The wmlab Authors.
// Licensed under the Apache License, Version 2.0.

#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "wmlab/rel.hpp"

using namespace wmlab;

namespace {

// Independent oracles over plain pair sets.
using PairSet = std::set<std::pair<std::size_t, std::size_t>>;

PairSet pairs_of(const Rel& r) {
  PairSet s;
  for (auto p : r.pairs()) s.insert(p);
  return s;
}

PairSet oracle_compose(const PairSet& a, const PairSet& b) {
  PairSet out;
  for (auto [x, y] : a)
    for (auto [y2, z] : b)
      if (y == y2) out.insert({x, z});
  return out;
}

// R ∪ R^2 ∪ ... ∪ R^n by repeated boolean matrix products.
PairSet oracle_tc(const PairSet& r, std::size_t n) {
  PairSet acc = r, power = r;
  for (std::size_t k = 1; k < n; ++k) {
    power = oracle_compose(power, r);
    acc.insert(power.begin(), power.end());
  }
  return acc;
}

bool oracle_acyclic(const PairSet& r, std::size_t n) {
  std::vector<int> color(n, 0);
  std::function<bool(std::size_t)> dfs = [&](std::size_t u) {
    color[u] = 1;
    for (auto [a, b] : r) {
      if (a != u) continue;
      if (color[b] == 1) return false;
      if (color[b] == 0 && !dfs(b)) return false;
    }
    color[u] = 2;
    return true;
  };
  for (std::size_t u = 0; u < n; ++u)
    if (color[u] == 0 && !dfs(u)) return false;
  return true;
}

// The relation on n elements whose bit i*n+j is set in `mask`.
Rel from_mask(std::size_t n, std::uint64_t mask) {
  Rel r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((mask >> (i * n + j)) & 1u) r.insert(i, j);
  return r;
}

Rel random_rel(std::size_t n, std::mt19937_64& rng, double density = 0.3) {
  std::bernoulli_distribution coin(density);
  Rel r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (coin(rng)) r.insert(i, j);
  return r;
}

// Every relation on n elements when there are at most 2^max_bits of them,
// otherwise a seeded sample of the given size.
std::vector<Rel> relations(std::size_t n, std::size_t sample = 4000,
                           std::size_t max_bits = 16) {
  std::vector<Rel> out;
  if (n * n <= max_bits) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n * n)); ++m)
      out.push_back(from_mask(n, m));
  } else {
    std::mt19937_64 rng(n * 7919);
    for (std::size_t k = 0; k < sample; ++k)
      out.push_back(random_rel(n, rng, 0.05 + 0.5 * (k % 10) / 10.0));
  }
  return out;
}

}  // namespace

TEST_SUITE("relational_core") {
  TEST_CASE("compose: definition instances") {
    Rel a(4, {{1, 2}}), b(4, {{2, 3}});
    CHECK(compose(a, b) == Rel(4, {{1, 3}}));
    Rel r(4, {{0, 1}, {1, 2}, {3, 3}});
    CHECK(compose(r, Rel::identity(4)) == r);
    CHECK(compose(Rel::identity(4), r) == r);
  }

  TEST_CASE("compose: carrier mismatch is a structural error") {
    CHECK_THROWS_AS(compose(Rel(3), Rel(4)), StructuralError);
    CHECK_THROWS_AS(Rel(3) | Rel(2), StructuralError);
  }

  TEST_CASE("compose agrees with the pair-by-pair oracle on carrier 4") {
    std::mt19937_64 rng(42);
    for (int k = 0; k < 2000; ++k) {
      Rel a = random_rel(4, rng), b = random_rel(4, rng);
      CHECK(pairs_of(compose(a, b)) == oracle_compose(pairs_of(a), pairs_of(b)));
    }
  }

  TEST_CASE("closure: definition instances") {
    Rel r(4, {{1, 2}, {2, 3}});
    CHECK(closure(r, Closure::Transitive) == Rel(4, {{1, 2}, {2, 3}, {1, 3}}));
    CHECK(closure(Rel(2), Closure::ReflexiveTransitive) == Rel::identity(2));
    CHECK(closure(r, Closure::ReflexiveOf) == (r | Rel::identity(4)));
    // Reflexive closes only over the field of r.
    CHECK(closure(r, Closure::Reflexive) ==
          (r | Rel(4, {{1, 1}, {2, 2}, {3, 3}})));
  }

  TEST_CASE("transitive closure agrees with the matrix-power oracle up to 6") {
    std::mt19937_64 rng(7);
    for (std::size_t n = 0; n <= 6; ++n)
      for (int k = 0; k < 500; ++k) {
        Rel r = random_rel(n, rng, 0.1 + 0.05 * (k % 8));
        CHECK(pairs_of(plus(r)) == oracle_tc(pairs_of(r), n));
      }
  }

  TEST_CASE("is_acyclic: instances and DFS oracle up to 7") {
    CHECK_FALSE(is_acyclic(Rel(3, {{1, 2}, {2, 1}})));
    CHECK(is_acyclic(Rel(3)));
    std::mt19937_64 rng(11);
    for (std::size_t n = 0; n <= 7; ++n)
      for (int k = 0; k < 500; ++k) {
        Rel r = random_rel(n, rng, 0.05 + 0.04 * (k % 8));
        CHECK(is_acyclic(r) == oracle_acyclic(pairs_of(r), n));
      }
  }

  TEST_CASE("restrict: instances and filter oracle") {
    Rel r(4, {{1, 2}, {2, 3}});
    CHECK(restrict(r, EventSet(4, {1}), EventSet(4, {2, 3})) == Rel(4, {{1, 2}}));
    CHECK(restrict(r, EventSet(4), EventSet::full(4)).empty());
    std::mt19937_64 rng(5);
    for (int k = 0; k < 500; ++k) {
      Rel q = random_rel(5, rng);
      EventSet a(5), b(5);
      for (std::size_t i = 0; i < 5; ++i) {
        if (rng() % 2) a.insert(i);
        if (rng() % 2) b.insert(i);
      }
      PairSet expect;
      for (auto [x, y] : pairs_of(q))
        if (a.contains(x) && b.contains(y)) expect.insert({x, y});
      CHECK(pairs_of(restrict(q, a, b)) == expect);
    }
  }

  TEST_CASE("laws: associativity and identity unit on carriers up to 5") {
    // All triples on carriers up to 2; every pair against sampled third
    // arguments on carrier 3; seeded samples beyond.
    for (std::size_t n = 0; n <= 5; ++n) {
      const auto rels = relations(n, 200, 9);
      const Rel id = Rel::identity(n);
      std::mt19937_64 rng(n);
      for (const Rel& a : relations(n)) {
        REQUIRE(compose(a, id) == a);
        REQUIRE(compose(id, a) == a);
      }
      const bool all = rels.size() <= 16;
      const std::size_t third = all ? rels.size() : 4;
      std::size_t checked = 0;
      for (const Rel& a : rels)
        for (const Rel& b : rels) {
          const Rel ab = compose(a, b);
          for (std::size_t k = 0; k < third; ++k) {
            const Rel& c = all ? rels[k] : rels[rng() % rels.size()];
            if (compose(ab, c) != compose(a, compose(b, c)))
              FAIL("associativity fails on carrier " << n);
            ++checked;
          }
        }
      CHECK(checked > 0);
    }
  }

  TEST_CASE("laws: closure idempotence, acyclicity, restriction on carriers up to 5") {
    for (std::size_t n = 0; n <= 5; ++n) {
      for (const Rel& r : relations(n, 20000)) {
        const Rel tc = plus(r);
        REQUIRE(plus(tc) == tc);
        REQUIRE(star(star(r)) == star(r));
        REQUIRE(is_acyclic(r) == tc.is_irreflexive());
        EventSet a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
          if (i % 2 == 0) a.insert(i);
          if (i % 3 != 1) b.insert(i);
        }
        REQUIRE(restrict(r, a, b).subset_of(r));
      }
    }
  }

  TEST_CASE("shortest_cycle returns a genuine minimal cycle") {
    Rel r(5, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 3}});
    auto c = shortest_cycle(r);
    REQUIRE(c.size() == 2);
    CHECK(c == std::vector<std::size_t>{3, 4});
    CHECK(shortest_cycle(Rel(3, {{0, 1}, {1, 2}})).empty());
    CHECK(shortest_cycle(Rel(3, {{2, 2}})) == std::vector<std::size_t>{2});
    std::mt19937_64 rng(3);
    for (int k = 0; k < 300; ++k) {
      Rel q = random_rel(6, rng, 0.2);
      auto cyc = shortest_cycle(q);
      CHECK(cyc.empty() == is_acyclic(q));
      for (std::size_t i = 0; i < cyc.size(); ++i)
        CHECK(q.contains(cyc[i], cyc[(i + 1) % cyc.size()]));
    }
  }

  TEST_CASE("EventSet basics") {
    EventSet s(70, {0, 3, 64, 69});
    CHECK(s.size() == 4);
    CHECK(s.contains(64));
    CHECK_FALSE(s.contains(65));
    CHECK(s.elements() == std::vector<std::size_t>{0, 3, 64, 69});
    s.erase(3);
    CHECK(s.first() == 0u);
    CHECK((s - EventSet(70, {0})).first() == 64u);
    CHECK_THROWS_AS(s.insert(70), StructuralError);
    CHECK(EventId{1, 2} < EventId{2, 1});
    CHECK(EventId{0, 5}.is_init());
  }
}
