#include <doctest.h>

#include <algorithm>
#include <set>

#include "forge/poset.hpp"
#include "forge/poset_io.hpp"

using namespace forge;

namespace {

// Independent count: every subset of the n(n-1) ordered off-diagonal pairs,
// kept when the relation is antisymmetric and transitive.
std::size_t count_strict_orders(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);
  std::size_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    bool r[6][6] = {};
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (mask >> k & 1) r[pairs[k].first][pairs[k].second] = true;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) {
        if (r[i][j] && r[j][i]) ok = false;
        for (std::size_t k = 0; k < n && ok; ++k)
          if (r[i][j] && r[j][k] && !r[i][k]) ok = false;
      }
    if (ok) ++count;
  }
  return count;
}

// Automorphism count by trying every permutation.
std::size_t count_automorphisms(const FinitePoset& p) {
  std::vector<std::size_t> perm(p.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::size_t count = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i)
      for (std::size_t j = 0; j < p.size() && ok; ++j)
        if (i != j && p.less_at(i, j) != p.less_at(perm[i], perm[j])) ok = false;
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

FinitePoset chain(std::size_t n) {
  std::vector<ElementId> ids;
  std::vector<std::pair<ElementId, ElementId>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back(i);
    if (i > 0) pairs.emplace_back(i - 1, i);
  }
  return transitive_close(ids, pairs);
}

}  // namespace

TEST_CASE("labeled poset counts match the brute-force oracle") {
  const std::size_t known[] = {1, 1, 3, 19, 219};
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(enumerate_posets(n).size() == known[n]);
    CHECK(count_strict_orders(n) == known[n]);
  }
}

TEST_CASE("enumerated posets are distinct strict orders") {
  auto all = enumerate_posets(3);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].is_strict_order());
    for (std::size_t j = i + 1; j < all.size(); ++j) CHECK_FALSE(all[i] == all[j]);
  }
}

TEST_CASE("transitive closure of a chain") {
  FinitePoset c = chain(5);
  CHECK(c.rel(0, 4) == Relation::LT);
  CHECK(c.rel(4, 1) == Relation::GT);
  CHECK(c.hasse_edges().size() == 4);
  CHECK(c.is_strict_order());
}

TEST_CASE("cycles are rejected") {
  try {
    transitive_close({0, 1, 2}, {{0, 1}, {1, 2}, {2, 0}});
    FAIL("expected CycleDetected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CycleDetected);
  }
}

TEST_CASE("rel on unknown elements and on the diagonal") {
  FinitePoset c = chain(2);
  CHECK_THROWS_AS(c.rel(0, 9), Error);
  CHECK_THROWS_AS(c.index_of(9), Error);
}

TEST_CASE("closures") {
  FinitePoset p = transitive_close({0, 1, 2, 3}, {{0, 2}, {1, 2}, {2, 3}});
  CHECK(down_closure(p, {2}) == ElementSet{0, 1, 2});
  CHECK(up_closure(p, {1}) == ElementSet{1, 2, 3});
  CHECK(down_closure(p, {}) == ElementSet{});
}

TEST_CASE("opposite reverses every relation") {
  FinitePoset p = transitive_close({0, 1, 2}, {{0, 1}, {0, 2}});
  FinitePoset o = opposite(p);
  for (ElementId x : p.elements())
    for (ElementId y : p.elements())
      if (x != y) CHECK(o.rel(x, y) == flip(p.rel(x, y)));
  CHECK(opposite(o) == p);
}

TEST_CASE("automorphism groups agree with the permutation oracle") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for_each_poset(n, [&](const FinitePoset& p) {
      auto autos = automorphisms(p);
      CHECK(autos.size() == count_automorphisms(p));
      std::vector<std::size_t> id(n);
      for (std::size_t i = 0; i < n; ++i) id[i] = i;
      CHECK(autos.front() == id);
    });
  }
  CHECK(automorphisms(FinitePoset({0, 1, 2, 3})).size() == 24);
  CHECK(automorphisms(chain(4)).size() == 1);
  CHECK_THROWS_AS(automorphisms(FinitePoset({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10})), Error);
}

TEST_CASE("json round trip keeps the order") {
  for_each_poset(4, [&](const FinitePoset& p) { CHECK(poset_from_json(poset_to_json(p)) == p); });
  nlohmann::json bad = {{"elements", {0, 1}}, {"lt", {{0, 1}, {1, 0}}}};
  CHECK_THROWS_AS(poset_from_json(bad), Error);
}

TEST_CASE("dot export draws covering edges upward") {
  std::string dot = poset_to_dot(chain(3));
  CHECK(dot.find("rankdir=BT") != std::string::npos);
  CHECK(dot.find("n0 -> n1") != std::string::npos);
  CHECK(dot.find("n0 -> n2") == std::string::npos);
}

TEST_CASE("append extends an order") {
  FinitePoset p = chain(3);
  Bitset below(3), above(3);
  below.set(0);
  above.set(2);
  p.append(7, below, above);
  CHECK(p.rel(0, 7) == Relation::LT);
  CHECK(p.rel(7, 2) == Relation::LT);
  CHECK(p.rel(1, 7) == Relation::INC);
  CHECK(p.is_strict_order());
  FinitePoset grown;
  for (ElementId i = 0; i < 200; ++i) grown.append_isolated(i);
  CHECK(grown.size() == 200);
  CHECK(grown.rel(3, 199) == Relation::INC);
}
