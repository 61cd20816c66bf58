#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forge/bitset.hpp"
#include "forge/error.hpp"

namespace forge {

using ElementId = std::uint64_t;

enum class Relation : std::uint8_t { LT, GT, INC };

constexpr Relation flip(Relation r) noexcept {
  return r == Relation::LT ? Relation::GT : r == Relation::GT ? Relation::LT : Relation::INC;
}

std::string_view to_string(Relation r);

// Sorted, duplicate-free list of element ids.
using ElementSet = std::vector<ElementId>;

ElementSet make_set(std::vector<ElementId> ids);
bool set_contains(const ElementSet& s, ElementId id);
ElementSet set_union(const ElementSet& a, const ElementSet& b);
ElementSet set_intersection(const ElementSet& a, const ElementSet& b);
ElementSet set_difference(const ElementSet& a, const ElementSet& b);
bool set_includes(const ElementSet& super, const ElementSet& sub);

// A finite strict partial order over opaque element ids, stored as a pair of
// bit matrices (strictly-above and strictly-below rows). Elements can be
// appended; existing relations never change through the public API except
// through the explicit fault-injection hook.
class FinitePoset {
 public:
  FinitePoset() = default;
  // Antichain on the given ids.
  explicit FinitePoset(const std::vector<ElementId>& ids);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<ElementId>& elements() const noexcept { return ids_; }
  ElementId id_at(std::size_t i) const { return ids_.at(i); }
  bool contains(ElementId id) const { return index_.count(id) != 0; }
  std::optional<std::size_t> find(ElementId id) const;
  std::size_t index_of(ElementId id) const;  // throws UnknownElement

  Relation rel(ElementId x, ElementId y) const;
  Relation rel_at(std::size_t i, std::size_t j) const noexcept {
    return above_[i].test(j) ? Relation::LT : above_[j].test(i) ? Relation::GT : Relation::INC;
  }
  bool less_at(std::size_t i, std::size_t j) const noexcept { return above_[i].test(j); }
  bool leq_at(std::size_t i, std::size_t j) const noexcept { return i == j || above_[i].test(j); }

  // Indices strictly above / strictly below element i.
  const Bitset& above_row(std::size_t i) const { return above_[i]; }
  const Bitset& below_row(std::size_t i) const { return below_[i]; }

  // Appends a new element. `below`/`above` are index sets over the current
  // elements; the caller is responsible for the result being an order.
  std::size_t append(ElementId id, const Bitset& below, const Bitset& above);
  std::size_t append_isolated(ElementId id);

  // Overwrites one relation. Only for closure construction and fault
  // injection; breaks the append-only contract by design of the caller.
  void force_relation_at(std::size_t i, std::size_t j, Relation r);

  // Full scan: irreflexive, antisymmetric, transitive.
  bool is_strict_order() const;

  // Covering pairs (x, y) with x < y and nothing strictly between.
  std::vector<std::pair<ElementId, ElementId>> hasse_edges() const;

  // Restriction to a subset of ids (kept in this poset's order).
  FinitePoset restrict_to(const std::vector<ElementId>& ids) const;

  friend bool operator==(const FinitePoset& a, const FinitePoset& b);

 private:
  void grow_capacity(std::size_t need);

  std::vector<ElementId> ids_;
  std::unordered_map<ElementId, std::size_t> index_;
  std::vector<Bitset> above_;
  std::vector<Bitset> below_;
  std::size_t cap_ = 0;
};

// Smallest strict order on `elements` containing the generating pairs.
FinitePoset transitive_close(const std::vector<ElementId>& elements,
                             const std::vector<std::pair<ElementId, ElementId>>& generating_pairs);

// {v | exists w in Q, v <= w} (inclusive of Q); up_closure symmetric.
ElementSet down_closure(const FinitePoset& p, const ElementSet& q);
ElementSet up_closure(const FinitePoset& p, const ElementSet& q);

FinitePoset opposite(const FinitePoset& p);

// All order automorphisms as index permutations (perm[i] = image of i),
// identity first.
std::vector<std::vector<std::size_t>> automorphisms(const FinitePoset& p, std::size_t bound = 10);

// All labeled posets on ids 0..n-1, each exactly once.
void for_each_poset(std::size_t n, const std::function<void(const FinitePoset&)>& fn);
std::vector<FinitePoset> enumerate_posets(std::size_t n);

}  // namespace forge
