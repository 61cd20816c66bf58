#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "forge/poset.hpp"

namespace forge {

// External type over a host, recorded as the partition (U, V, W) of the host:
// elements below, incomparable to, and above the realizing point.
struct ValidTriple {
  ElementSet U, V, W;

  ElementSet domain() const;
  friend bool operator==(const ValidTriple&, const ValidTriple&) = default;
  friend auto operator<=>(const ValidTriple&, const ValidTriple&) = default;
};

nlohmann::json to_json(const ValidTriple& t);
ValidTriple triple_from_json(const nlohmann::json& j);

bool is_partition_of(const FinitePoset& a, const ValidTriple& t);

// Throws NotAPartition when t is not a partition of A's domain.
bool is_valid_triple(const FinitePoset& a, const ValidTriple& t);

// One-point extension E = A ∪ {new_id} whose new point has type t.
FinitePoset realize(const FinitePoset& a, const ValidTriple& t, ElementId new_id);
FinitePoset realize(const FinitePoset& a, const ValidTriple& t);

// tp(e / host) read back from a poset containing host ∪ {e}.
ValidTriple type_over(const FinitePoset& e_poset, const ElementSet& host, ElementId e);

bool lt_valid(const ValidTriple& p, const ValidTriple& q);
bool gt_valid(const ValidTriple& p, const ValidTriple& q);
bool inc_valid(const ValidTriple& p, const ValidTriple& q);
// p ≪ q
bool ll(const ValidTriple& p, const ValidTriple& q);

ValidTriple meet(const ValidTriple& p, const ValidTriple& q);
ValidTriple join(const ValidTriple& p, const ValidTriple& q);

// Every valid triple over A, in a fixed enumeration order.
std::vector<ValidTriple> all_valid_triples(const FinitePoset& a);
std::vector<ValidTriple> lambda_set(const FinitePoset& a);
std::vector<ValidTriple> mu_set(const FinitePoset& a);

// (∅, V, W) -> (V, W, ∅) and its inverse.
ValidTriple shift_up(const ValidTriple& p);
ValidTriple shift_down(const ValidTriple& p);

// (U, V, W) over A -> (W, V, U) over the opposite order.
ValidTriple op_type(const ValidTriple& p);

ValidTriple restrict_triple(const ValidTriple& p, const ElementSet& sub);

// p lies in the basic open set generated by `open` (a triple over a finite subset).
bool in_basic_open(const ValidTriple& p, const ValidTriple& open);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};
bool operator<=(const Rational& a, const Rational& b);
Rational operator+(const Rational& a, const Rational& b);

// d(p, q) = 1/(m+1) for the least m with p|A_m != q|A_m, where A_m is the
// first m elements of the enumeration; 0 when p == q on the enumeration.
Rational type_distance(const ValidTriple& p, const ValidTriple& q, const std::vector<ElementId>& enumeration);

}  // namespace forge
