#include "forge/type_space.hpp"

#include <algorithm>
#include <numeric>

namespace forge {

ElementSet ValidTriple::domain() const { return set_union(set_union(U, V), W); }

nlohmann::json to_json(const ValidTriple& t) {
  return nlohmann::json{{"U", t.U}, {"V", t.V}, {"W", t.W}};
}

ValidTriple triple_from_json(const nlohmann::json& j) {
  return ValidTriple{make_set(j.at("U").get<std::vector<ElementId>>()),
                     make_set(j.at("V").get<std::vector<ElementId>>()),
                     make_set(j.at("W").get<std::vector<ElementId>>())};
}

bool is_partition_of(const FinitePoset& a, const ValidTriple& t) {
  const std::size_t total = t.U.size() + t.V.size() + t.W.size();
  if (total != a.size()) return false;
  ElementSet dom = t.domain();
  if (dom.size() != total) return false;
  return std::all_of(dom.begin(), dom.end(), [&](ElementId id) { return a.contains(id); });
}

bool is_valid_triple(const FinitePoset& a, const ValidTriple& t) {
  if (!is_partition_of(a, t)) throw Error(ErrorCode::NotAPartition, "triple does not partition the host");
  for (ElementId u : t.U) {
    for (ElementId w : t.W)
      if (a.rel(u, w) != Relation::LT) return false;
    for (ElementId v : t.V)
      if (a.rel(u, v) == Relation::GT) return false;
  }
  for (ElementId w : t.W)
    for (ElementId v : t.V)
      if (a.rel(w, v) == Relation::LT) return false;
  return true;
}

FinitePoset realize(const FinitePoset& a, const ValidTriple& t, ElementId new_id) {
  if (!is_valid_triple(a, t)) throw Error(ErrorCode::InvalidTriple, "cannot realize an invalid triple");
  FinitePoset e = a;
  Bitset below(a.size()), above(a.size());
  for (ElementId u : t.U) below.set(a.index_of(u));
  for (ElementId w : t.W) above.set(a.index_of(w));
  e.append(new_id, below, above);
  return e;
}

FinitePoset realize(const FinitePoset& a, const ValidTriple& t) {
  ElementId next = 0;
  for (ElementId id : a.elements()) next = std::max(next, id + 1);
  return realize(a, t, next);
}

ValidTriple type_over(const FinitePoset& e_poset, const ElementSet& host, ElementId e) {
  ValidTriple t;
  for (ElementId x : host) {
    switch (e_poset.rel(x, e)) {
      case Relation::LT: t.U.push_back(x); break;
      case Relation::INC: t.V.push_back(x); break;
      case Relation::GT: t.W.push_back(x); break;
    }
  }
  return t;
}

namespace {

void require_same_host(const ValidTriple& p, const ValidTriple& q) {
  if (p.domain() != q.domain()) throw Error(ErrorCode::HostMismatch, "triples are over different hosts");
}

}  // namespace

bool lt_valid(const ValidTriple& p, const ValidTriple& q) {
  require_same_host(p, q);
  return set_includes(q.U, p.U) && set_includes(set_union(q.U, q.V), p.V);
}

bool gt_valid(const ValidTriple& p, const ValidTriple& q) { return lt_valid(q, p); }

bool inc_valid(const ValidTriple& p, const ValidTriple& q) {
  require_same_host(p, q);
  return set_intersection(p.U, q.W).empty() && set_intersection(q.U, p.W).empty();
}

bool ll(const ValidTriple& p, const ValidTriple& q) { return !(p == q) && lt_valid(p, q); }

ValidTriple meet(const ValidTriple& p, const ValidTriple& q) {
  require_same_host(p, q);
  ValidTriple r;
  r.U = set_intersection(p.U, q.U);
  r.V = set_union(set_union(set_intersection(p.V, q.V), set_intersection(p.V, q.U)),
                  set_intersection(q.V, p.U));
  r.W = set_union(p.W, q.W);
  return r;
}

ValidTriple join(const ValidTriple& p, const ValidTriple& q) {
  require_same_host(p, q);
  ValidTriple r;
  r.U = set_union(p.U, q.U);
  r.V = set_union(set_union(set_intersection(p.V, q.V), set_intersection(p.V, q.W)),
                  set_intersection(q.V, p.W));
  r.W = set_intersection(p.W, q.W);
  return r;
}

std::vector<ValidTriple> all_valid_triples(const FinitePoset& a) {
  const std::size_t n = a.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  std::vector<ElementId> ids = a.elements();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ids[x] < ids[y]; });
  std::vector<ValidTriple> out;
  for (std::size_t code = 0; code < total; ++code) {
    ValidTriple t;
    std::size_t c = code;
    for (std::size_t k : order) {
      switch (c % 3) {
        case 0: t.U.push_back(ids[k]); break;
        case 1: t.V.push_back(ids[k]); break;
        default: t.W.push_back(ids[k]); break;
      }
      c /= 3;
    }
    if (is_valid_triple(a, t)) out.push_back(std::move(t));
  }
  return out;
}

std::vector<ValidTriple> lambda_set(const FinitePoset& a) {
  std::vector<ValidTriple> out;
  for (auto& t : all_valid_triples(a))
    if (t.U.empty()) out.push_back(std::move(t));
  return out;
}

std::vector<ValidTriple> mu_set(const FinitePoset& a) {
  std::vector<ValidTriple> out;
  for (auto& t : all_valid_triples(a))
    if (t.W.empty()) out.push_back(std::move(t));
  return out;
}

ValidTriple shift_up(const ValidTriple& p) {
  if (!p.U.empty()) throw Error(ErrorCode::NotInLambda, "shift_up needs U = ∅");
  return ValidTriple{p.V, p.W, {}};
}

ValidTriple shift_down(const ValidTriple& p) {
  if (!p.W.empty()) throw Error(ErrorCode::NotInLambda, "shift_down needs W = ∅");
  return ValidTriple{{}, p.U, p.V};
}

ValidTriple op_type(const ValidTriple& p) { return ValidTriple{p.W, p.V, p.U}; }

ValidTriple restrict_triple(const ValidTriple& p, const ElementSet& sub) {
  return ValidTriple{set_intersection(p.U, sub), set_intersection(p.V, sub), set_intersection(p.W, sub)};
}

bool in_basic_open(const ValidTriple& p, const ValidTriple& open) {
  return set_includes(p.U, open.U) && set_includes(p.V, open.V) && set_includes(p.W, open.W);
}

bool operator<=(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
}

Rational operator+(const Rational& a, const Rational& b) {
  std::int64_t num = a.num * b.den + b.num * a.den;
  std::int64_t den = a.den * b.den;
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

Rational type_distance(const ValidTriple& p, const ValidTriple& q, const std::vector<ElementId>& enumeration) {
  auto side = [](const ValidTriple& t, ElementId a) {
    return set_contains(t.U, a) ? 0 : set_contains(t.V, a) ? 1 : set_contains(t.W, a) ? 2 : 3;
  };
  for (std::size_t i = 0; i < enumeration.size(); ++i) {
    if (side(p, enumeration[i]) != side(q, enumeration[i])) {
      // A_m = {a_0..a_{m-1}} first separates p and q at m = i + 1.
      return Rational{1, static_cast<std::int64_t>(i) + 2};
    }
  }
  return Rational{0, 1};
}

}  // namespace forge
