#include <functional>

#include "forge/verifier.hpp"

namespace forge {

namespace {

bool valid_in(const FinitePoset& p, const ValidTriple& t) {
  for (ElementId x : t.domain()) {
    for (ElementId u : t.U)
      if (p.less_at(x, u) && !set_contains(t.U, x)) return false;
    for (ElementId w : t.W)
      if (p.less_at(w, x) && !set_contains(t.W, x)) return false;
  }
  for (ElementId u : t.U)
    for (ElementId w : t.W)
      if (!p.less_at(u, w)) return false;
  return true;
}

bool typed(const FinitePoset& p, ElementId m, const ValidTriple& t) {
  for (ElementId x : t.U)
    if (x == m || !p.less_at(x, m)) return false;
  for (ElementId x : t.W)
    if (x == m || !p.less_at(m, x)) return false;
  for (ElementId x : t.V)
    if (x == m || p.rel_at(x, m) != Relation::INC) return false;
  return true;
}

std::optional<ElementId> witness_in(const FinitePoset& p, const ValidTriple& t) {
  for (ElementId m = 0; m < p.size(); ++m)
    if (typed(p, m, t)) return m;
  return std::nullopt;
}

}  // namespace

PlainGeneric build_plain_generic(std::size_t n, std::size_t support_bound) {
  PlainGeneric g;
  g.support_bound = support_bound;
  auto take = [&](const ValidTriple& t) {
    g.witnessed.push_back(t);
    if (witness_in(g.order, t)) return;
    const std::size_t k = g.order.size();
    Bitset below(k), above(k);
    for (ElementId u : t.U) {
      below.set(u);
      for (ElementId x = 0; x < k; ++x)
        if (g.order.less_at(x, u)) below.set(x);
    }
    for (ElementId w : t.W) {
      above.set(w);
      for (ElementId x = 0; x < k; ++x)
        if (g.order.less_at(w, x)) above.set(x);
    }
    g.order.append(k, below, above);
  };
  take({});
  std::vector<ElementId> rest;
  std::function<bool(ElementId, ElementId)> supports = [&](ElementId m, ElementId from) {
    ElementSet sup = rest;
    sup.push_back(m);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < sup.size(); ++i) total *= 3;
    for (std::uint64_t code = 0; code < total; ++code) {
      if (g.order.size() >= n) return false;
      ValidTriple t;
      std::uint64_t c = code;
      for (ElementId x : sup) {
        (c % 3 == 0 ? t.U : c % 3 == 1 ? t.V : t.W).push_back(x);
        c /= 3;
      }
      t.U = make_set(t.U);
      t.V = make_set(t.V);
      t.W = make_set(t.W);
      if (valid_in(g.order, t)) take(t);
    }
    if (rest.size() + 1 >= support_bound) return true;
    for (ElementId x = from; x < m; ++x) {
      rest.push_back(x);
      const bool go = supports(m, x + 1);
      rest.pop_back();
      if (!go) return false;
    }
    return true;
  };
  for (ElementId m = 0; g.order.size() < n; ++m) {
    if (!supports(m, 0)) break;
    g.horizon = m + 1;
  }
  return g;
}

AuditReport forcing_certificates(const PlainGeneric& g, ElementId v, std::size_t max_m) {
  AuditReport rep;
  rep.audit = "forcing";
  const FinitePoset& p = g.order;
  if (v >= p.size()) throw Error(ErrorCode::UnknownElement, "v = " + std::to_string(v));

  auto certify = [&](const ValidTriple& t, const std::string& label, ElementId m, ElementId m2, bool need_up) {
    ++rep.checks;
    const FinitePoset sub = p.restrict_to(t.domain());
    if (!is_valid_triple(sub, t)) {
      rep.fail({label, t.domain(), {}, "separating triple is not valid"});
      return;
    }
    if (auto w = witness_in(p, t)) {
      // The witness is fixed by f, sits above m and misses f(m) = m2.
      const bool fixed = need_up ? p.less_at(v, *w) : p.rel_at(v, *w) == Relation::INC;
      if (!fixed || !p.less_at(m, *w) || p.rel_at(m2, *w) != Relation::INC)
        rep.fail({label, {m, m2, *w}, {}, "witness does not separate"});
      else ++rep.counts[label + " witnessed"];
      return;
    }
    ElementId top = 0;
    for (ElementId x : t.domain()) top = std::max(top, x);
    if (top >= g.horizon) ++rep.counts[label + " enqueued"];
    else rep.fail({label, t.domain(), {}, "triple below the horizon has no witness"});
  };

  std::size_t perp = 0, below = 0;
  for (ElementId m = 0; m < p.size(); ++m) {
    if (m == v) continue;
    const Relation r = p.rel_at(m, v);
    if (r == Relation::INC && perp < max_m) {
      ++perp;
      for (ElementId m2 = 0; m2 < p.size(); ++m2) {
        if (m2 == m || m2 == v || p.rel_at(m2, v) != Relation::INC) continue;
        if (p.less_at(m2, m)) certify({make_set({v, m2}), {m}, {}}, "perp: m' < m", m2, m, true);
        else certify({make_set({v, m}), {m2}, {}}, "perp: m' > m or m' | m", m, m2, true);
      }
    } else if (r == Relation::LT && below < max_m) {
      ++below;
      for (ElementId m2 = 0; m2 < p.size(); ++m2) {
        if (m2 == m || !p.less_at(m2, v)) continue;
        if (p.less_at(m2, m)) certify({{m2}, make_set({m, v}), {}}, "below: m' < m", m2, m, false);
        else certify({{m}, make_set({m2, v}), {}}, "below: m' > m or m' | m", m, m2, false);
      }
    }
  }
  rep.counts["m_perp"] = perp;
  rep.counts["m_below"] = below;
  return rep;
}

}  // namespace forge
