#include "forge/verifier.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <utility>
#include <unordered_map>

namespace forge {

using json = nlohmann::json;

void AuditReport::fail(AuditFailure f) {
  counts["failures_total"] += 1;
  if (failures.size() < 64) failures.push_back(std::move(f));
}

json to_json(const AuditReport& r) {
  json fs = json::array();
  for (const auto& f : r.failures) {
    json rel = json::array();
    for (auto [x, y] : f.relations) rel.push_back({x, y});
    fs.push_back({{"clause", f.clause}, {"elements", f.elements}, {"relations", rel}, {"detail", f.detail}});
  }
  return {{"audit", r.audit},   {"stage_from", r.stage_from}, {"stage_to", r.stage_to},
          {"checks", r.checks}, {"pending", r.pending},       {"failures", fs},
          {"counts", r.counts}, {"notes", r.notes},           {"passed", r.passed()}};
}

namespace {

std::string key_of(const Bitset& b) {
  return {reinterpret_cast<const char*>(b.data()), b.word_count() * sizeof(std::uint64_t)};
}

// Everything the audits read, recomputed from the order, N and the host.
struct View {
  const Snapshot& s;
  std::unique_ptr<CofinalityAdapter> host;
  std::size_t n;
  Bitset s_mask, rt_mask, a_vp_mask;
  std::vector<ElementId> A, R, S, T;
  std::vector<bool> vp;  // A elements in V_p, by the host oracle
  std::vector<Bitset> down_S, up_S;
  std::vector<bool> s_plus, s_minus, rt_up;
  std::unordered_map<std::string, MoietyHandle> sigma_by_key, sigma_prime_by_key;
  std::map<MoietyHandle, Bitset> members;
  std::vector<std::size_t> orbit_of;
  std::vector<std::vector<std::size_t>> inverse;

  explicit View(const Snapshot& snap) : s(snap), host(snapshot_host(snap)), n(snap.size()) {
    s_mask = rt_mask = a_vp_mask = Bitset(n);
    vp.assign(n, false);
    for (ElementId x = 0; x < n; ++x) {
      const ElementRecord& e = s.elements[x];
      switch (e.kind) {
        case ElementKind::A:
          A.push_back(x);
          vp[x] = host->in_V(s.descriptor, e.index);
          if (vp[x]) a_vp_mask.set(x);
          break;
        case ElementKind::R: R.push_back(x), rt_mask.set(x); break;
        case ElementKind::S: S.push_back(x), s_mask.set(x); break;
        case ElementKind::T: T.push_back(x), rt_mask.set(x); break;
        case ElementKind::Constructed: break;
      }
    }
    for (ElementId x = 0; x < n; ++x) {
      Bitset d = s.order.below_row(x), u = s.order.above_row(x);
      d.resize(n);
      u.resize(n);
      d &= s_mask;
      u &= s_mask;
      if (s_mask.test(x)) d.set(x), u.set(x);
      s_plus.push_back(!d.none());
      s_minus.push_back(!u.none());
      Bitset below = s.order.below_row(x);
      below.resize(n);
      rt_up.push_back(rt_mask.test(x) || below.intersects(rt_mask));
      down_S.push_back(std::move(d));
      up_S.push_back(std::move(u));
    }
    std::unordered_map<ElementId, ElementId> s_by_n1;
    for (ElementId x : S)
      if (s.elements[x].n1) s_by_n1[*s.elements[x].n1] = x;
    for (const HandleRecord& hr : s.handles) {
      const MoietyHandle& h = hr.handle;
      Bitset b(n);
      if (!s.N.order.contains(h.generator)) continue;
      const std::size_t gi = s.N.order.index_of(h.generator);
      for (ElementId x : S) {
        const auto& n1 = s.elements[x].n1;
        if (!n1 || !s.N.order.contains(*n1)) continue;
        const std::size_t pi = s.N.order.index_of(*n1);
        if (h.kind == MoietyKind::Sigma ? s.N.order.less_at(pi, gi) : s.N.order.less_at(gi, pi)) b.set(x);
      }
      (h.kind == MoietyKind::Sigma ? sigma_by_key : sigma_prime_by_key).emplace(key_of(b), h);
      members.emplace(h, std::move(b));
    }
    for (const auto& g : s.generators) {
      std::vector<std::size_t> inv(n, n);
      for (ElementId x = 0; x < n; ++x)
        if (g[x] < n) inv[g[x]] = x;
      inverse.push_back(std::move(inv));
    }
    orbit_of.resize(n);
    std::iota(orbit_of.begin(), orbit_of.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (orbit_of[x] != x) x = orbit_of[x] = orbit_of[orbit_of[x]];
      return x;
    };
    for (const auto& g : s.generators)
      for (ElementId x = 0; x < n; ++x)
        if (g[x] < n) orbit_of[find(x)] = find(g[x]);
    for (ElementId x = 0; x < n; ++x) orbit_of[x] = find(x);
  }

  bool less(ElementId x, ElementId y) const { return s.order.less_at(x, y); }
  Relation rel(ElementId x, ElementId y) const { return s.order.rel_at(x, y); }
  ElementSet ids(const Bitset& b) const {
    ElementSet out;
    for_each_bit(b, [&](std::size_t i) { out.push_back(i); });
    return out;
  }
  // Above every materialized V_p point of A and incomparable to the rest.
  bool q_typed(ElementId x) const {
    for (ElementId a : A) {
      if (a == x) return false;
      const Relation r = rel(a, x);
      if (vp[a] ? r != Relation::LT : r != Relation::INC) return false;
    }
    return true;
  }
};

bool fixes_all(const std::vector<ElementId>& g, const ElementSet& xs) {
  for (ElementId x : xs)
    if (g[x] != x) return false;
  return true;
}

// Empty when m provably lacks type q: its certificate C matches the
// truncation and the host supplies a point of V_p outside C⁻.
std::string refute_q(const View& v, ElementId m, std::size_t scan) {
  const Snapshot& s = v.s;
  const std::size_t n = v.n;
  const auto& c = s.elements[m].C;
  if (!c) return "no C certificate";
  Bitset cdown(n);
  for (ElementId x : *c) {
    if (x >= n || !v.a_vp_mask.test(x)) return "C is not inside V_p";
    Bitset b = s.order.below_row(x);
    b.resize(n);
    cdown |= b;
    cdown.set(x);
  }
  cdown &= v.a_vp_mask;
  Bitset mdown = s.order.below_row(m);
  mdown.resize(n);
  mdown.set(m);
  mdown &= v.a_vp_mask;
  if (!(mdown == cdown)) return "C does not describe m⁻ ∩ V_p";
  for (std::size_t i = 0; i < scan; ++i) {
    if (!v.host->in_V(s.descriptor, i)) continue;
    bool below = false;
    for (ElementId x : *c) {
      const std::size_t ci = s.elements[x].index;
      if (ci == i || v.host->relation(i, ci) == Relation::LT) below = true;
    }
    if (!below) return {};
  }
  return "OracleUnavailable: no V_p point outside C⁻ found";
}

}  // namespace

std::vector<std::vector<ElementId>> group_elements(const Snapshot& s, std::size_t bound) {
  const std::size_t n = s.size();
  std::vector<ElementId> id(n);
  std::iota(id.begin(), id.end(), ElementId{0});
  std::vector<std::vector<ElementId>> inv;
  for (const auto& g : s.generators) {
    std::vector<ElementId> h(n);
    for (ElementId x = 0; x < n; ++x) h.at(g.at(x)) = x;
    inv.push_back(std::move(h));
  }
  std::set<std::vector<ElementId>> seen{id};
  std::vector<std::vector<ElementId>> out{id}, frontier{id};
  for (std::size_t len = 0; len < bound && !frontier.empty(); ++len) {
    std::vector<std::vector<ElementId>> next;
    for (const auto& w : frontier)
      for (std::size_t g = 0; g < s.generators.size(); ++g)
        for (const std::vector<ElementId>* gen : {&s.generators[g], &std::as_const(inv[g])}) {
          std::vector<ElementId> c(n);
          for (ElementId x = 0; x < n; ++x) c[x] = (*gen)[w[x]];
          if (seen.insert(c).second) {
            out.push_back(c);
            next.push_back(std::move(c));
          }
        }
    frontier = std::move(next);
  }
  return out;
}

AuditReport audit_structure(const Snapshot& s, const AuditOptions&) {
  AuditReport rep;
  rep.audit = "structure";
  rep.stage_to = s.last_stage();
  const View v(s);
  const std::size_t n = v.n;

  ++rep.checks;
  if (!s.order.is_strict_order()) rep.fail({"order", {}, {}, "relation is not a strict partial order"});

  for (std::size_t k = 1; k < s.stage_ends.size(); ++k) {
    ++rep.checks;
    if (s.stage_ends[k] < s.stage_ends[k - 1]) rep.fail({"stages", {}, {}, "stage boundaries decrease"});
  }

  // M_0 relations from the definition.
  auto expect = [&](ElementId x, ElementId y, bool want, const char* clause) {
    ++rep.checks;
    if (v.less(x, y) != want)
      rep.fail({clause, {x, y}, {}, want ? "expected x < y" : "unexpected x < y"});
  };
  for (ElementId x : v.A) {
    for (ElementId y : v.A)
      if (x != y)
        expect(x, y, v.host->relation(s.elements[x].index, s.elements[y].index) == Relation::LT, "host");
    for (ElementId y : v.S) {
      expect(x, y, v.vp[x], "a<s");
      expect(y, x, false, "a<s");
    }
    for (ElementId r : v.R) {
      expect(r, x, !v.vp[x], "r<a");
      expect(x, r, false, "r<a");
    }
    for (ElementId t : v.T) {
      const std::size_t ai = s.elements[x].index, ti = s.elements[t].index;
      expect(x, t, v.vp[x] && (ai == ti || v.host->relation(ai, ti) == Relation::LT), "a<t");
      expect(t, x, false, "a<t");
    }
  }
  for (ElementId r : v.R)
    for (ElementId y : v.S) {
      expect(r, y, s.elements[r].index >= s.elements[y].index, "r<s");
      expect(y, r, false, "r<s");
    }
  for (ElementId t : v.T)
    for (ElementId y : v.S) {
      ++rep.checks;
      if (v.rel(t, y) != Relation::INC) rep.fail({"t|s", {t, y}, {}, "T meets S"});
    }

  // Generators: order automorphisms fixing R ∪ S, acting on A as the host does.
  std::unordered_map<std::size_t, ElementId> a_by_host, t_by_host;
  for (ElementId a : v.A) a_by_host[s.elements[a].index] = a;
  for (ElementId t : v.T) t_by_host[s.elements[t].index] = t;
  for (std::size_t g = 0; g < s.generators.size(); ++g) {
    const auto& img = s.generators[g];
    ++rep.checks;
    std::vector<bool> hit(n, false);
    bool bij = img.size() == n;
    for (ElementId x = 0; bij && x < n; ++x) {
      if (img[x] >= n || hit[img[x]]) bij = false;
      else hit[img[x]] = true;
    }
    if (!bij) {
      rep.fail({"generator", {}, {}, "generator " + std::to_string(g) + " is not a bijection"});
      continue;
    }
    for (ElementId x = 0; x < n; ++x)
      for (ElementId y = 0; y < n; ++y) {
        if (v.less(x, y) != v.less(img[x], img[y])) {
          rep.fail({"generator", {x, y}, {}, "generator " + std::to_string(g) + " does not preserve x < y"});
          x = n;
          break;
        }
      }
    ++rep.checks;
    for (ElementId x : v.R)
      if (img[x] != x) rep.fail({"generator", {x}, {}, "moves a point of R"});
    for (ElementId x : v.S)
      if (img[x] != x) rep.fail({"generator", {x}, {}, "moves a point of S"});
    for (ElementId a : v.A) {
      ++rep.checks;
      auto it = a_by_host.find(v.host->apply(g, s.elements[a].index));
      if (it == a_by_host.end() || img[a] != it->second) rep.fail({"generator", {a}, {}, "disagrees with the host"});
    }
    for (ElementId t : v.T) {
      ++rep.checks;
      auto it = t_by_host.find(v.host->apply(g, s.elements[t].index));
      if (it == t_by_host.end() || img[t] != it->second) rep.fail({"generator", {t}, {}, "g t_a != t_{ga}"});
    }
  }

  // Each constructed point sits where its pair puts it relative to older
  // points, through materialized intermediaries only.
  for (ElementId y = 0; y < n; ++y) {
    const ElementRecord& e = s.elements[y];
    if (e.kind != ElementKind::Constructed || !e.pair) continue;
    const AcceptablePair& p = *e.pair;
    Bitset lower(n), upper(n);
    for (ElementId u : p.U) lower.set(u);
    if (p.u_moiety && v.members.count(*p.u_moiety)) lower |= v.members.at(*p.u_moiety);
    for (ElementId w : p.W) upper.set(w);
    if (p.w_all) upper |= v.s_mask;
    if (p.w_moiety && v.members.count(*p.w_moiety)) upper |= v.members.at(*p.w_moiety);
    for (ElementId x = 0; x < n; ++x) {
      if (x == y) continue;
      // Mates and later points are checked from their own side.
      if (s.elements[x].kind == ElementKind::Constructed && s.elements[x].stage >= e.stage) continue;
      Bitset xu = s.order.above_row(x), xd = s.order.below_row(x);
      xu.resize(n);
      xd.resize(n);
      xu.set(x);
      xd.set(x);
      const Relation want = xu.intersects(lower) ? Relation::LT : xd.intersects(upper) ? Relation::GT : Relation::INC;
      ++rep.checks;
      if (v.rel(x, y) != want)
        rep.fail({"descriptor", {x, y}, {}, "relation disagrees with the pair (" + std::string(to_string(want)) + ")"});
    }
  }
  return rep;
}

AuditReport audit_ac_props(const Snapshot& full, std::uint32_t k, const AuditOptions& o) {
  const Snapshot s = truncate(full, k);
  AuditReport rep;
  rep.audit = "ac_props";
  rep.stage_to = k;
  rep.notes.push_back("stabilizers approximated by generator words of length <= " + std::to_string(o.word_bound));
  const View v(s);
  const std::size_t n = v.n;

  // (i)
  const auto group = group_elements(s, o.word_bound);
  rep.counts["group_elements"] = group.size();
  for (ElementId m = 0; m < n; ++m) {
    const ElementSet& a0 = s.elements[m].A0;
    ++rep.checks;
    bool ok = true;
    for (ElementId a : a0)
      if (a >= n || s.elements[a].kind != ElementKind::A) ok = false;
    if (!ok) {
      rep.fail({"(i)", {m}, {}, "A0 certificate names a point outside A"});
      continue;
    }
    for (const auto& g : group)
      if (fixes_all(g, a0) && g[m] != m) {
        rep.fail({"(i)", {m, g[m]}, {}, "a word fixing A0 moves the point"});
        break;
      }
  }

  // (ii)
  for (ElementId m = 0; m < n; ++m) {
    if (!v.s_minus[m] || v.s_mask.test(m)) continue;
    ++rep.checks;
    const auto& c = s.elements[m].C;
    if (!c) {
      rep.fail({"(ii)", {m}, {}, "no C certificate"});
      continue;
    }
    Bitset cdown(n);
    for (ElementId x : *c) {
      if (x >= n || !v.a_vp_mask.test(x)) {
        rep.fail({"(ii)", {m, x}, {}, "C is not inside V_p"});
        continue;
      }
      Bitset b = s.order.below_row(x);
      b.resize(n);
      cdown |= b;
      cdown.set(x);
    }
    cdown &= v.a_vp_mask;
    Bitset mdown = s.order.below_row(m);
    mdown.resize(n);
    mdown.set(m);
    mdown &= v.a_vp_mask;
    if (!(mdown == cdown)) rep.fail({"(ii)", {m}, {}, "m⁻ ∩ V_p differs from C⁻ ∩ V_p"});
  }

  // (iii) and (iv)
  std::set<MoietyHandle> fingerprints;
  for (ElementId m = 0; m < n; ++m) {
    if (v.s_mask.test(m)) continue;
    ++rep.checks;
    if (!v.down_S[m].none()) {
      auto it = v.sigma_by_key.find(key_of(v.down_S[m]));
      if (it == v.sigma_by_key.end()) rep.fail({"(iv)", {m}, {}, "m⁻ ∩ S is not a Σ moiety"});
      else fingerprints.insert(it->second);
    }
    if (!v.rt_up[m]) {
      ++rep.checks;
      if (!(v.up_S[m] == v.s_mask) && v.sigma_prime_by_key.count(key_of(v.up_S[m])) == 0)
        rep.fail({"(iii)", {m}, {}, "m⁺ ∩ S is neither S nor a Σ′ moiety"});
    }
  }
  rep.counts["fingerprints"] = fingerprints.size();

  // (v)
  std::map<std::size_t, std::vector<ElementId>> orbits;
  for (ElementId m = 0; m < n; ++m)
    if (v.s_plus[m]) orbits[v.orbit_of[m]].push_back(m);
  for (const auto& [root, mates] : orbits)
    for (std::size_t i = 0; i < mates.size(); ++i)
      for (std::size_t j = i + 1; j < mates.size(); ++j) {
        ++rep.checks;
        if (v.rel(mates[i], mates[j]) != Relation::INC)
          rep.fail({"(v)", {mates[i], mates[j]}, {}, "comparable orbit mates in S⁺"});
      }

  // (vi)
  std::unordered_map<std::string, std::vector<ElementId>> by_key;
  for (ElementId m = 0; m < n; ++m)
    if (v.s_plus[m]) by_key[key_of(v.down_S[m])].push_back(m);
  for (const auto& [key, group_m] : by_key) {
    rep.checks += group_m.size();
    for (std::size_t i = 0; i < group_m.size(); ++i)
      for (std::size_t j = i + 1; j < group_m.size(); ++j) {
        const ElementId a = group_m[i], b = group_m[j];
        if (v.orbit_of[a] == v.orbit_of[b]) continue;
        // {s} is finite, a moiety is not: distinct even when the
        // materialized parts agree.
        if (v.s_mask.test(a) != v.s_mask.test(b) && v.sigma_by_key.count(key) != 0) {
          ++rep.counts["separated_by_cardinality"];
          continue;
        }
        rep.fail({"(vi)", {a, b}, {}, "points in different orbits share m⁻ ∩ S"});
      }
  }

  // (∗)
  ++rep.checks;
  if (fingerprints.size() > n) rep.fail({"(*)", {}, {}, "more fingerprints than points"});
  return rep;
}

AuditReport audit_minimality(const Snapshot& s, const AuditOptions& o) {
  AuditReport rep;
  rep.audit = "minimality";
  rep.stage_to = s.last_stage();
  rep.notes.push_back("type q over A is evaluated on the A-truncation (CONSISTENT-AT-TRUNCATION)");
  const View v(s);
  const std::size_t n = v.n;

  // (i) nothing below a point of S has type q: certificate C plus a point
  // of V_p outside C⁻ from the host.
  for (ElementId m = 0; m < n; ++m) {
    if (!v.s_minus[m] || v.s_mask.test(m)) continue;
    ++rep.checks;
    if (v.q_typed(m)) ++rep.counts["consistent_at_truncation"];
    const std::string why = refute_q(v, m, o.oracle_scan);
    if (why.empty()) ++rep.counts["certified_not_q"];
    else rep.fail({"(i)", {m}, {}, why});
  }

  // (ii) R ∪ T are the minimal points of F = {m | m⁺ ∩ S and m⁻ ∩ S finite}.
  std::vector<bool> fin_up(n), fin_down(n);
  for (ElementId m = 0; m < n; ++m) {
    const ElementRecord& e = s.elements[m];
    switch (e.kind) {
      case ElementKind::A: fin_up[m] = !v.vp[m], fin_down[m] = true; break;
      case ElementKind::R:
      case ElementKind::S:
      case ElementKind::T: fin_up[m] = fin_down[m] = true; break;
      case ElementKind::Constructed: {
        if (!e.pair) {
          rep.fail({"(ii)", {m}, {}, "constructed point without a pair"});
          break;
        }
        const AcceptablePair& p = *e.pair;
        bool up = !p.w_all && !p.w_moiety, down = !p.u_moiety;
        for (ElementId w : p.W) up = up && w < m && fin_up[w];
        for (ElementId u : p.U) down = down && u < m && fin_down[u];
        fin_up[m] = up;
        fin_down[m] = down;
      }
    }
  }
  std::size_t f_size = 0;
  for (ElementId m = 0; m < n; ++m) {
    if (!fin_up[m] || !fin_down[m]) continue;
    ++f_size;
    ++rep.checks;
    const bool rt = v.rt_mask.test(m);
    if (rt) {
      for (ElementId x = 0; x < n; ++x)
        if (fin_up[x] && fin_down[x] && v.less(x, m)) {
          rep.fail({"(ii)", {x, m}, {{x, m}}, "a point of F lies below R ∪ T"});
          break;
        }
    } else {
      Bitset b = s.order.below_row(m);
      b.resize(n);
      if (!b.intersects(v.rt_mask)) rep.fail({"(ii)", {m}, {}, "minimal point of F outside R ∪ T"});
    }
  }
  for (ElementId x = 0; x < n; ++x)
    if (v.rt_mask.test(x) && !(fin_up[x] && fin_down[x])) rep.fail({"(ii)", {x}, {}, "R ∪ T point outside F"});
  rep.counts["F"] = f_size;
  return rep;
}

namespace {

bool valid_on(const Snapshot& s, const ValidTriple& t) {
  const ElementSet dom = t.domain();
  if (dom.size() != t.U.size() + t.V.size() + t.W.size()) return false;
  for (ElementId x : dom)
    if (x >= s.size()) return false;
  for (ElementId x : dom) {
    for (ElementId u : t.U)
      if (s.order.less_at(x, u) && !set_contains(t.U, x)) return false;
    for (ElementId w : t.W)
      if (s.order.less_at(w, x) && !set_contains(t.W, x)) return false;
  }
  for (ElementId u : t.U)
    for (ElementId w : t.W)
      if (!s.order.less_at(u, w)) return false;
  return true;
}

bool has_type(const Snapshot& s, ElementId m, const ValidTriple& t) {
  if (m >= s.size()) return false;
  for (ElementId x : t.U)
    if (x == m || !s.order.less_at(x, m)) return false;
  for (ElementId x : t.W)
    if (x == m || !s.order.less_at(m, x)) return false;
  for (ElementId x : t.V)
    if (x == m || s.order.rel_at(x, m) != Relation::INC) return false;
  return true;
}

}  // namespace

bool pending_beyond_budget(const Snapshot& s, const TaskRecord& t) {
  if (t.note == "witness lies past the truncation") return true;
  // The scheduler is FIFO: once a task blocks, nothing after it is done.
  for (const TaskRecord& later : s.tasks)
    if (later.index > t.index && later.status == TaskStatus::Done) return false;
  return true;
}

AuditReport audit_genericity(const Snapshot& s, const AuditOptions& o) {
  AuditReport rep;
  rep.audit = "genericity";
  rep.stage_to = s.last_stage();
  const View v(s);
  std::set<ValidTriple> witnessed;
  for (const TaskRecord& t : s.tasks) {
    ++rep.checks;
    if (t.status == TaskStatus::Pending) {
      ++rep.pending;
      if (!pending_beyond_budget(s, t))
        rep.fail({"budget", {}, {}, "task " + std::to_string(t.index) + " is PENDING ahead of completed tasks"});
      continue;
    }
    if (!t.witness) {
      rep.fail({"ledger", {}, {}, "task " + std::to_string(t.index) + " is DONE without a witness"});
      continue;
    }
    const ElementId w = *t.witness;
    if (t.source == "(a)") {
      if (t.triple.domain().size() > o.support_bound) {
        rep.fail({"(a)", t.triple.domain(), {}, "support above the bound"});
        continue;
      }
      if (!valid_on(s, t.triple)) {
        rep.fail({"(a)", t.triple.domain(), {}, "ledger triple is not valid"});
        continue;
      }
      if (!has_type(s, w, t.triple)) {
        rep.fail({"(a)", {w}, {}, "witness has the wrong type over task " + std::to_string(t.index)});
        continue;
      }
      witnessed.insert(t.triple);
      ++rep.counts["a_witnessed"];
      if (t.route == "free") ++rep.counts["a_free"];
    } else {
      bool ok = w < v.n && v.down_S[w].none() && v.up_S[w].none() && t.pair;
      if (ok)
        for (ElementId x : t.pair->W) ok = ok && v.less(w, x);
      if (ok)
        for (ElementId x : t.pair->U) ok = ok && v.less(x, w);
      if (!ok) rep.fail({"(c)", {w}, {}, "witness of task " + std::to_string(t.index) + " has the wrong type"});
      else ++rep.counts["c_witnessed"];
    }
  }

  // Independent enumeration of every triple the ledger claims to cover.
  const std::size_t h = std::min(s.horizon, s.size());
  std::vector<ElementId> sup;
  std::uint64_t covered = 0;
  std::function<void(ElementId)> rec = [&](ElementId from) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < sup.size(); ++i) total *= 3;
    for (std::uint64_t code = 0; code < total; ++code) {
      ValidTriple t;
      std::uint64_t c = code;
      for (ElementId x : sup) {
        (c % 3 == 0 ? t.U : c % 3 == 1 ? t.V : t.W).push_back(x);
        c /= 3;
      }
      if (!valid_on(s, t)) continue;
      ++covered;
      ++rep.checks;
      if (witnessed.count(t) == 0) rep.fail({"coverage", t.domain(), {}, "valid triple below the horizon has no witness"});
    }
    if (sup.size() == o.support_bound) return;
    for (ElementId x = from; x < h; ++x) {
      sup.push_back(x);
      rec(x + 1);
      sup.pop_back();
    }
  };
  rec(0);
  rep.counts["horizon"] = h;
  rep.counts["covered_triples"] = covered;
  return rep;
}

FinitePoset rs_truncation(std::size_t n) {
  std::vector<ElementId> ids;
  std::vector<std::pair<ElementId, ElementId>> lt;
  for (std::size_t i = 0; i < 2 * n; ++i) ids.push_back(i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) lt.emplace_back(i, n + j);
  return transitive_close(ids, lt);
}

AuditReport audit_uniqueness(const Snapshot& s, const AuditOptions& o) {
  AuditReport rep;
  rep.audit = "uniqueness";
  rep.stage_to = s.last_stage();
  rep.notes.push_back("stabilizers approximated by generator words of length <= " + std::to_string(o.word_bound));
  const View v(s);
  const std::size_t n = v.n;

  // S-identification.
  for (ElementId m = 0; m < n; ++m) {
    if (v.s_mask.test(m) || !v.q_typed(m)) continue;
    ++rep.checks;
    if (refute_q(v, m, o.oracle_scan).empty()) {
      ++rep.counts["q_refuted_by_certificate"];
      continue;
    }
    if (v.s_plus[m]) {
      ++rep.counts["q_typed_above_S"];
      continue;
    }
    if (v.s_minus[m]) {
      rep.fail({"S-identification", {m}, {}, "q-typed point below S"});
      continue;
    }
    const TaskRecord* task = nullptr;
    for (const TaskRecord& t : s.tasks)
      if (t.source == "(c)" && t.pair && set_contains(t.pair->W, m)) task = &t;
    if (!task) {
      rep.fail({"S-identification", {m}, {}, "q-typed point outside S⁺ ∪ S⁻ has no (c)-task"});
      continue;
    }
    if (task->status == TaskStatus::Pending) {
      ++rep.pending;
      if (!pending_beyond_budget(s, *task))
        rep.fail({"S-identification", {m}, {}, "(c)-task is PENDING ahead of completed tasks"});
      continue;
    }
    const ElementId w = *task->witness;
    if (!(w < n && v.less(w, m) && v.q_typed(w) && v.down_S[w].none() && v.up_S[w].none()))
      rep.fail({"S-identification", {m, w}, {}, "(c)-witness does not break minimality"});
    else ++rep.counts["c_certificates"];
  }

  // R ∪ T identification: the action keeps R ∪ T, fixing R.
  for (const auto& g : s.generators)
    for (ElementId x = 0; x < n; ++x) {
      if (!v.rt_mask.test(x)) continue;
      ++rep.checks;
      if (!v.rt_mask.test(g[x]) || (s.elements[x].kind == ElementKind::R && g[x] != x))
        rep.fail({"R∪T", {x, g[x]}, {}, "generator does not stabilize R ∪ T correctly"});
    }

  // Rigidity of R_n ∪ S_n as materialized.
  for (std::size_t k = 1; k <= std::min({o.rigidity_max, v.R.size(), v.S.size()}); ++k) {
    std::vector<ElementId> ids;
    for (std::size_t i = 0; i < k; ++i) ids.push_back(v.R[i]);
    for (std::size_t i = 0; i < k; ++i) ids.push_back(v.S[i]);
    const FinitePoset sub = s.order.restrict_to(make_set(ids));
    ++rep.checks;
    const auto autos = automorphisms(sub, 2 * k);
    if (autos.size() != 1) rep.fail({"rigidity", ids, {}, "R_n ∪ S_n has a nontrivial automorphism"});
  }

  // Fingerprint distinctness across orbits in S⁺ \ S, with the separating point.
  std::vector<ElementId> splus;
  for (ElementId m = 0; m < n; ++m)
    if (v.s_plus[m] && !v.s_mask.test(m)) splus.push_back(m);
  std::set<std::pair<MoietyHandle, MoietyHandle>> recorded;
  for (const auto& c : s.certificates) recorded.insert(std::minmax(c.a, c.b));
  for (std::size_t i = 0; i < splus.size(); ++i)
    for (std::size_t j = i + 1; j < splus.size(); ++j) {
      const ElementId a = splus[i], b = splus[j];
      if (v.orbit_of[a] == v.orbit_of[b]) continue;
      ++rep.checks;
      Bitset x = v.down_S[a];
      Bitset y = v.down_S[b];
      Bitset d = x;
      d.and_not(y);
      y.and_not(x);
      d |= y;
      if (d.none()) {
        rep.fail({"fingerprint", {a, b}, {}, "distinct orbits with the same m⁻ ∩ S"});
        continue;
      }
      auto ha = v.sigma_by_key.find(key_of(v.down_S[a]));
      auto hb = v.sigma_by_key.find(key_of(v.down_S[b]));
      if (ha != v.sigma_by_key.end() && hb != v.sigma_by_key.end() &&
          recorded.count(std::minmax(ha->second, hb->second)) != 0)
        ++rep.counts["separations_recorded"];
      else ++rep.counts["separations_found"];
    }

  // (⋆) on every enough_aps2 stage.
  const auto group = group_elements(s, o.word_bound);
  rep.counts["group_elements"] = group.size();
  std::set<std::uint32_t> claimed;
  for (const StarClaim& c : s.star_claims) claimed.insert(c.stage);
  for (const StageRecord& st : s.stages)
    if (st.lemma.rfind("enough_aps2", 0) == 0) {
      ++rep.checks;
      if (claimed.count(st.stage) == 0) rep.fail({"(⋆)", {}, {}, "stage " + std::to_string(st.stage) + " has no claim"});
    }
  for (const StarClaim& c : s.star_claims) {
    if (c.point >= n) continue;
    // Base of the type: M_0 sorts plus S⁺ points of earlier stages.
    std::vector<ElementId> base;
    for (ElementId x = 0; x < n; ++x) {
      const ElementRecord& e = s.elements[x];
      if (e.kind != ElementKind::Constructed || (e.stage < c.stage && v.s_plus[x])) base.push_back(x);
    }
    for (const auto& g : group) {
      ++rep.checks;
      const bool fixes_point = g[c.point] == c.point;
      if (fixes_point != fixes_all(g, c.fixed)) {
        rep.fail({"(⋆)", {c.point}, {}, c.label + " fails at stage " + std::to_string(c.stage)});
        break;
      }
      bool keeps_type = true;
      for (ElementId x : base)
        if (x != c.point && v.rel(g[c.point], x) != v.rel(c.point, x)) {
          keeps_type = false;
          break;
        }
      if (keeps_type != fixes_point) {
        rep.fail({"(⋆)", {c.point}, {}, "stabilizer of the point differs from that of its type"});
        break;
      }
    }
    ++rep.counts["claims"];
  }
  return rep;
}

std::string_view to_string(Fault f) {
  switch (f) {
    case Fault::FlipRelation: return "flip-relation";
    case Fault::ForgeFingerprint: return "forge-fingerprint";
    case Fault::BreakStabilizer: return "break-stabilizer";
    case Fault::TamperA0: return "tamper-a0";
    case Fault::FullVpBelow: return "full-vp-below";
  }
  return "?";
}

Fault fault_from_string(std::string_view name) {
  for (Fault f : {Fault::FlipRelation, Fault::ForgeFingerprint, Fault::BreakStabilizer, Fault::TamperA0,
                  Fault::FullVpBelow})
    if (to_string(f) == name) return f;
  throw Error(ErrorCode::BadConfig, "unknown fault '" + std::string(name) + "'");
}

std::optional<Snapshot> inject_fault(const Snapshot& src, Fault f, std::string* where) {
  Snapshot s = src;
  const View v(src);
  const std::size_t n = v.n;
  auto note = [&](const std::string& w) {
    if (where) *where = w;
  };
  switch (f) {
    case Fault::FlipRelation:
      for (ElementId m = 0; m < n; ++m) {
        if (v.s_mask.test(m) || !v.s_plus[m]) continue;
        for (ElementId x : v.S)
          if (v.rel(x, m) == Relation::INC) {
            s.order.force_relation_at(x, m, Relation::LT);
            note("s" + std::to_string(x) + " < " + std::to_string(m));
            return s;
          }
      }
      return std::nullopt;
    case Fault::ForgeFingerprint:
      for (ElementId a = 0; a < n; ++a) {
        if (v.s_mask.test(a) || !v.s_plus[a]) continue;
        for (ElementId b = a + 1; b < n; ++b) {
          if (v.s_mask.test(b) || !v.s_plus[b] || v.orbit_of[a] == v.orbit_of[b]) continue;
          for (ElementId x : v.S)
            s.order.force_relation_at(x, b, v.less(x, a) ? Relation::LT : Relation::INC);
          note(std::to_string(b) + " gets the fingerprint of " + std::to_string(a));
          return s;
        }
      }
      return std::nullopt;
    case Fault::BreakStabilizer: {
      const auto group = group_elements(src, 6);
      for (auto& c : s.star_claims)
        for (const auto& g : group)
          if (g[c.point] != c.point && !c.fixed.empty()) {
            c.fixed.clear();
            note("claim at stage " + std::to_string(c.stage) + " loses its fixed set");
            return s;
          }
      return std::nullopt;
    }
    case Fault::TamperA0: {
      const auto group = group_elements(src, 6);
      for (ElementId m = 0; m < n; ++m)
        for (const auto& g : group)
          if (g[m] != m && !s.elements[m].A0.empty()) {
            s.elements[m].A0.clear();
            note("A0 of " + std::to_string(m) + " cleared");
            return s;
          }
      return std::nullopt;
    }
    case Fault::FullVpBelow:
      for (ElementId m = 0; m < n; ++m) {
        if (v.s_mask.test(m) || !v.s_minus[m] || !src.elements[m].C) continue;
        bool changed = false;
        for (ElementId a = 0; a < n; ++a)
          if (v.a_vp_mask.test(a) && a != m && !v.less(a, m)) {
            s.order.force_relation_at(a, m, Relation::LT);
            changed = true;
          }
        if (!changed) continue;
        note("all of V_p placed below " + std::to_string(m));
        return s;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace forge
