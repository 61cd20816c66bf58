#include "forge/universe.hpp"

#include <algorithm>
#include <string>

namespace forge {

using nlohmann::json;

std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::A: return "A";
    case ElementKind::R: return "R";
    case ElementKind::S: return "S";
    case ElementKind::T: return "T";
    case ElementKind::Constructed: return "constructed";
  }
  return "?";
}

SSet sset_all() {
  SSet s;
  s.all = true;
  return s;
}

SSet sset_handle(const MoietyHandle& h) {
  SSet s;
  s.handles = {h};
  return s;
}

SSet sset_union(const SSet& a, const SSet& b) {
  SSet s;
  s.all = a.all || b.all;
  std::set<MoietyHandle> hs(a.handles.begin(), a.handles.end());
  hs.insert(b.handles.begin(), b.handles.end());
  s.handles.assign(hs.begin(), hs.end());
  s.points = set_union(a.points, b.points);
  s.prefix = std::max(a.prefix, b.prefix);
  return s;
}

json to_json(const SSet& s) {
  json hs = json::array();
  for (const auto& h : s.handles) hs.push_back(to_json(h));
  return json{{"all", s.all}, {"handles", hs}, {"points", s.points}, {"prefix", s.prefix}};
}

SSet sset_from_json(const json& j) {
  try {
    SSet s;
    s.all = j.at("all").get<bool>();
    for (const auto& h : j.at("handles")) s.handles.push_back(handle_from_json(h));
    s.points = j.at("points").get<ElementSet>();
    s.prefix = j.at("prefix").get<std::uint64_t>();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptArtifact, std::string("S-set: ") + e.what());
  }
}

json to_json(const AcceptablePair& p) {
  json j{{"U", p.U}, {"W", p.W}, {"w_all", p.w_all}};
  j["u_moiety"] = p.u_moiety ? to_json(*p.u_moiety) : json(nullptr);
  j["w_moiety"] = p.w_moiety ? to_json(*p.w_moiety) : json(nullptr);
  return j;
}

AcceptablePair pair_from_json(const json& j) {
  try {
    AcceptablePair p;
    p.U = j.at("U").get<ElementSet>();
    p.W = j.at("W").get<ElementSet>();
    p.w_all = j.at("w_all").get<bool>();
    if (!j.at("u_moiety").is_null()) p.u_moiety = handle_from_json(j.at("u_moiety"));
    if (!j.at("w_moiety").is_null()) p.w_moiety = handle_from_json(j.at("w_moiety"));
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptArtifact, std::string("pair: ") + e.what());
  }
}

StagedUniverse::StagedUniverse(std::unique_ptr<CofinalityAdapter> host, LimitDescriptor p, UniverseConfig cfg)
    : host_(std::move(host)), p_(p), cfg_(cfg), engine_(cfg.seed) {
  gen_.resize(host_->generator_count());
  gen_inv_.resize(host_->generator_count());
}

std::optional<ElementId> StagedUniverse::a_element(std::size_t host_index) const {
  auto it = a_by_host_.find(host_index);
  if (it == a_by_host_.end()) return std::nullopt;
  return it->second;
}

std::optional<ElementId> StagedUniverse::t_element(std::size_t host_index) const {
  auto it = t_by_host_.find(host_index);
  if (it == t_by_host_.end()) return std::nullopt;
  return it->second;
}

std::optional<ElementId> StagedUniverse::s_of_n1(ElementId n1) const {
  auto it = s_by_n1_.find(n1);
  if (it == s_by_n1_.end()) return std::nullopt;
  return it->second;
}

std::vector<ElementId> StagedUniverse::orbit(ElementId x) const {
  std::vector<ElementId> out{x};
  std::set<ElementId> seen{x};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t g = 0; g < gen_.size(); ++g)
      for (ElementId y : {gen_[g][out[i]], gen_inv_[g][out[i]]})
        if (seen.insert(y).second) out.push_back(y);
  return out;
}

Relation StagedUniverse::compare(ElementId x, ElementId y) const { return order_.rel(x, y); }

bool StagedUniverse::member_s(const MoietyHandle& h, ElementId s) const { return engine_.member(h, infos_[s].n1); }

std::optional<std::uint64_t> StagedUniverse::first_member_index(const MoietyHandle& h) const {
  FirstMember& f = first_member_[h];
  while (!f.index && f.scanned < s_elems_.size()) {
    if (member_s(h, s_elems_[f.scanned])) f.index = f.scanned;
    ++f.scanned;
  }
  return f.index;
}

bool StagedUniverse::meets(const SSet& a, const SSet& b) const {
  if (a.empty() || b.empty()) return false;
  if (a.all || b.all) return true;
  for (const auto& x : a.handles)
    for (const auto& y : b.handles) {
      if (x.kind == y.kind) throw Error(ErrorCode::Internal, "intersection of two moieties of one family");
      if (engine_.intersects(x, y)) return true;
    }
  auto handles_vs = [&](const SSet& hs, const SSet& other) {
    for (const auto& h : hs.handles) {
      for (ElementId s : other.points)
        if (member_s(h, s)) return true;
      if (other.prefix > 0) {
        auto f = first_member_index(h);
        if (f && *f < other.prefix) return true;
      }
    }
    return false;
  };
  if (handles_vs(a, b) || handles_vs(b, a)) return true;
  if (!set_intersection(a.points, b.points).empty()) return true;
  for (ElementId s : a.points)
    if (infos_[s].index < b.prefix) return true;
  for (ElementId s : b.points)
    if (infos_[s].index < a.prefix) return true;
  return a.prefix > 0 && b.prefix > 0;
}

bool StagedUniverse::subset(const SSet& a, const SSet& b) const {
  if (a.empty() || b.all) return true;
  if (a.all) return false;
  for (const auto& h : a.handles) {
    bool ok = false;
    for (const auto& h2 : b.handles)
      if (h2.kind == h.kind && engine_.contains(h2, h)) ok = true;
    if (!ok) return false;
  }
  auto covered = [&](ElementId s) {
    if (set_contains(b.points, s) || infos_[s].index < b.prefix) return true;
    for (const auto& h : b.handles)
      if (member_s(h, s)) return true;
    return false;
  };
  for (ElementId s : a.points)
    if (!covered(s)) return false;
  for (std::uint64_t j = 0; j < a.prefix; ++j)
    if (!covered(s_elems_.at(j))) return false;
  return true;
}

SSet StagedUniverse::normalize(const SSet& a) const {
  if (a.all) return sset_all();
  for (const auto& h : a.handles)
    if (subset(a, sset_handle(h))) return sset_handle(h);
  return a;
}

SSet StagedUniverse::w_moiety_set(const AcceptablePair& p) const {
  if (p.w_all) return sset_all();
  if (p.w_moiety) return sset_handle(*p.w_moiety);
  return {};
}

bool StagedUniverse::in_down(ElementId x, const AcceptablePair& p) const {
  for (ElementId u : p.U)
    if (leq(x, u)) return true;
  return p.u_moiety && meets(infos_.at(x).up_S, sset_handle(*p.u_moiety));
}

bool StagedUniverse::in_up(ElementId x, const AcceptablePair& p) const {
  for (ElementId w : p.W)
    if (leq(w, x)) return true;
  return meets(infos_.at(x).down_S, w_moiety_set(p));
}

// Some m of the previous stage with w ≤ m ≤ u for w in W(lo), u in U(hi).
bool StagedUniverse::closure_less(const AcceptablePair& lo, const AcceptablePair& hi) const {
  const SSet z = hi.u_moiety ? sset_handle(*hi.u_moiety) : SSet{};
  for (ElementId w : lo.W) {
    for (ElementId u : hi.U)
      if (leq(w, u)) return true;
    if (meets(infos_[w].up_S, z)) return true;
  }
  const SSet ws = w_moiety_set(lo);
  if (ws.empty()) return false;
  for (ElementId u : hi.U)
    if (meets(infos_[u].down_S, ws)) return true;
  return meets(ws, z);
}

SSet StagedUniverse::pair_down_S(const AcceptablePair& p) const {
  SSet s = p.u_moiety ? sset_handle(*p.u_moiety) : SSet{};
  for (ElementId u : p.U) s = sset_union(s, infos_.at(u).down_S);
  return normalize(s);
}

SSet StagedUniverse::pair_up_S(const AcceptablePair& p) const {
  SSet s = w_moiety_set(p);
  for (ElementId w : p.W) s = sset_union(s, infos_.at(w).up_S);
  return normalize(s);
}

bool StagedUniverse::pair_in_RT_up(const AcceptablePair& p) const {
  if (p.u_moiety) return true;  // every s_j lies above r_j
  for (ElementId u : p.U)
    if (infos_.at(u).in_RT_up) return true;
  return false;
}

std::vector<Violation> StagedUniverse::acceptability(const AcceptablePair& p) const {
  std::vector<Violation> out;
  for (ElementId x : p.U)
    if (x >= size()) throw Error(ErrorCode::UnknownElement, "pair mentions " + std::to_string(x));
  for (ElementId x : p.W)
    if (x >= size()) throw Error(ErrorCode::UnknownElement, "pair mentions " + std::to_string(x));
  if (p.w_all && p.w_moiety) out.push_back({"shape", "W names both all of S and a moiety"});
  if (p.u_moiety && p.u_moiety->kind != MoietyKind::Sigma) out.push_back({"shape", "U-moiety is not in Σ"});
  if (p.w_moiety && p.w_moiety->kind != MoietyKind::SigmaPrime) out.push_back({"shape", "W-moiety is not in Σ′"});

  for (ElementId u : p.U)
    for (ElementId w : p.W)
      if (!less(u, w)) out.push_back({"AC1", std::to_string(u) + " is not below " + std::to_string(w)});
  const SSet ws = w_moiety_set(p);
  if (!ws.empty())
    for (ElementId u : p.U)
      if (infos_[u].kind == ElementKind::S || !subset(ws, infos_[u].up_S))
        out.push_back({"AC1", std::to_string(u) + " is not below the S-part of W"});
  if (p.u_moiety) {
    const SSet z = sset_handle(*p.u_moiety);
    for (ElementId w : p.W)
      if (infos_[w].kind == ElementKind::S || !subset(z, infos_[w].down_S))
        out.push_back({"AC1", "the U-moiety is not below " + std::to_string(w)});
    if (!ws.empty()) out.push_back({"AC1", "S is an antichain, so a U-moiety cannot lie below S-points of W"});
  }

  const SSet down = pair_down_S(p);
  if (!down.empty()) {
    if (!down.single_handle() || down.handles[0].kind != MoietyKind::Sigma)
      out.push_back({"AC3", "U⁻ ∩ S is not a moiety in Σ"});
    else if (fingerprints_.count(down.handles[0]) != 0)
      out.push_back({"AC3", "U⁻ ∩ S equals m⁻ ∩ S for an existing m"});
  }
  if (!pair_in_RT_up(p)) {
    const SSet up = pair_up_S(p);
    if (!up.all && !(up.single_handle() && up.handles[0].kind == MoietyKind::SigmaPrime))
      out.push_back({"AC4", "W⁺ ∩ S is neither S nor a moiety in Σ′"});
  }
  return out;
}

ValidTriple StagedUniverse::tau(const AcceptablePair& p) const {
  auto v = acceptability(p);
  if (!v.empty()) throw Error(ErrorCode::NotAcceptable, v.front().clause + ": " + v.front().detail);
  ValidTriple t;
  for (ElementId x = 0; x < size(); ++x) {
    if (in_down(x, p)) t.U.push_back(x);
    else if (in_up(x, p)) t.W.push_back(x);
    else t.V.push_back(x);
  }
  return t;
}

AcceptablePair StagedUniverse::act(std::size_t g, const AcceptablePair& p) const {
  AcceptablePair q = p;
  for (auto& x : q.U) x = gen_[g].at(x);
  for (auto& x : q.W) x = gen_[g].at(x);
  q.U = make_set(q.U);
  q.W = make_set(q.W);
  return q;
}

AcceptablePair StagedUniverse::act_inverse(std::size_t g, const AcceptablePair& p) const {
  AcceptablePair q = p;
  for (auto& x : q.U) x = gen_inv_[g].at(x);
  for (auto& x : q.W) x = gen_inv_[g].at(x);
  q.U = make_set(q.U);
  q.W = make_set(q.W);
  return q;
}

bool StagedUniverse::same_type(const AcceptablePair& a, const AcceptablePair& b) const {
  if (a.u_moiety != b.u_moiety || a.w_moiety != b.w_moiety || a.w_all != b.w_all) return false;
  for (ElementId u : a.U)
    if (!in_down(u, b)) return false;
  for (ElementId u : b.U)
    if (!in_down(u, a)) return false;
  for (ElementId w : a.W)
    if (!in_up(w, b)) return false;
  for (ElementId w : b.W)
    if (!in_up(w, a)) return false;
  return true;
}

bool StagedUniverse::q_consistent(ElementId x) const {
  for (ElementId a : a_elems_) {
    if (a == x) return false;
    const Relation r = order_.rel_at(a, x);
    if (infos_[a].in_Vp ? r != Relation::LT : r != Relation::INC) return false;
  }
  return true;
}

namespace {

bool static_less(const CofinalityAdapter& host, const ElementInfo& a, const ElementInfo& b) {
  using K = ElementKind;
  switch (a.kind) {
    case K::A:
      if (b.kind == K::A) return host.relation(a.index, b.index) == Relation::LT;
      if (b.kind == K::S) return a.in_Vp;
      if (b.kind == K::T)
        return a.in_Vp && (a.index == b.index || host.relation(a.index, b.index) == Relation::LT);
      return false;
    case K::R:
      if (b.kind == K::A) return !b.in_Vp;
      if (b.kind == K::S) return a.index >= b.index;
      return false;
    default:
      return false;
  }
}

}  // namespace

Relation StagedUniverse::static_relation(const ElementInfo& y, ElementId x) const {
  const ElementInfo& xi = infos_[x];
  if (static_less(*host_, y, xi)) return Relation::LT;
  if (static_less(*host_, xi, y)) return Relation::GT;
  return Relation::INC;
}

Relation StagedUniverse::new_vs_existing(const ElementInfo& y, ElementId, const std::vector<Relation>& rel_y,
                                         ElementId x) const {
  const ElementInfo& xi = infos_[x];
  const bool yc = y.kind == ElementKind::Constructed, xc = xi.kind == ElementKind::Constructed;
  if (!yc && !xc) return static_relation(y, x);
  if (!yc) {
    // A late point of M_0 against a constructed one: read x's type.
    const AcceptablePair& p = *xi.pair;
    for (ElementId u : p.U)
      if (rel_y[u] == Relation::LT) return Relation::LT;
    if (p.u_moiety && meets(y.up_S, sset_handle(*p.u_moiety))) return Relation::LT;
    for (ElementId w : p.W)
      if (rel_y[w] == Relation::GT) return Relation::GT;
    if (meets(y.down_S, w_moiety_set(p))) return Relation::GT;
    return Relation::INC;
  }
  const AcceptablePair& p = *y.pair;
  if (xc && xi.stage == y.stage) {
    if (closure_less(*xi.pair, p)) return Relation::GT;
    if (closure_less(p, *xi.pair)) return Relation::LT;
    return Relation::INC;
  }
  if (in_down(x, p)) return Relation::GT;
  if (in_up(x, p)) return Relation::LT;
  return Relation::INC;
}

ElementId StagedUniverse::add_element(ElementInfo info) {
  const ElementId id = order_.size();
  infos_.push_back(std::move(info));
  const ElementInfo& y = infos_.back();
  std::vector<Relation> rel(id, Relation::INC);
  Bitset below(id), above(id);
  for (ElementId x = 0; x < id; ++x) {
    rel[x] = new_vs_existing(y, id, rel, x);
    if (rel[x] == Relation::LT) above.set(x);
    if (rel[x] == Relation::GT) below.set(x);
  }
  order_.append(id, below, above);
  for (std::size_t g = 0; g < gen_.size(); ++g) {
    gen_[g].push_back(id);
    gen_inv_[g].push_back(id);
  }
  return id;
}

std::vector<ElementId> StagedUniverse::materialize_next_A() {
  while (a_by_host_.count(next_host_) != 0) ++next_host_;
  auto orb = adapter_orbit(*host_, next_host_, cfg_.orbit_budget);
  std::sort(orb.begin(), orb.end());
  std::vector<ElementId> added;
  std::vector<std::size_t> hosts;
  for (std::size_t i : orb) {
    if (a_by_host_.count(i) != 0) continue;
    hosts.push_back(i);
    ElementInfo a;
    a.kind = ElementKind::A;
    a.index = i;
    a.in_Vp = host_->in_V(p_, i);
    if (a.in_Vp) a.up_S = sset_all();
    a.in_RT_up = !a.in_Vp;
    a.A0 = {size()};
    if (a.in_Vp) a.C = ElementSet{size()};
    const ElementId id = add_element(std::move(a));
    a_by_host_[i] = id;
    a_elems_.push_back(id);
    added.push_back(id);
    if (infos_[id].in_Vp) {
      ElementInfo t;
      t.kind = ElementKind::T;
      t.index = i;
      t.in_RT_up = true;
      t.A0 = {id};
      t.C = ElementSet{id};
      const ElementId tid = add_element(std::move(t));
      t_by_host_[i] = tid;
      added.push_back(tid);
    }
  }
  for (std::size_t g = 0; g < gen_.size(); ++g)
    for (std::size_t i : hosts) {
      const std::size_t gi = host_->apply(g, i), ii = host_->apply_inverse(g, i);
      gen_[g][a_by_host_.at(i)] = a_by_host_.at(gi);
      gen_inv_[g][a_by_host_.at(i)] = a_by_host_.at(ii);
      if (auto t = t_element(i)) {
        gen_[g][*t] = t_by_host_.at(gi);
        gen_inv_[g][*t] = t_by_host_.at(ii);
      }
    }
  return added;
}

void StagedUniverse::sync_S() {
  const auto& pts = engine_.n1_points();
  while (s_elems_.size() < pts.size()) {
    const std::size_t j = s_elems_.size();
    ElementInfo s;
    s.kind = ElementKind::S;
    s.index = j;
    s.n1 = pts[j];
    s.down_S.points = s.up_S.points = {size()};
    s.in_RT_up = true;
    s_elems_.push_back(size());
    const ElementId sid = add_element(std::move(s));
    s_by_n1_[pts[j]] = sid;

    ElementInfo r;
    r.kind = ElementKind::R;
    r.index = j;
    r.up_S.prefix = j + 1;
    r.in_RT_up = true;
    r.C = ElementSet{};
    r_elems_.push_back(add_element(std::move(r)));
  }
}

ElementId StagedUniverse::materialize_S() {
  engine_.generic_point();
  sync_S();
  return s_elems_.back();
}

void StagedUniverse::run_agenda(std::size_t quota) {
  engine_.run_agenda(quota);
  sync_S();
}

MoietyHandle StagedUniverse::find_Z(SandwichQuery q) {
  for (auto* set : {&q.C, &q.D}) {
    ElementSet n1;
    for (ElementId s : *set) {
      if (s >= size() || infos_[s].kind != ElementKind::S)
        throw Error(ErrorCode::PreconditionViolated, "not an S element: " + std::to_string(s));
      n1.push_back(infos_[s].n1);
    }
    *set = make_set(n1);
  }
  const MoietyHandle h = engine_.find_Z(q);
  sync_S();
  return h;
}

void StagedUniverse::complete_info(ElementInfo& e) const {
  const AcceptablePair& p = *e.pair;
  e.down_S = pair_down_S(p);
  e.up_S = pair_up_S(p);
  e.in_RT_up = pair_in_RT_up(p);
  ElementSet a0;
  for (const ElementSet* part : {&p.U, &p.W})
    for (ElementId n : *part)
      if (infos_[n].kind != ElementKind::S) a0 = set_union(a0, infos_[n].A0);
  e.A0 = a0;
  if (!p.u_moiety) {
    ElementSet c;
    bool ok = true;
    for (ElementId u : p.U) {
      if (!infos_[u].C) ok = false;
      else c = set_union(c, *infos_[u].C);
    }
    if (ok) e.C = c;
  }
}

void StagedUniverse::freeze_stage() {
  stage_ends_.push_back(size());
  if (freeze_hook_) freeze_hook_(*this, last_stage());
}

std::vector<ElementId> StagedUniverse::extend(const AcceptablePair& p) {
  auto v = acceptability(p);
  if (!v.empty()) throw Error(ErrorCode::NotAcceptable, v.front().clause + ": " + v.front().detail);

  std::vector<AcceptablePair> orb{p};
  auto find = [&](const AcceptablePair& q) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < orb.size(); ++k)
      if (same_type(orb[k], q)) return k;
    return std::nullopt;
  };
  for (std::size_t i = 0; i < orb.size(); ++i)
    for (std::size_t g = 0; g < gen_.size(); ++g)
      for (const AcceptablePair& q : {act(g, orb[i]), act_inverse(g, orb[i])})
        if (!find(q)) {
          orb.push_back(q);
          if (orb.size() > cfg_.orbit_budget)
            throw Error(ErrorCode::OrbitBudgetExhausted, "orbit exceeds " + std::to_string(cfg_.orbit_budget));
        }
  std::vector<std::vector<std::size_t>> img(gen_.size(), std::vector<std::size_t>(orb.size()));
  for (std::size_t g = 0; g < gen_.size(); ++g)
    for (std::size_t i = 0; i < orb.size(); ++i) img[g][i] = *find(act(g, orb[i]));

  const auto stage = static_cast<std::uint32_t>(stage_ends_.size());
  std::vector<ElementInfo> fresh;
  for (std::size_t i = 0; i < orb.size(); ++i) {
    ElementInfo e;
    e.kind = ElementKind::Constructed;
    e.index = i;
    e.stage = stage;
    e.pair = orb[i];
    complete_info(e);
    fresh.push_back(std::move(e));
  }
  std::vector<ElementId> ids;
  for (auto& e : fresh) ids.push_back(add_element(std::move(e)));
  for (std::size_t g = 0; g < gen_.size(); ++g)
    for (std::size_t i = 0; i < orb.size(); ++i) {
      gen_[g][ids[i]] = ids[img[g][i]];
      gen_inv_[g][ids[img[g][i]]] = ids[i];
    }
  for (ElementId id : ids)
    if (infos_[id].down_S.single_handle()) fingerprints_.insert(infos_[id].down_S.handles[0]);
  freeze_stage();
  return ids;
}

StagedUniverse build_M0(std::unique_ptr<CofinalityAdapter> host, const FixedLimit& fl, UniverseConfig cfg) {
  if (fl.mode != LimitMode::Upper)
    throw Error(ErrorCode::WrongLimitMode, "M_0 needs an upper limit; reduce through the opposite host first");
  StagedUniverse u(std::move(host), fl.descriptor, cfg);
  // Interleaved so that small creation-order prefixes already mix the sorts.
  while (u.a_elems_.size() < cfg.initial_A || u.s_elems_.size() < cfg.initial_S) {
    if (u.a_elems_.size() < cfg.initial_A) u.materialize_next_A();
    if (u.s_elems_.size() < cfg.initial_S) u.materialize_S();
  }
  u.stage_ends_.push_back(u.size());
  return u;
}

}  // namespace forge
