#include "forge/moiety.hpp"

#include <algorithm>
#include <string>

#include "forge/poset_io.hpp"
#include "forge/type_space.hpp"

namespace forge {

using nlohmann::json;

bool sorts_allow(Sort lower, Sort upper) { return lower == Sort::N0 || upper == Sort::N2; }

bool k_check(const KStructure& k) {
  if (k.chi.size() != k.order.size()) return false;
  if (!k.order.is_strict_order()) return false;
  for (std::size_t i = 0; i < k.order.size(); ++i) {
    bool ok = true;
    for_each_bit(k.order.above_row(i), [&](std::size_t j) {
      if (j < k.chi.size() && !sorts_allow(k.chi[i], k.chi[j])) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

std::string_view to_string(MoietyKind k) { return k == MoietyKind::Sigma ? "sigma" : "sigma_prime"; }

json to_json(const MoietyHandle& h) { return json{{"kind", std::string(to_string(h.kind))}, {"generator", h.generator}}; }

MoietyHandle handle_from_json(const json& j) {
  try {
    MoietyHandle h;
    const std::string k = j.at("kind").get<std::string>();
    if (k == "sigma") h.kind = MoietyKind::Sigma;
    else if (k == "sigma_prime") h.kind = MoietyKind::SigmaPrime;
    else throw Error(ErrorCode::CorruptArtifact, "handle kind " + k);
    h.generator = j.at("generator").get<ElementId>();
    return h;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptArtifact, std::string("handle: ") + e.what());
  }
}

MoietyEngine::MoietyEngine(std::uint64_t seed) : rng_(seed) {}

ElementSet MoietyEngine::sort_members(Sort s) const {
  ElementSet out;
  for (std::size_t i = 0; i < k_.chi.size(); ++i)
    if (k_.chi[i] == s) out.push_back(k_.order.id_at(i));
  return out;
}

ElementId MoietyEngine::grow_N(Sort sort, const ElementSet& below, const ElementSet& above) {
  const ElementSet lo = down_closure(k_.order, below);
  const ElementSet hi = up_closure(k_.order, above);
  const std::size_t n = k_.order.size();
  Bitset b(n), a(n);
  for (ElementId x : lo) b.set(idx(x));
  for (ElementId y : hi) a.set(idx(y));
  if (b.intersects(a)) throw Error(ErrorCode::InconsistentWithK, "new point would lie above and below one element");
  for (ElementId x : lo) {
    const Bitset& up = k_.order.above_row(idx(x));
    if (!a.is_subset_of(up))
      throw Error(ErrorCode::InconsistentWithK, "element " + std::to_string(x) + " is not below the whole up-set");
    if (!sorts_allow(sort_of(x), sort))
      throw Error(ErrorCode::InconsistentWithK, "sort of " + std::to_string(x) + " cannot lie below the new point");
  }
  for (ElementId y : hi)
    if (!sorts_allow(sort, sort_of(y)))
      throw Error(ErrorCode::InconsistentWithK, "sort of " + std::to_string(y) + " cannot lie above the new point");
  const ElementId id = next_id_++;
  k_.order.append(id, b, a);
  k_.chi.push_back(sort);
  if (sort == Sort::N1) {
    n1_.push_back(id);
    n1_mask_.resize(k_.order.size());
    n1_mask_.set(n);
  } else {
    n1_mask_.resize(k_.order.size());
  }
  return id;
}

ElementId MoietyEngine::grow_N(Sort sort, const ValidTriple& t) {
  if (!is_valid_triple(k_.order, t)) throw Error(ErrorCode::InconsistentWithK, "triple is not valid over N");
  return grow_N(sort, t.U, t.W);
}

ElementId MoietyEngine::new_point(const ElementSet& below, const ElementSet& above) {
  return grow_N(Sort::N1, below, above);
}

ElementId MoietyEngine::random_point(const ElementSet& req_above, const ElementSet& forbid_above,
                                     const ElementSet& req_below, const ElementSet& forbid_below) {
  const ElementSet lo_req = down_closure(k_.order, req_below);
  ElementSet hi = up_closure(k_.order, req_above);
  const ElementSet no_hi = down_closure(k_.order, forbid_above);
  const ElementSet no_lo = up_closure(k_.order, forbid_below);
  if (!set_intersection(hi, forbid_above).empty() || !set_intersection(lo_req, forbid_below).empty())
    throw Error(ErrorCode::Internal, "random point requirements clash");

  auto coin = [&] { return rng_() % 3 == 0; };
  for (ElementId x : sort_members(Sort::N2)) {
    if (set_contains(hi, x) || set_contains(no_hi, x) || !coin()) continue;
    bool above_all = true;
    for (ElementId l : lo_req)
      if (!k_.order.less_at(idx(l), idx(x))) above_all = false;
    if (above_all) hi = set_union(hi, up_closure(k_.order, {x}));
  }
  ElementSet lo = lo_req;
  for (ElementId x : sort_members(Sort::N0)) {
    if (set_contains(lo, x) || set_contains(no_lo, x) || !coin()) continue;
    bool below_all = true;
    for (ElementId h : hi)
      if (!k_.order.less_at(idx(x), idx(h))) below_all = false;
    if (below_all) lo = set_union(lo, down_closure(k_.order, {x}));
  }
  return new_point(lo, hi);
}

ElementId MoietyEngine::generic_point() { return random_point({}, {}, {}, {}); }

Bitset MoietyEngine::members(const MoietyHandle& h) const {
  const std::size_t g = idx(h.generator);
  Bitset z = h.kind == MoietyKind::Sigma ? k_.order.below_row(g) : k_.order.above_row(g);
  z &= n1_mask_;
  return z;
}

bool MoietyEngine::member(const MoietyHandle& h, ElementId s) const {
  if (sort_of(s) != Sort::N1) throw Error(ErrorCode::UnknownElement, "not an N1 point: " + std::to_string(s));
  return h.kind == MoietyKind::Sigma ? k_.order.less_at(idx(s), idx(h.generator))
                                     : k_.order.less_at(idx(h.generator), idx(s));
}

bool MoietyEngine::contains(const MoietyHandle& big, const MoietyHandle& small) const {
  if (big.kind != small.kind) throw Error(ErrorCode::Internal, "containment across handle kinds");
  const std::size_t b = idx(big.generator), s = idx(small.generator);
  return big.kind == MoietyKind::Sigma ? k_.order.leq_at(s, b) : k_.order.leq_at(b, s);
}

bool MoietyEngine::intersects(const MoietyHandle& a, const MoietyHandle& b) const {
  if (a.kind == b.kind) throw Error(ErrorCode::Internal, "intersection test needs one handle of each kind");
  const MoietyHandle& sp = a.kind == MoietyKind::SigmaPrime ? a : b;
  const MoietyHandle& sg = a.kind == MoietyKind::Sigma ? a : b;
  return k_.order.less_at(idx(sp.generator), idx(sg.generator));
}

void MoietyEngine::require_kind(const MoietyHandle& h, MoietyKind k, const char* what) const {
  if (h.kind != k) throw Error(ErrorCode::PreconditionViolated, std::string(what) + " handle has the wrong kind");
  if (!k_.order.contains(h.generator) || handle_index_.count(h) == 0)
    throw Error(ErrorCode::UnknownElement, std::string(what) + " handle is not registered");
}

void MoietyEngine::check_preconditions(const SandwichQuery& q) const {
  for (const auto& u : q.U) require_kind(u, q.kind, "U");
  for (const auto& w : q.W) require_kind(w, q.kind, "W");
  for (const auto& v : q.V) require_kind(v, other(q.kind), "V");
  for (ElementId s : q.C)
    if (!k_.order.contains(s) || sort_of(s) != Sort::N1) throw Error(ErrorCode::UnknownElement, "C point");
  for (ElementId s : q.D)
    if (!k_.order.contains(s) || sort_of(s) != Sort::N1) throw Error(ErrorCode::UnknownElement, "D point");
  auto fail = [](const std::string& m) { throw Error(ErrorCode::PreconditionViolated, m); };

  // Order-level clauses; they decide the statement for all of N1, not only
  // the points materialized so far.
  for (const auto& u : q.U)
    for (const auto& w : q.W)
      if (!contains(w, u)) fail("U-handle not inside W-handle");
  for (ElementId c : q.C)
    for (const auto& w : q.W)
      if (!member(w, c)) fail("C point outside a W-handle");
  for (ElementId c : q.C) {
    if (set_contains(q.D, c)) fail("C meets D");
    for (const auto& v : q.V)
      if (member(v, c)) fail("C meets a V-handle");
  }
  for (const auto& u : q.U) {
    for (ElementId d : q.D)
      if (member(u, d)) fail("U-handle meets D");
    for (const auto& v : q.V)
      if (intersects(u, v)) fail("U-handle meets a V-handle");
  }
}

MoietyHandle MoietyEngine::find_Z(const SandwichQuery& q) {
  check_preconditions(q);
  for (const auto& u : q.U)
    for (const auto& w : q.W)
      if (u == w) {
        if (std::find(q.avoid.begin(), q.avoid.end(), u) != q.avoid.end())
          throw Error(ErrorCode::ForcedZConflictsAvoid, "the only admissible moiety is excluded");
        return u;
      }

  ElementSet ugens, wgens;
  for (const auto& u : q.U) ugens.push_back(u.generator);
  for (const auto& w : q.W) wgens.push_back(w.generator);
  ugens = make_set(ugens);
  wgens = make_set(wgens);

  MoietyHandle h;
  h.kind = q.kind;
  HandleRecord rec;
  if (q.kind == MoietyKind::Sigma) {
    h.generator = grow_N(Sort::N2, set_union(ugens, q.C), wgens);
    rec.in_point = new_point({}, {h.generator});
    rec.out_point = random_point({}, {h.generator}, {}, {});
  } else {
    h.generator = grow_N(Sort::N0, wgens, set_union(q.C, ugens));
    rec.in_point = new_point({h.generator}, {});
    rec.out_point = random_point({}, {}, {}, {h.generator});
  }
  rec.handle = h;
  // The closures must not have dragged in a forbidden element.
  for (ElementId d : q.D)
    if (member(h, d)) throw Error(ErrorCode::Internal, "new moiety contains a D point");
  for (const auto& v : q.V)
    if (intersects(h, v)) throw Error(ErrorCode::Internal, "new moiety meets a V-handle");

  handle_index_.emplace(h, handles_.size());
  handles_.push_back(rec);
  certify_against_existing(h);
  witness_intersections(h.generator);
  return h;
}

void MoietyEngine::certify_against_existing(const MoietyHandle& h) {
  for (std::size_t k = 0; k + 1 < handles_.size(); ++k) {
    const MoietyHandle o = handles_[k].handle;
    if (o.kind != h.kind) continue;
    Bitset d = members(h);
    d.and_not(members(o));
    std::size_t p = d.find_first();
    if (p >= d.size()) {
      d = members(o);
      d.and_not(members(h));
      p = d.find_first();
    }
    ElementId point;
    if (p < d.size()) {
      point = k_.order.id_at(p);
    } else {
      // Mint the in-point of whichever handle is not inside the other.
      const MoietyHandle& top = contains(o, h) ? o : h;
      point = top.kind == MoietyKind::Sigma ? new_point({}, {top.generator}) : new_point({top.generator}, {});
    }
    const auto key = std::minmax(h, o);
    cert_index_.emplace(std::pair{key.first, key.second}, certs_.size());
    certs_.push_back({h, o, point});
  }
}

void MoietyEngine::witness_intersections(ElementId gen) {
  const std::size_t g = idx(gen);
  auto ensure = [&](std::size_t lo, std::size_t hi) {
    Bitset between = k_.order.above_row(lo);
    between &= k_.order.below_row(hi);
    between &= n1_mask_;
    if (between.none()) new_point({k_.order.id_at(lo)}, {k_.order.id_at(hi)});
  };
  if (sort_of(gen) == Sort::N2) {
    for (std::size_t i : k_.order.below_row(g).indices())
      if (k_.chi[i] == Sort::N0 && handle_index_.count({MoietyKind::SigmaPrime, k_.order.id_at(i)}) != 0)
        ensure(i, g);
  } else {
    for (std::size_t i : k_.order.above_row(g).indices())
      if (k_.chi[i] == Sort::N2 && handle_index_.count({MoietyKind::Sigma, k_.order.id_at(i)}) != 0)
        ensure(g, i);
  }
}

void MoietyEngine::run_agenda(std::size_t quota) {
  if (handles_.empty()) return;
  const std::size_t steps = std::min(quota, handles_.size());
  for (std::size_t k = 0; k < steps; ++k) {
    HandleRecord& r = handles_[agenda_cursor_ % handles_.size()];
    const MoietyHandle h = r.handle;
    ++agenda_cursor_;
    if (h.kind == MoietyKind::Sigma) {
      random_point({h.generator}, {}, {}, {});
      random_point({}, {h.generator}, {}, {});
    } else {
      random_point({}, {}, {h.generator}, {});
      random_point({}, {}, {}, {h.generator});
    }
    ++r.agenda_in;
    ++r.agenda_out;
  }
}

const HandleRecord& MoietyEngine::record(const MoietyHandle& h) const {
  auto it = handle_index_.find(h);
  if (it == handle_index_.end()) throw Error(ErrorCode::UnknownElement, "unregistered handle");
  return handles_[it->second];
}

std::optional<ElementId> MoietyEngine::separating_point(const MoietyHandle& a, const MoietyHandle& b) const {
  const auto key = std::minmax(a, b);
  auto it = cert_index_.find(std::pair{key.first, key.second});
  if (it == cert_index_.end()) return std::nullopt;
  return certs_[it->second].point;
}

json k_to_json(const KStructure& k) {
  json j = poset_to_json(k.order);
  json chi = json::object();
  for (std::size_t i = 0; i < k.chi.size(); ++i) chi[std::to_string(k.order.id_at(i))] = static_cast<int>(k.chi[i]);
  j["chi"] = chi;
  return j;
}

KStructure k_from_json(const json& j) {
  KStructure k;
  k.order = poset_from_json(j);
  try {
    const json& chi = j.at("chi");
    for (ElementId id : k.order.elements()) {
      const int s = chi.at(std::to_string(id)).get<int>();
      if (s < 0 || s > 2) throw Error(ErrorCode::CorruptArtifact, "sort label out of range");
      k.chi.push_back(static_cast<Sort>(s));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptArtifact, std::string("chi map: ") + e.what());
  }
  return k;
}

json MoietyEngine::dump() const {
  json j = k_to_json(k_);
  json hs = json::array();
  for (const auto& r : handles_)
    hs.push_back({{"handle", to_json(r.handle)},
                  {"in_point", r.in_point},
                  {"out_point", r.out_point},
                  {"agenda_in", r.agenda_in},
                  {"agenda_out", r.agenda_out}});
  j["handles"] = hs;
  json cs = json::array();
  for (const auto& c : certs_) cs.push_back({{"a", to_json(c.a)}, {"b", to_json(c.b)}, {"point", c.point}});
  j["certificates"] = cs;
  return j;
}

}  // namespace forge
