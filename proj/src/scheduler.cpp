#include "forge/scheduler.hpp"

#include <deque>

namespace forge {

std::string_view to_string(TaskStatus s) { return s == TaskStatus::Done ? "DONE" : "PENDING"; }

bool valid_over_support(const StagedUniverse& u, const ValidTriple& t) {
  const ElementSet dom = t.domain();
  if (dom.size() != t.U.size() + t.V.size() + t.W.size()) return false;
  for (ElementId x : dom)
    if (x >= u.size()) return false;
  for (ElementId a : t.U)
    for (ElementId x : dom)
      if (u.less(x, a) && !set_contains(t.U, x)) return false;
  for (ElementId w : t.W)
    for (ElementId x : dom)
      if (u.less(w, x) && !set_contains(t.W, x)) return false;
  for (ElementId a : t.U)
    for (ElementId w : t.W)
      if (!u.less(a, w)) return false;
  return true;
}

bool realizes(const StagedUniverse& u, ElementId m, const ValidTriple& t) {
  for (ElementId x : t.U)
    if (x == m || !u.less(x, m)) return false;
  for (ElementId x : t.W)
    if (x == m || !u.less(m, x)) return false;
  for (ElementId x : t.V)
    if (x == m || u.compare(x, m) != Relation::INC) return false;
  return true;
}

std::optional<ElementId> find_witness(const StagedUniverse& u, const ValidTriple& t) {
  const std::size_t n = u.stage_end(u.last_stage());
  Bitset c(n);
  for (std::size_t i = 0; i < n; ++i) c.set(i);
  const FinitePoset& o = u.order();
  for (ElementId x : t.U) c &= o.above_row(x);
  for (ElementId x : t.W) c &= o.below_row(x);
  for (ElementId x : t.V) {
    c.and_not(o.above_row(x));
    c.and_not(o.below_row(x));
    if (x < n) c.reset(x);
  }
  const std::size_t i = c.find_first();
  if (i >= n) return std::nullopt;
  return i;
}

namespace {

ElementSet prefix_points(const StagedUniverse& u, std::uint64_t prefix) {
  ElementSet out;
  for (std::uint64_t j = 0; j < prefix; ++j) out.push_back(u.s_elements().at(j));
  return out;
}

bool below_meets_S(const StagedUniverse& u, const ElementSet& U0) {
  for (ElementId x : U0)
    if (!u.info(x).down_S.empty()) return true;
  return false;
}

std::vector<MoietyHandle> avoid_list(const StagedUniverse& u) {
  return {u.fingerprints().begin(), u.fingerprints().end()};
}

const MoietyHandle& sole_handle(const SSet& s, MoietyKind kind, const char* what) {
  if (!s.single_handle() || s.handles[0].kind != kind) throw Error(ErrorCode::Internal, what);
  return s.handles[0];
}

}  // namespace

AcceptablePair enough_aps(StagedUniverse& u, const ValidTriple& t) {
  if (!valid_over_support(u, t)) throw Error(ErrorCode::NotAValidTriple, "triple is not valid over its support");
  SandwichQuery q;
  q.avoid = avoid_list(u);

  if (below_meets_S(u, t.U)) {
    q.kind = MoietyKind::Sigma;
    for (ElementId x : t.U) {
      const ElementInfo& e = u.info(x);
      if (e.kind == ElementKind::S) q.C.push_back(x);
      else if (!e.down_S.empty()) q.U.push_back(sole_handle(e.down_S, MoietyKind::Sigma, "U-element below-set"));
    }
    for (ElementId x : t.V) {
      const SSet& up = u.info(x).up_S;
      if (up.all) throw Error(ErrorCode::NotAValidTriple, "V-element below all of S");
      for (const auto& h : up.handles) q.V.push_back(h);
      q.D = set_union(q.D, set_union(up.points, prefix_points(u, up.prefix)));
    }
    for (ElementId x : t.W) q.W.push_back(sole_handle(u.info(x).down_S, MoietyKind::Sigma, "W-element below-set"));
    q.C = make_set(q.C);
    const MoietyHandle z = u.find_Z(q);
    return {t.U, t.W, z, std::nullopt, false};
  }

  for (ElementId x : t.U)
    if (u.info(x).in_RT_up) return {t.U, t.W, std::nullopt, std::nullopt, false};
  if (u.pair_up_S({{}, t.W, std::nullopt, std::nullopt, false}).all) return {t.U, t.W, std::nullopt, std::nullopt, false};

  // Mirror image: the new point's S-part above is a fresh Σ′ moiety.
  q.kind = MoietyKind::SigmaPrime;
  for (ElementId x : t.U) {
    const SSet& up = u.info(x).up_S;
    if (!up.all) q.W.push_back(sole_handle(up, MoietyKind::SigmaPrime, "U-element above-set"));
  }
  for (ElementId x : t.V) {
    const ElementInfo& e = u.info(x);
    if (e.kind == ElementKind::S) q.D.push_back(x);
    else if (!e.down_S.empty()) q.V.push_back(sole_handle(e.down_S, MoietyKind::Sigma, "V-element below-set"));
  }
  for (ElementId x : t.W) {
    const SSet& up = u.info(x).up_S;
    for (const auto& h : up.handles) q.U.push_back(h);
    q.C = set_union(q.C, set_union(up.points, prefix_points(u, up.prefix)));
  }
  q.D = make_set(q.D);
  const MoietyHandle z = u.find_Z(q);
  return {t.U, t.W, std::nullopt, z, false};
}

namespace {

ElementSet a0_of(const StagedUniverse& u, const ValidTriple& t) {
  ElementSet a0;
  for (const ElementSet* part : {&t.U, &t.W})
    for (ElementId x : *part)
      if (u.info(x).kind != ElementKind::S) a0 = set_union(a0, u.info(x).A0);
  return a0;
}

}  // namespace

Aps2Result enough_aps2(StagedUniverse& u, const ValidTriple& t) {
  if (!valid_over_support(u, t)) throw Error(ErrorCode::NotAValidTriple, "triple is not valid over its support");
  if (!below_meets_S(u, t.U)) throw Error(ErrorCode::PreconditionViolated, "U0 has no S-point below it");
  Aps2Result out;
  out.A0 = a0_of(u, t);
  const ElementId s0 = u.s_elements().at(0);

  auto step = [&](const ValidTriple& tri, std::string lemma, ElementSet fixed, std::string label) {
    const AcceptablePair p = enough_aps(u, tri);
    std::vector<ElementId> ids = u.extend(p);
    StageRecord st;
    st.stage = u.last_stage();
    st.route = "(a)";
    st.lemma = std::move(lemma);
    st.pair = p;
    st.orbit = ids;
    out.stages.push_back(st);
    out.claims.push_back({st.stage, ids.front(), std::move(fixed), std::move(label)});
    out.e.push_back(ids.front());
    return ids.front();
  };

  for (std::size_t i = 0; i < out.A0.size(); ++i) {
    const ElementId a = out.A0[i];
    const ElementInfo& ai = u.info(a);
    ElementId tp = a;
    if (ai.in_Vp) {
      auto te = u.t_element(ai.index);
      if (!te) throw Error(ErrorCode::Internal, "t_a not materialized");
      tp = *te;
    }
    step({make_set({tp, s0}), {}, {}}, "enough_aps2[" + std::to_string(i) + "]", {a}, "G_e = G_a");
  }
  ElementSet up = t.U;
  for (ElementId e : out.e) up.push_back(e);
  const ElementId ed =
      step({make_set(up), {}, {}}, "enough_aps2[" + std::to_string(out.A0.size()) + "]", out.A0, "G_e = G_A0");
  ValidTriple last{t.U, t.V, make_set(set_union(t.W, {ed}))};
  const ElementId w =
      step(last, "enough_aps2[" + std::to_string(out.A0.size() + 1) + "]", out.A0, "G_e = G_A0");
  if (!realizes(u, w, t)) throw Error(ErrorCode::Internal, "enough_aps2 witness does not realize the triple");
  return out;
}

std::optional<ValidTriple> TripleStream::next(const StagedUniverse& u, std::size_t horizon) {
  if (!started_) {
    started_ = true;
    return ValidTriple{};
  }
  for (;;) {
    if (!have_support_) {
      if (m_ >= horizon) return std::nullopt;
      rest_.clear();
      code_ = 0;
      have_support_ = true;
    }
    ElementSet support = rest_;
    support.push_back(m_);
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < support.size(); ++k) total *= 3;
    while (code_ < total) {
      std::uint64_t c = code_++;
      ValidTriple t;
      for (ElementId x : support) {
        (c % 3 == 0 ? t.U : c % 3 == 1 ? t.V : t.W).push_back(x);
        c /= 3;
      }
      if (valid_over_support(u, t)) return t;
    }
    if (!advance_support(horizon)) return std::nullopt;
  }
}

// Next subset of [0, m) in (size, lexicographic) order, then the next m.
bool TripleStream::advance_support(std::size_t horizon) {
  code_ = 0;
  const std::size_t k = rest_.size();
  for (std::size_t i = k; i-- > 0;) {
    if (rest_[i] + (k - i) < m_) {
      ++rest_[i];
      for (std::size_t j = i + 1; j < k; ++j) rest_[j] = rest_[j - 1] + 1;
      return true;
    }
  }
  if (k + 1 < bound_ && k + 1 <= m_) {
    rest_.resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) rest_[j] = j;
    return true;
  }
  ++m_;
  have_support_ = false;
  return m_ < horizon;
}

namespace {

struct CTask {
  AcceptablePair pair;
  ElementId source;
};

class Runner {
 public:
  Runner(RunResult& r, const SchedulerConfig& cfg) : r_(r), u_(r.universe), cfg_(cfg), stream_(cfg.support_bound) {}

  void run() {
    try {
      loop();
    } catch (const Error& e) {
      // A tick met a host orbit over budget; nothing was added.
      if (e.code() != ErrorCode::OrbitBudgetExhausted) throw;
      orbit_exhausted_ = true;
    }
    finish();
  }

 private:
  void loop() {
    bool prefer_a = true;
    for (;;) {
      if (r_.tasks.size() >= cfg_.task_cap) break;
      const bool c_ready = !cqueue_.empty();
      if (prefer_a || !c_ready) {
        auto t = stream_.next(u_, horizon());
        if (t) {
          if (!take_a(*t)) break;
          prefer_a = !c_ready;
          continue;
        }
        if (!c_ready) {
          if (stages_used_ >= cfg_.stage_budget) break;
          tick();
          u_.freeze_open_stage();
          StageRecord st;
          st.stage = u_.last_stage();
          st.route = "materialization";
          st.lemma = "tick";
          r_.stages.push_back(st);
          ++stages_used_;
          continue;
        }
      }
      if (!take_c()) break;
      prefer_a = true;
    }
  }

  void finish() {
    for (const CTask& c : cqueue_) {
      TaskRecord rec;
      rec.index = r_.tasks.size();
      rec.source = "(c)";
      rec.pair = c.pair;
      rec.route = "acceptable_pair";
      rec.over_stage = u_.last_stage();
      rec.cost = 1;
      rec.note = "queued behind the budget";
      r_.tasks.push_back(rec);
    }
    r_.horizon = stream_.completed_below();
    for (const TaskRecord& t : r_.tasks)
      if (t.status == TaskStatus::Pending && t.cost > cfg_.stage_budget) r_.budget_exhausted = true;
    if (orbit_exhausted_) r_.budget_exhausted = true;
  }

  std::size_t horizon() const { return u_.stage_end(u_.last_stage()); }

  void tick() {
    u_.materialize_next_A();
    u_.materialize_S();
    u_.run_agenda(cfg_.agenda_quota);
  }

  void after_stage(const std::vector<ElementId>& ids) {
    for (ElementId m : ids) {
      const ElementInfo& e = u_.info(m);
      if (e.down_S.empty() && e.up_S.empty() && u_.q_consistent(m)) {
        AcceptablePair p = *e.pair;
        p.W = set_union(p.W, {m});
        cqueue_.push_back({p, m});
      }
    }
  }

  bool take_a(const ValidTriple& t) {
    TaskRecord rec;
    rec.index = r_.tasks.size();
    rec.source = "(a)";
    rec.triple = t;
    rec.over_stage = u_.last_stage();
    if (auto w = find_witness(u_, t)) {
      rec.status = TaskStatus::Done;
      rec.route = "free";
      rec.witness = *w;
      r_.tasks.push_back(rec);
      return true;
    }
    const bool two = below_meets_S(u_, t.U);
    rec.route = two ? "enough_aps2" : "enough_aps";
    rec.cost = two ? static_cast<std::uint32_t>(a0_of(u_, t).size() + 2) : 1;
    if (stages_used_ + rec.cost > cfg_.stage_budget) {
      rec.note = "needs " + std::to_string(rec.cost) + " stages, " +
                 std::to_string(cfg_.stage_budget - stages_used_) + " left";
      r_.tasks.push_back(rec);
      return false;
    }
    try {
      if (two) {
        Aps2Result res = enough_aps2(u_, t);
        for (auto& st : res.stages) {
          st.task = rec.index;
          after_stage(st.orbit);
          r_.stages.push_back(st);
        }
        for (auto& c : res.claims) r_.star_claims.push_back(c);
        rec.witness = res.e.back();
        rec.pair = res.stages.back().pair;
      } else {
        const AcceptablePair p = enough_aps(u_, t);
        const std::vector<ElementId> ids = u_.extend(p);
        r_.stages.push_back({u_.last_stage(), "(a)", "enough_aps", rec.index, p, ids});
        after_stage(ids);
        rec.witness = ids.front();
        rec.pair = p;
        if (!realizes(u_, ids.front(), t)) throw Error(ErrorCode::Internal, "enough_aps witness does not realize");
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OrbitBudgetExhausted) throw;
      orbit_exhausted_ = true;
      rec.note = e.what();
      r_.tasks.push_back(rec);
      return false;
    }
    stages_used_ += rec.cost;
    rec.status = TaskStatus::Done;
    r_.tasks.push_back(rec);
    tick();
    return true;
  }

  bool take_c() {
    const CTask c = cqueue_.front();
    TaskRecord rec;
    rec.index = r_.tasks.size();
    rec.source = "(c)";
    rec.pair = c.pair;
    rec.triple = {c.pair.U, {}, c.pair.W};
    rec.route = "acceptable_pair";
    rec.over_stage = u_.last_stage();
    rec.cost = 1;
    if (stages_used_ + 1 > cfg_.stage_budget) return false;
    cqueue_.pop_front();
    try {
      const std::vector<ElementId> ids = u_.extend(c.pair);
      r_.stages.push_back({u_.last_stage(), "(c)", "acceptable_pair", rec.index, c.pair, ids});
      after_stage(ids);
      rec.witness = ids.front();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OrbitBudgetExhausted) throw;
      orbit_exhausted_ = true;
      rec.note = e.what();
      r_.tasks.push_back(rec);
      return false;
    }
    ++stages_used_;
    rec.status = TaskStatus::Done;
    r_.tasks.push_back(rec);
    tick();
    return true;
  }

  RunResult& r_;
  StagedUniverse& u_;
  const SchedulerConfig& cfg_;
  TripleStream stream_;
  std::deque<CTask> cqueue_;
  std::uint32_t stages_used_ = 0;
  bool orbit_exhausted_ = false;
};

}  // namespace

RunResult run_scheduler(std::unique_ptr<CofinalityAdapter> host, const SchedulerConfig& cfg, FreezeHook hook) {
  if (cfg.support_bound == 0) throw Error(ErrorCode::BadConfig, "support bound must be positive");
  FixedLimit fl = fixed_limit(*host);
  bool reduced = false;
  if (fl.mode == LimitMode::NeedsOpReduction) {
    ReducedHost rh = reduce_to_upper(*host, fl);
    host = std::move(rh.adapter);
    fl = {rh.descriptor, LimitMode::Upper};
    reduced = true;
  }
  UniverseConfig ucfg;
  ucfg.seed = cfg.seed;
  ucfg.orbit_budget = cfg.orbit_budget;
  RunResult r{build_M0(std::move(host), fl, ucfg), {}, {}, {}, reduced, 0, false};
  if (hook) {
    hook(r.universe, 0);
    r.universe.set_freeze_hook(std::move(hook));
  }
  Runner(r, cfg).run();
  return r;
}

nlohmann::json to_json(const TaskRecord& t) {
  nlohmann::json j = {{"index", t.index},
                      {"source", t.source},
                      {"triple", to_json(t.triple)},
                      {"status", std::string(to_string(t.status))},
                      {"route", t.route},
                      {"over_stage", t.over_stage},
                      {"cost", t.cost}};
  j["pair"] = t.pair ? to_json(*t.pair) : nlohmann::json(nullptr);
  j["witness"] = t.witness ? nlohmann::json(*t.witness) : nlohmann::json(nullptr);
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

TaskRecord task_from_json(const nlohmann::json& j) {
  TaskRecord t;
  t.index = j.at("index").get<std::uint64_t>();
  t.source = j.at("source").get<std::string>();
  t.triple = triple_from_json(j.at("triple"));
  const auto status = j.at("status").get<std::string>();
  if (status != "DONE" && status != "PENDING") throw Error(ErrorCode::CorruptArtifact, "task status " + status);
  t.status = status == "DONE" ? TaskStatus::Done : TaskStatus::Pending;
  t.route = j.at("route").get<std::string>();
  t.over_stage = j.at("over_stage").get<std::uint32_t>();
  t.cost = j.at("cost").get<std::uint32_t>();
  if (!j.at("pair").is_null()) t.pair = pair_from_json(j.at("pair"));
  if (!j.at("witness").is_null()) t.witness = j.at("witness").get<ElementId>();
  if (j.contains("note")) t.note = j.at("note").get<std::string>();
  return t;
}

nlohmann::json to_json(const StageRecord& s) {
  return {{"stage", s.stage}, {"route", s.route},     {"lemma", s.lemma},
          {"task", s.task},   {"pair", to_json(s.pair)}, {"orbit", s.orbit}};
}

StageRecord stage_from_json(const nlohmann::json& j) {
  StageRecord s;
  s.stage = j.at("stage").get<std::uint32_t>();
  s.route = j.at("route").get<std::string>();
  s.lemma = j.at("lemma").get<std::string>();
  s.task = j.at("task").get<std::uint64_t>();
  s.pair = pair_from_json(j.at("pair"));
  s.orbit = j.at("orbit").get<std::vector<ElementId>>();
  return s;
}

nlohmann::json to_json(const StarClaim& c) {
  return {{"stage", c.stage}, {"point", c.point}, {"fixed", c.fixed}, {"label", c.label}};
}

StarClaim claim_from_json(const nlohmann::json& j) {
  return {j.at("stage").get<std::uint32_t>(), j.at("point").get<ElementId>(),
          j.at("fixed").get<ElementSet>(), j.at("label").get<std::string>()};
}

}  // namespace forge
