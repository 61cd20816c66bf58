#include "forge/artifact.hpp"

#include <fstream>
#include <sstream>

#include "forge/poset_io.hpp"

namespace forge {

using json = nlohmann::json;

namespace {

ElementKind kind_from_string(const std::string& s) {
  for (ElementKind k : {ElementKind::A, ElementKind::R, ElementKind::S, ElementKind::T, ElementKind::Constructed})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::CorruptArtifact, "unknown element kind " + s);
}

json to_json(const ElementRecord& e) {
  json j = {{"kind", std::string(to_string(e.kind))}, {"index", e.index}, {"stage", e.stage}, {"A0", e.A0}};
  j["pair"] = e.pair ? forge::to_json(*e.pair) : json(nullptr);
  j["C"] = e.C ? json(*e.C) : json(nullptr);
  j["n1"] = e.n1 ? json(*e.n1) : json(nullptr);
  return j;
}

ElementRecord element_from_json(const json& j) {
  ElementRecord e;
  e.kind = kind_from_string(j.at("kind").get<std::string>());
  e.index = j.at("index").get<std::uint64_t>();
  e.stage = j.at("stage").get<std::uint32_t>();
  e.A0 = j.at("A0").get<ElementSet>();
  if (!j.at("pair").is_null()) e.pair = pair_from_json(j.at("pair"));
  if (!j.at("C").is_null()) e.C = j.at("C").get<ElementSet>();
  if (!j.at("n1").is_null()) e.n1 = j.at("n1").get<ElementId>();
  return e;
}

}  // namespace

json to_json(const SchedulerConfig& c) {
  return {{"stage_budget", c.stage_budget}, {"orbit_budget", c.orbit_budget}, {"support_bound", c.support_bound},
          {"agenda_quota", c.agenda_quota}, {"seed", c.seed},                 {"task_cap", c.task_cap}};
}

SchedulerConfig config_from_json(const json& j) {
  SchedulerConfig c;
  c.stage_budget = j.at("stage_budget").get<std::uint32_t>();
  c.orbit_budget = j.at("orbit_budget").get<std::size_t>();
  c.support_bound = j.at("support_bound").get<std::size_t>();
  c.agenda_quota = j.at("agenda_quota").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.task_cap = j.at("task_cap").get<std::uint64_t>();
  return c;
}

Snapshot snapshot(const RunResult& r, const std::string& adapter, const SchedulerConfig& cfg) {
  const StagedUniverse& u = r.universe;
  Snapshot s;
  s.adapter = adapter;
  s.reduced = r.reduced;
  s.descriptor = u.descriptor();
  s.config = cfg;
  for (const ElementInfo& e : u.infos()) {
    ElementRecord rec{e.kind, e.index, e.stage, e.pair, e.A0, e.C, std::nullopt};
    if (e.kind == ElementKind::S) rec.n1 = e.n1;
    s.elements.push_back(std::move(rec));
  }
  s.order = u.order();
  s.generators = u.generator_images();
  s.stage_ends = u.stage_ends();
  s.N = u.engine().structure();
  s.handles = u.engine().handles();
  s.certificates = u.engine().certificates();
  s.tasks = r.tasks;
  s.stages = r.stages;
  s.star_claims = r.star_claims;
  s.horizon = r.horizon;
  s.budget_exhausted = r.budget_exhausted;
  // Elements materialized after the last freeze are not part of any stage.
  if (s.stage_ends.back() != s.size()) {
    Snapshot t = truncate(s, s.last_stage());
    t.budget_exhausted = s.budget_exhausted;
    return t;
  }
  return s;
}

Snapshot truncate(const Snapshot& s, std::uint32_t k) {
  if (k > s.last_stage()) throw Error(ErrorCode::StageOutOfRange, "stage " + std::to_string(k));
  const std::size_t n = s.stage_ends[k];
  Snapshot t;
  t.adapter = s.adapter;
  t.reduced = s.reduced;
  t.descriptor = s.descriptor;
  t.config = s.config;
  t.elements.assign(s.elements.begin(), s.elements.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<ElementId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = i;
  t.order = s.order.restrict_to(ids);
  for (const auto& g : s.generators) t.generators.emplace_back(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n));
  t.stage_ends.assign(s.stage_ends.begin(), s.stage_ends.begin() + k + 1);
  t.N = s.N;
  t.handles = s.handles;
  t.certificates = s.certificates;
  for (const auto& st : s.stages)
    if (st.stage <= k) t.stages.push_back(st);
  for (const auto& c : s.star_claims)
    if (c.stage <= k) t.star_claims.push_back(c);
  for (TaskRecord task : s.tasks) {
    if (task.over_stage > k) continue;
    if (task.witness && *task.witness >= n) {
      task.status = TaskStatus::Pending;
      task.witness.reset();
      task.note = "witness lies past the truncation";
    }
    t.tasks.push_back(task);
  }
  t.horizon = std::min(s.horizon, n);
  return t;
}

std::unique_ptr<CofinalityAdapter> snapshot_host(const Snapshot& s) {
  auto host = make_adapter(s.adapter);
  if (!s.reduced) return host;
  return reduce_to_upper(*host, fixed_limit(*host)).adapter;
}

json to_json(const Snapshot& s) {
  json j;
  j["format"] = "forge-run/1";
  j["adapter"] = s.adapter;
  j["reduced"] = s.reduced;
  j["descriptor"] = to_json(s.descriptor);
  j["config"] = to_json(s.config);
  json els = json::array();
  for (const auto& e : s.elements) els.push_back(to_json(e));
  j["elements"] = std::move(els);
  j["order"] = poset_to_json(s.order);
  j["generators"] = s.generators;
  j["stage_ends"] = s.stage_ends;
  json n = k_to_json(s.N);
  json hs = json::array();
  for (const auto& r : s.handles)
    hs.push_back({{"handle", to_json(r.handle)},
                  {"in_point", r.in_point},
                  {"out_point", r.out_point},
                  {"agenda_in", r.agenda_in},
                  {"agenda_out", r.agenda_out}});
  n["handles"] = std::move(hs);
  json cs = json::array();
  for (const auto& c : s.certificates) cs.push_back({{"a", to_json(c.a)}, {"b", to_json(c.b)}, {"point", c.point}});
  n["certificates"] = std::move(cs);
  j["N"] = std::move(n);
  json ts = json::array();
  for (const auto& t : s.tasks) ts.push_back(to_json(t));
  j["tasks"] = std::move(ts);
  json ss = json::array();
  for (const auto& st : s.stages) ss.push_back(to_json(st));
  j["stages"] = std::move(ss);
  json cl = json::array();
  for (const auto& c : s.star_claims) cl.push_back(to_json(c));
  j["star_claims"] = std::move(cl);
  j["horizon"] = s.horizon;
  j["budget_exhausted"] = s.budget_exhausted;
  return j;
}

Snapshot snapshot_from_json(const json& j) {
  try {
    if (j.at("format") != "forge-run/1") throw Error(ErrorCode::CorruptArtifact, "unknown format");
    Snapshot s;
    s.adapter = j.at("adapter").get<std::string>();
    s.reduced = j.at("reduced").get<bool>();
    s.descriptor = descriptor_from_json(j.at("descriptor"));
    s.config = config_from_json(j.at("config"));
    for (const auto& e : j.at("elements")) s.elements.push_back(element_from_json(e));
    s.order = poset_from_json(j.at("order"));
    if (s.order.size() != s.elements.size()) throw Error(ErrorCode::CorruptArtifact, "order and element list differ");
    for (std::size_t i = 0; i < s.order.size(); ++i)
      if (s.order.id_at(i) != i) throw Error(ErrorCode::CorruptArtifact, "element ids are not creation indices");
    s.generators = j.at("generators").get<std::vector<std::vector<ElementId>>>();
    for (const auto& g : s.generators)
      if (g.size() != s.size()) throw Error(ErrorCode::CorruptArtifact, "generator map has the wrong length");
    s.stage_ends = j.at("stage_ends").get<std::vector<std::size_t>>();
    if (s.stage_ends.empty() || s.stage_ends.back() != s.size())
      throw Error(ErrorCode::CorruptArtifact, "stage boundaries do not cover the elements");
    const json& n = j.at("N");
    s.N = k_from_json(n);
    for (const auto& r : n.at("handles"))
      s.handles.push_back({handle_from_json(r.at("handle")), r.at("in_point").get<ElementId>(),
                           r.at("out_point").get<ElementId>(), r.at("agenda_in").get<std::size_t>(),
                           r.at("agenda_out").get<std::size_t>()});
    for (const auto& c : n.at("certificates"))
      s.certificates.push_back(
          {handle_from_json(c.at("a")), handle_from_json(c.at("b")), c.at("point").get<ElementId>()});
    for (const auto& t : j.at("tasks")) s.tasks.push_back(task_from_json(t));
    for (const auto& st : j.at("stages")) s.stages.push_back(stage_from_json(st));
    for (const auto& c : j.at("star_claims")) s.star_claims.push_back(claim_from_json(c));
    s.horizon = j.at("horizon").get<std::size_t>();
    s.budget_exhausted = j.at("budget_exhausted").get<bool>();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptArtifact, e.what());
  }
}

void save_snapshot(const Snapshot& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::BadConfig, "cannot write " + path);
  out << to_json(s).dump(1) << "\n";
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadConfig, "cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptArtifact, e.what());
  }
  return snapshot_from_json(j);
}

std::string snapshot_to_dot(const Snapshot& s) {
  auto style = [&](ElementId id) {
    const ElementRecord& e = s.elements.at(id);
    DotNodeStyle st;
    switch (e.kind) {
      case ElementKind::A: st = {"a" + std::to_string(e.index), "lightblue", "circle"}; break;
      case ElementKind::R: st = {"r" + std::to_string(e.index), "lightpink", "box"}; break;
      case ElementKind::S: st = {"s" + std::to_string(e.index), "khaki", "box"}; break;
      case ElementKind::T: st = {"t" + std::to_string(e.index), "palegreen", "diamond"}; break;
      case ElementKind::Constructed:
        st = {"e" + std::to_string(id) + "@" + std::to_string(e.stage), "white", "ellipse"};
        break;
    }
    return st;
  };
  return poset_to_dot(s.order, style, "forge_" + s.adapter);
}

}  // namespace forge
