// forge: build, audit and export runs of the staged construction.
//
// Exit codes: 0 pass, 1 audit failure, 2 usage or config error, 3 budget
// exhausted (the artifact is still written).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "forge/verifier.hpp"

namespace {

using namespace forge;
using nlohmann::json;

constexpr int kPass = 0, kAuditFailure = 1, kUsage = 2, kBudget = 3;

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::BadConfig, "cannot write " + path);
  f << text;
}

struct BuildArgs {
  std::string adapter = "antichain";
  SchedulerConfig cfg;
  std::string out = "run.json";
};

int cmd_build(BuildArgs a) {
  if (const char* env = std::getenv("FORGE_SEED")) {
    try {
      std::size_t used = 0;
      a.cfg.seed = std::stoull(env, &used, 0);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadConfig, std::string("FORGE_SEED is not a 64-bit integer: ") + env);
    }
  }
  if (a.cfg.stage_budget == 0) throw Error(ErrorCode::BadConfig, "--stages must be positive");
  if (a.cfg.orbit_budget == 0) throw Error(ErrorCode::BadConfig, "--orbit-budget must be positive");
  if (a.cfg.support_bound == 0) throw Error(ErrorCode::BadConfig, "--support-bound must be positive");
  if (a.cfg.agenda_quota == 0) throw Error(ErrorCode::BadConfig, "--agenda-quota must be positive");

  std::optional<RunResult> built;
  try {
    built.emplace(run_scheduler(make_adapter(a.adapter), a.cfg));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OrbitBudgetExhausted) throw;
    throw Error(ErrorCode::BadConfig, "--orbit-budget is too small to build M0 (" + std::string(e.what()) + ")");
  }
  const RunResult& r = *built;
  const Snapshot s = snapshot(r, a.adapter, a.cfg);
  save_snapshot(s, a.out);
  std::size_t pending = 0;
  for (const auto& t : s.tasks) pending += t.status == TaskStatus::Pending;
  std::cerr << "forge: " << a.adapter << ": " << s.size() << " elements, " << s.last_stage() << " stages, "
            << s.tasks.size() << " tasks (" << pending << " pending) -> " << a.out << "\n";
  if (s.budget_exhausted) {
    std::cerr << "forge: BudgetExhausted: a task needs more orbit elements or stages than the budget allows\n";
    return kBudget;
  }
  return kPass;
}

struct AuditArgs {
  std::string run;
  std::string suite = "all";
  std::string inject;
  std::string out;
  AuditOptions opts;
  std::size_t oracle_n = 4;
  std::size_t sampled_opens = 1000;
};

int cmd_audit(const AuditArgs& a) {
  const bool all = a.suite == "all";
  std::vector<AuditReport> reports;
  std::optional<Snapshot> s;
  if (a.suite != "oracles" || !a.inject.empty()) {
    if (a.run.empty()) throw Error(ErrorCode::BadConfig, "--run is required for suite " + a.suite);
    s = load_snapshot(a.run);
  }
  json meta;
  if (!a.inject.empty()) {
    const Fault f = fault_from_string(a.inject);
    std::string where;
    auto bad = inject_fault(*s, f, &where);
    if (!bad) throw Error(ErrorCode::BadConfig, "no site for fault " + a.inject + " in this run");
    s = std::move(*bad);
    meta["injected"] = {{"fault", a.inject}, {"site", where}};
  }
  if (s) {
    if (all) reports.push_back(audit_structure(*s, a.opts));
    if (all || a.suite == "ac") reports.push_back(audit_ac_props(*s, s->last_stage(), a.opts));
    if (all || a.suite == "minimality") reports.push_back(audit_minimality(*s, a.opts));
    if (all || a.suite == "genericity") reports.push_back(audit_genericity(*s, a.opts));
    if (all || a.suite == "uniqueness") reports.push_back(audit_uniqueness(*s, a.opts));
  }
  if (all || a.suite == "oracles") reports.push_back(oracle_suite(a.oracle_n, OracleFault::None, a.sampled_opens));

  bool passed = true;
  json out = meta;
  out["suite"] = a.suite;
  out["word_bound"] = a.opts.word_bound;
  if (s) out["run"] = {{"adapter", s->adapter}, {"stages", s->last_stage()}, {"elements", s->size()}};
  out["reports"] = json::array();
  for (const auto& r : reports) {
    passed = passed && r.passed();
    out["reports"].push_back(to_json(r));
    std::cerr << (r.passed() ? "PASS " : "FAIL ") << r.audit << ": " << r.checks << " checks, " << r.failures.size()
              << " failures, " << r.pending << " pending\n";
  }
  out["passed"] = passed;
  write_out(a.out, out.dump(1) + "\n");
  return passed ? kPass : kAuditFailure;
}

struct ExportArgs {
  std::string run;
  std::string format = "dot";
  std::optional<std::uint32_t> stage;
  std::string out;
};

int cmd_export(const ExportArgs& a) {
  const Snapshot full = load_snapshot(a.run);
  const Snapshot s = truncate(full, a.stage.value_or(full.last_stage()));
  if (a.format == "dot") write_out(a.out, snapshot_to_dot(s));
  else write_out(a.out, to_json(s).dump(1) + "\n");
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staged construction of a uniquely-extensive embedding into the generic poset"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Run the scheduler and write run.json");
  b->add_option("--adapter", build.adapter, "Built-in host poset")->check(CLI::IsMember(builtin_adapter_names()));
  b->add_option("--stages", build.cfg.stage_budget, "Stage budget");
  b->add_option("--orbit-budget", build.cfg.orbit_budget, "Orbit elements per stage");
  b->add_option("--support-bound", build.cfg.support_bound, "Largest (a)-task support");
  b->add_option("--agenda-quota", build.cfg.agenda_quota, "Moiety agenda steps per stage");
  b->add_option("--seed", build.cfg.seed, "Seed; FORGE_SEED overrides it");
  b->add_option("--out", build.out, "Artifact path");

  AuditArgs audit;
  auto* au = app.add_subcommand("audit", "Audit a run artifact");
  au->add_option("--run", audit.run, "run.json");
  au->add_option("--suite", audit.suite, "Audit suite")
      ->check(CLI::IsMember({"all", "ac", "minimality", "genericity", "uniqueness", "oracles"}));
  au->add_option("--inject", audit.inject, "Damage a copy of the run first")
      ->check(CLI::IsMember({"flip-relation", "forge-fingerprint", "break-stabilizer", "tamper-a0", "full-vp-below"}));
  au->add_option("--word-bound", audit.opts.word_bound, "Generator word length for stabilizer checks");
  au->add_option("--support-bound", audit.opts.support_bound, "Support bound for the coverage check");
  au->add_option("--oracle-n", audit.oracle_n, "Largest poset size for the oracle suite")->check(CLI::Range(0, 4));
  au->add_option("--sampled-opens", audit.sampled_opens, "Basic opens sampled by the oracle suite");
  au->add_option("--out", audit.out, "Report path (default stdout)");

  ExportArgs exp;
  auto* ex = app.add_subcommand("export", "Export a stage of a run");
  ex->add_option("--run", exp.run, "run.json")->required();
  ex->add_option("--format", exp.format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
  ex->add_option("--stage", exp.stage, "Stage (default: last)");
  ex->add_option("--out", exp.out, "Output path (default stdout)");

  auto* ad = app.add_subcommand("adapters", "List the built-in adapters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*b) return cmd_build(build);
    if (*au) return cmd_audit(audit);
    if (*ex) return cmd_export(exp);
    if (*ad) {
      for (const auto& n : builtin_adapter_names()) {
        const FixedLimit fl = fixed_limit(*make_adapter(n));
        std::cout << n << (fl.mode == LimitMode::NeedsOpReduction ? " (op-reduced)" : "") << "\n";
      }
      return kPass;
    }
  } catch (const Error& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return e.code() == ErrorCode::BudgetExhausted ? kBudget : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
