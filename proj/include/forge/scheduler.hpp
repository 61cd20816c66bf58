#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/universe.hpp"

namespace forge {

enum class TaskStatus : std::uint8_t { Done, Pending };
std::string_view to_string(TaskStatus s);

struct TaskRecord {
  std::uint64_t index = 0;
  std::string source;  // "(a)" or "(c)"
  ValidTriple triple;  // (a): the finite valid triple; (c): τ's finite support
  std::optional<AcceptablePair> pair;
  TaskStatus status = TaskStatus::Pending;
  std::string route;  // free, enough_aps, enough_aps2, acceptable_pair
  std::optional<ElementId> witness;
  std::uint32_t over_stage = 0;  // last frozen stage when the task was taken
  std::uint32_t cost = 0;
  std::string note;
};

struct StageRecord {
  std::uint32_t stage = 0;
  std::string route;  // "(a)" or "(c)"
  std::string lemma;  // enough_aps, enough_aps2[i], acceptable_pair
  std::uint64_t task = 0;
  AcceptablePair pair;
  std::vector<ElementId> orbit;
};

// One claimed stabilizer identity G_e = G_F from the stabilizer lemma.
struct StarClaim {
  std::uint32_t stage = 0;
  ElementId point = 0;
  ElementSet fixed;  // A elements
  std::string label;
};

struct SchedulerConfig {
  std::uint32_t stage_budget = 40;
  std::size_t orbit_budget = 64;
  std::size_t support_bound = 3;
  std::size_t agenda_quota = 4;
  std::uint64_t seed = 7;
  std::uint64_t task_cap = 2'000'000;
};

struct RunResult {
  StagedUniverse universe;
  std::vector<TaskRecord> tasks;
  std::vector<StageRecord> stages;
  std::vector<StarClaim> star_claims;
  bool reduced = false;
  // Every (a)-task whose support lies below this id was taken.
  std::size_t horizon = 0;
  bool budget_exhausted = false;
};

// τ(result) ∈ ⟨U0, V0, W0⟩ for a finite valid triple with U0⁻ ∩ S = ∅, or
// with U0⁻ ∩ S ≠ ∅ through a fresh Σ moiety. Throws NotAValidTriple.
AcceptablePair enough_aps(StagedUniverse& u, const ValidTriple& t);

struct Aps2Result {
  std::vector<ElementId> e;  // e_0 .. e_{d+1}; the last realizes the triple
  ElementSet A0;
  std::vector<StageRecord> stages;
  std::vector<StarClaim> claims;
};

// d + 2 stages ending in a witness for t, with the stabilizer condition
// recorded per stage. Throws PreconditionViolated when U0⁻ ∩ S = ∅.
Aps2Result enough_aps2(StagedUniverse& u, const ValidTriple& t);

bool valid_over_support(const StagedUniverse& u, const ValidTriple& t);
// First materialized m outside the support realizing t.
std::optional<ElementId> find_witness(const StagedUniverse& u, const ValidTriple& t);
bool realizes(const StagedUniverse& u, ElementId m, const ValidTriple& t);

// Tasks of the (a)-stream in order: (∅,∅,∅), then by largest support
// element, then by the rest of the support, then by partition code.
class TripleStream {
 public:
  explicit TripleStream(std::size_t support_bound) : bound_(support_bound) {}
  // Next valid triple whose support lies below `horizon`, if any.
  std::optional<ValidTriple> next(const StagedUniverse& u, std::size_t horizon);
  // Support elements below this id are exhausted.
  std::size_t completed_below() const { return started_ ? m_ : 0; }

 private:
  bool advance_support(std::size_t horizon);
  std::size_t bound_;
  bool started_ = false;
  std::size_t m_ = 0;
  std::vector<ElementId> rest_;  // current subset of [0, m)
  std::uint64_t code_ = 0;
  bool have_support_ = false;
};

RunResult run_scheduler(std::unique_ptr<CofinalityAdapter> host, const SchedulerConfig& cfg,
                        FreezeHook hook = nullptr);

nlohmann::json to_json(const TaskRecord& t);
TaskRecord task_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StageRecord& s);
StageRecord stage_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StarClaim& c);
StarClaim claim_from_json(const nlohmann::json& j);

}  // namespace forge
