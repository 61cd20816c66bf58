#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/scheduler.hpp"

namespace forge {

struct ElementRecord {
  ElementKind kind = ElementKind::A;
  std::uint64_t index = 0;
  std::uint32_t stage = 0;
  std::optional<AcceptablePair> pair;
  ElementSet A0;
  std::optional<ElementSet> C;
  std::optional<ElementId> n1;
};

// A frozen run as plain data: what run.json holds.
struct Snapshot {
  std::string adapter;
  bool reduced = false;
  LimitDescriptor descriptor;
  SchedulerConfig config;
  std::vector<ElementRecord> elements;
  FinitePoset order;
  std::vector<std::vector<ElementId>> generators;
  std::vector<std::size_t> stage_ends;
  KStructure N;
  std::vector<HandleRecord> handles;
  std::vector<SeparationCertificate> certificates;
  std::vector<TaskRecord> tasks;
  std::vector<StageRecord> stages;
  std::vector<StarClaim> star_claims;
  std::size_t horizon = 0;
  bool budget_exhausted = false;

  std::size_t size() const { return elements.size(); }
  std::uint32_t last_stage() const { return static_cast<std::uint32_t>(stage_ends.size()) - 1; }
};

Snapshot snapshot(const RunResult& r, const std::string& adapter, const SchedulerConfig& cfg);

// Elements born up to stage k and the ledger entries that refer only to them.
// Throws StageOutOfRange.
Snapshot truncate(const Snapshot& s, std::uint32_t k);

// The (possibly reduced) host the snapshot was built over.
std::unique_ptr<CofinalityAdapter> snapshot_host(const Snapshot& s);

nlohmann::json to_json(const Snapshot& s);
// Throws CorruptArtifact.
Snapshot snapshot_from_json(const nlohmann::json& j);

void save_snapshot(const Snapshot& s, const std::string& path);
Snapshot load_snapshot(const std::string& path);

std::string snapshot_to_dot(const Snapshot& s);

nlohmann::json to_json(const SchedulerConfig& c);
SchedulerConfig config_from_json(const nlohmann::json& j);

}  // namespace forge
