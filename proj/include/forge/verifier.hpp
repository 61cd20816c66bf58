#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/artifact.hpp"

namespace forge {

struct AuditFailure {
  std::string clause;
  std::vector<ElementId> elements;
  std::vector<std::pair<ElementId, ElementId>> relations;  // x < y pairs the failure rests on
  std::string detail;
};

struct AuditReport {
  std::string audit;
  std::uint32_t stage_from = 0;
  std::uint32_t stage_to = 0;
  std::uint64_t checks = 0;
  std::uint64_t pending = 0;
  std::vector<AuditFailure> failures;
  std::map<std::string, std::uint64_t> counts;
  std::vector<std::string> notes;

  bool passed() const { return failures.empty() && checks > 0; }
  void fail(AuditFailure f);
};

nlohmann::json to_json(const AuditReport& r);

struct AuditOptions {
  std::size_t word_bound = 6;
  std::size_t rigidity_max = 7;
  std::size_t support_bound = 3;
  // Host indices scanned for a point of V_p outside a certificate's down-set.
  std::size_t oracle_scan = 4096;
  std::size_t max_failures = 32;
};

// Group elements reachable by generator words of length <= bound, as
// permutations of the snapshot's elements, identity first.
std::vector<std::vector<ElementId>> group_elements(const Snapshot& s, std::size_t bound);

// A PENDING task the budget legitimately stopped short of.
bool pending_beyond_budget(const Snapshot& s, const TaskRecord& t);

AuditReport audit_structure(const Snapshot& s, const AuditOptions& o = {});
AuditReport audit_ac_props(const Snapshot& s, std::uint32_t k, const AuditOptions& o = {});
AuditReport audit_minimality(const Snapshot& s, const AuditOptions& o = {});
AuditReport audit_genericity(const Snapshot& s, const AuditOptions& o = {});
AuditReport audit_uniqueness(const Snapshot& s, const AuditOptions& o = {});

// R_n ∪ S_n with r_i < s_j iff i >= j, as built from the definition.
FinitePoset rs_truncation(std::size_t n);

// A finite piece of the generic poset grown by a plain witness scheduler.
struct PlainGeneric {
  FinitePoset order;
  std::size_t support_bound = 3;
  // Every valid triple with support below this id was taken by the scheduler.
  std::size_t horizon = 0;
  std::vector<ValidTriple> witnessed;
};

PlainGeneric build_plain_generic(std::size_t n, std::size_t support_bound = 3);

// Certificates for the forcing argument around v: for sampled m and every
// candidate image m′, the separating triple and its witness.
AuditReport forcing_certificates(const PlainGeneric& g, ElementId v, std::size_t max_m = 4);

enum class OracleFault : std::uint8_t { None, PerturbedMeet };

AuditReport oracle_suite(std::size_t n_max, OracleFault fault = OracleFault::None, std::size_t sampled_opens = 1000,
                         std::uint64_t seed = 7);

enum class Fault : std::uint8_t { FlipRelation, ForgeFingerprint, BreakStabilizer, TamperA0, FullVpBelow };
std::string_view to_string(Fault f);
// Throws BadConfig for unknown names.
Fault fault_from_string(std::string_view name);

// A damaged copy of the snapshot, or nullopt when it has no suitable site.
std::optional<Snapshot> inject_fault(const Snapshot& s, Fault f, std::string* where = nullptr);

}  // namespace forge
