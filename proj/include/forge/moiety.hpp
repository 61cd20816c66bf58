#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "forge/poset.hpp"
#include "forge/type_space.hpp"

namespace forge {

enum class Sort : std::uint8_t { N0 = 0, N1 = 1, N2 = 2 };

// A finite three-sorted poset. Condition (∗): N1 is an antichain and every
// strict relation x < y has x in N0 or y in N2.
struct KStructure {
  FinitePoset order;
  std::vector<Sort> chi;  // by index
};

bool k_check(const KStructure& k);
// Poset JSON plus a "chi" map from element id to sort.
nlohmann::json k_to_json(const KStructure& k);
KStructure k_from_json(const nlohmann::json& j);
bool sorts_allow(Sort lower, Sort upper);

enum class MoietyKind : std::uint8_t { Sigma, SigmaPrime };
std::string_view to_string(MoietyKind k);
constexpr MoietyKind other(MoietyKind k) {
  return k == MoietyKind::Sigma ? MoietyKind::SigmaPrime : MoietyKind::Sigma;
}

// Sigma: Z = generator⁻ ∩ N1 with generator in N2.
// SigmaPrime: Z = generator⁺ ∩ N1 with generator in N0.
struct MoietyHandle {
  MoietyKind kind = MoietyKind::Sigma;
  ElementId generator = 0;
  friend bool operator==(const MoietyHandle&, const MoietyHandle&) = default;
  friend auto operator<=>(const MoietyHandle&, const MoietyHandle&) = default;
};

nlohmann::json to_json(const MoietyHandle& h);
MoietyHandle handle_from_json(const nlohmann::json& j);

struct SandwichQuery {
  MoietyKind kind = MoietyKind::Sigma;
  std::vector<MoietyHandle> U, W;  // of `kind`
  std::vector<MoietyHandle> V;     // of the other kind
  ElementSet C, D;                 // N1 points
  std::vector<MoietyHandle> avoid;
};

struct HandleRecord {
  MoietyHandle handle;
  ElementId in_point = 0;
  ElementId out_point = 0;
  std::size_t agenda_in = 0;
  std::size_t agenda_out = 0;
};

// A point of N1 in exactly one of Z(a), Z(b).
struct SeparationCertificate {
  MoietyHandle a, b;
  ElementId point = 0;
};

// Owner of the auxiliary structure N. N1 materializes lazily; every new
// point's relation to the existing generators is fixed at creation and never
// revisited.
class MoietyEngine {
 public:
  explicit MoietyEngine(std::uint64_t seed);

  const KStructure& structure() const { return k_; }
  Sort sort_of(ElementId id) const { return k_.chi.at(k_.order.index_of(id)); }
  const std::vector<ElementId>& n1_points() const { return n1_; }

  // Adds a point of the given sort with below ⊆ its down-set and above ⊆ its
  // up-set (both closed first). Throws InconsistentWithK.
  ElementId grow_N(Sort sort, const ElementSet& below, const ElementSet& above);
  ElementId grow_N(Sort sort, const ValidTriple& t);

  // New N1 point chosen by the genericity policy.
  ElementId generic_point();

  bool member(const MoietyHandle& h, ElementId s) const;
  // Z(small) ⊆ Z(big) for handles of one kind.
  bool contains(const MoietyHandle& big, const MoietyHandle& small) const;
  // Z(a) ∩ Z(b) ≠ ∅ for handles of different kinds.
  bool intersects(const MoietyHandle& a, const MoietyHandle& b) const;

  // Throws PreconditionViolated naming the failed clause.
  void check_preconditions(const SandwichQuery& q) const;
  MoietyHandle find_Z(const SandwichQuery& q);

  // One in-point and one out-point for each of the next `quota` handles.
  void run_agenda(std::size_t quota);

  const std::vector<HandleRecord>& handles() const { return handles_; }
  const HandleRecord& record(const MoietyHandle& h) const;
  std::optional<ElementId> separating_point(const MoietyHandle& a, const MoietyHandle& b) const;
  const std::vector<SeparationCertificate>& certificates() const { return certs_; }

  // Materialized members as a bitset over N indices.
  Bitset members(const MoietyHandle& h) const;

  nlohmann::json dump() const;

 private:
  std::size_t idx(ElementId id) const { return k_.order.index_of(id); }
  ElementId new_point(const ElementSet& below, const ElementSet& above);
  // N1 point with required/forbidden N2 points above it and N0 points below it,
  // topped up at random.
  ElementId random_point(const ElementSet& req_above, const ElementSet& forbid_above, const ElementSet& req_below,
                         const ElementSet& forbid_below);
  ElementSet sort_members(Sort s) const;
  void certify_against_existing(const MoietyHandle& h);
  void witness_intersections(ElementId gen);
  void require_kind(const MoietyHandle& h, MoietyKind k, const char* what) const;

  KStructure k_;
  Bitset n1_mask_;
  std::vector<ElementId> n1_;
  ElementId next_id_ = 0;
  std::mt19937_64 rng_;
  std::vector<HandleRecord> handles_;
  std::map<MoietyHandle, std::size_t> handle_index_;
  std::vector<SeparationCertificate> certs_;
  std::map<std::pair<MoietyHandle, MoietyHandle>, std::size_t> cert_index_;
  std::size_t agenda_cursor_ = 0;
};

}  // namespace forge
