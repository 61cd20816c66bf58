#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "forge/adapter.hpp"
#include "forge/moiety.hpp"
#include "forge/poset.hpp"
#include "forge/type_space.hpp"

namespace forge {

enum class ElementKind : std::uint8_t { A, R, S, T, Constructed };
std::string_view to_string(ElementKind k);

// A subset of S named finitely: everything, a union of moieties, listed
// points, and the initial segment s_0..s_{prefix-1}.
struct SSet {
  bool all = false;
  std::vector<MoietyHandle> handles;
  ElementSet points;  // universe ids of S elements
  std::uint64_t prefix = 0;

  bool empty() const { return !all && handles.empty() && points.empty() && prefix == 0; }
  bool finite() const { return !all && handles.empty(); }
  bool single_handle() const { return !all && handles.size() == 1 && points.empty() && prefix == 0; }
  friend bool operator==(const SSet&, const SSet&) = default;
};

SSet sset_all();
SSet sset_handle(const MoietyHandle& h);
SSet sset_union(const SSet& a, const SSet& b);

// (U, W) with U = U ∪ u_moiety and W = W ∪ (w_moiety or all of S).
struct AcceptablePair {
  ElementSet U, W;  // finite parts; may contain S elements
  std::optional<MoietyHandle> u_moiety;
  std::optional<MoietyHandle> w_moiety;
  bool w_all = false;
  friend bool operator==(const AcceptablePair&, const AcceptablePair&) = default;
};

nlohmann::json to_json(const SSet& s);
SSet sset_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AcceptablePair& p);
AcceptablePair pair_from_json(const nlohmann::json& j);

struct TypeDescriptor {
  AcceptablePair pair;
  std::uint32_t stage = 0;
};

struct ElementInfo {
  ElementKind kind = ElementKind::A;
  std::uint64_t index = 0;  // host index for A and T, i for r_i, j for s_j, orbit position otherwise
  std::uint32_t stage = 0;
  std::optional<AcceptablePair> pair;
  SSet down_S, up_S;  // x⁻ ∩ S and x⁺ ∩ S, inclusive for x in S
  bool in_RT_up = false;  // x ∈ (R ∪ T)⁺, inclusive
  bool in_Vp = false;
  ElementSet A0;  // A elements whose pointwise stabilizer fixes x
  std::optional<ElementSet> C;  // x⁻ ∩ V_p = C⁻ ∩ V_p
  ElementId n1 = 0;  // S only: the point of N
};

struct Violation {
  std::string clause;
  std::string detail;
};

struct UniverseConfig {
  std::uint64_t seed = 7;
  std::size_t orbit_budget = 64;
  std::size_t initial_A = 6;
  std::size_t initial_S = 6;
};

class StagedUniverse;
using FreezeHook = std::function<void(const StagedUniverse&, std::uint32_t stage)>;

// The growing G-poset M_0 ⊆ M_1 ⊆ ... . Element ids are creation indices.
// A, R, S, T keep materializing after stage 0; their relations to
// constructed points are read off the constructed points' descriptors.
class StagedUniverse {
 public:
  StagedUniverse(std::unique_ptr<CofinalityAdapter> host, LimitDescriptor p, UniverseConfig cfg);
  StagedUniverse(StagedUniverse&&) = default;
  StagedUniverse& operator=(StagedUniverse&&) = default;

  const CofinalityAdapter& host() const { return *host_; }
  const LimitDescriptor& descriptor() const { return p_; }
  const UniverseConfig& config() const { return cfg_; }
  const FinitePoset& order() const { return order_; }
  std::size_t size() const { return order_.size(); }
  const ElementInfo& info(ElementId x) const { return infos_.at(x); }
  const std::vector<ElementInfo>& infos() const { return infos_; }
  const MoietyEngine& engine() const { return engine_; }

  std::uint32_t last_stage() const { return static_cast<std::uint32_t>(stage_ends_.size()) - 1; }
  // Element count at the moment stage k froze.
  std::size_t stage_end(std::uint32_t k) const { return stage_ends_.at(k); }
  const std::vector<std::size_t>& stage_ends() const { return stage_ends_; }

  const std::vector<ElementId>& a_elements() const { return a_elems_; }
  const std::vector<ElementId>& r_elements() const { return r_elems_; }
  const std::vector<ElementId>& s_elements() const { return s_elems_; }
  std::optional<ElementId> a_element(std::size_t host_index) const;
  std::optional<ElementId> t_element(std::size_t host_index) const;
  std::optional<ElementId> s_of_n1(ElementId n1) const;

  std::size_t generator_count() const { return gen_.size(); }
  ElementId act(std::size_t g, ElementId x) const { return gen_[g].at(x); }
  ElementId act_inverse(std::size_t g, ElementId x) const { return gen_inv_[g].at(x); }
  const std::vector<std::vector<ElementId>>& generator_images() const { return gen_; }
  std::vector<ElementId> orbit(ElementId x) const;

  Relation compare(ElementId x, ElementId y) const;
  bool less(ElementId x, ElementId y) const { return order_.less_at(x, y); }
  bool leq(ElementId x, ElementId y) const { return x == y || order_.less_at(x, y); }

  // Materialization ticks.
  std::vector<ElementId> materialize_next_A();
  ElementId materialize_S();
  void run_agenda(std::size_t quota);
  // Closes the open stage without a construction step.
  void freeze_open_stage() { freeze_stage(); }
  // Sandwich query with C and D given as S elements of the universe.
  MoietyHandle find_Z(SandwichQuery q);

  // SSet calculus over the lazily growing S.
  bool meets(const SSet& a, const SSet& b) const;
  bool subset(const SSet& a, const SSet& b) const;
  SSet normalize(const SSet& a) const;

  bool in_down(ElementId x, const AcceptablePair& p) const;  // x ∈ U⁻
  bool in_up(ElementId x, const AcceptablePair& p) const;    // x ∈ W⁺
  SSet pair_down_S(const AcceptablePair& p) const;
  SSet pair_up_S(const AcceptablePair& p) const;
  bool pair_in_RT_up(const AcceptablePair& p) const;

  std::vector<Violation> acceptability(const AcceptablePair& p) const;
  bool is_acceptable(const AcceptablePair& p) const { return acceptability(p).empty(); }
  // τ(U, W) restricted to the materialized universe. Throws NotAcceptable.
  ValidTriple tau(const AcceptablePair& p) const;
  AcceptablePair act(std::size_t g, const AcceptablePair& p) const;
  AcceptablePair act_inverse(std::size_t g, const AcceptablePair& p) const;
  bool same_type(const AcceptablePair& a, const AcceptablePair& b) const;

  // Adds the G-orbit of τ(U, W) as a new stage. The first returned point
  // realizes τ(U, W) itself.
  std::vector<ElementId> extend(const AcceptablePair& p);

  // Σ handles of the form m⁻ ∩ S for materialized m outside S.
  const std::set<MoietyHandle>& fingerprints() const { return fingerprints_; }
  // Type q over the materialized part of A.
  bool q_consistent(ElementId x) const;

  void set_freeze_hook(FreezeHook hook) { freeze_hook_ = std::move(hook); }

 private:
  friend StagedUniverse build_M0(std::unique_ptr<CofinalityAdapter>, const FixedLimit&, UniverseConfig);

  ElementId add_element(ElementInfo info);
  Relation static_relation(const ElementInfo& y, ElementId x) const;
  Relation new_vs_existing(const ElementInfo& y, ElementId y_future, const std::vector<Relation>& rel_y,
                           ElementId x) const;
  bool closure_less(const AcceptablePair& lo, const AcceptablePair& hi) const;
  SSet w_moiety_set(const AcceptablePair& p) const;
  void sync_S();
  bool member_s(const MoietyHandle& h, ElementId s) const;
  std::optional<std::uint64_t> first_member_index(const MoietyHandle& h) const;
  void complete_info(ElementInfo& info) const;
  void freeze_stage();

  std::unique_ptr<CofinalityAdapter> host_;
  LimitDescriptor p_;
  UniverseConfig cfg_;
  MoietyEngine engine_;
  FinitePoset order_;
  std::vector<ElementInfo> infos_;
  std::vector<std::size_t> stage_ends_;
  std::vector<ElementId> a_elems_, r_elems_, s_elems_;
  std::unordered_map<std::size_t, ElementId> a_by_host_, t_by_host_;
  std::unordered_map<ElementId, ElementId> s_by_n1_;
  std::size_t next_host_ = 0;
  std::vector<std::vector<ElementId>> gen_, gen_inv_;
  std::set<MoietyHandle> fingerprints_;
  struct FirstMember {
    std::optional<std::uint64_t> index;
    std::size_t scanned = 0;
  };
  mutable std::map<MoietyHandle, FirstMember> first_member_;
  FreezeHook freeze_hook_;
};

// M_0 over the host for an UPPER-mode descriptor. Throws WrongLimitMode.
StagedUniverse build_M0(std::unique_ptr<CofinalityAdapter> host, const FixedLimit& fl, UniverseConfig cfg = {});

}  // namespace forge
