#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "forge/poset.hpp"
#include "forge/type_space.hpp"

namespace forge {

// c_a: number of elements in the longest descending chain starting at a.
// nullopt stands for ∞.
using ChainRank = std::optional<std::uint64_t>;

// Definable subsets V of the host, named by rule instead of listed.
enum class LimitRule : std::uint8_t {
  DownFinite,  // V = {a | c_a < ∞}
  DownLe,      // V = {a | c_a <= n}
  UpInfinite,  // V = {a | c^op_a = ∞}, the reduced descriptor over the opposite host
};

std::string_view to_string(LimitRule r);

// A type in λ(A) of the form (∅, V, A \ V).
struct LimitDescriptor {
  LimitRule rule = LimitRule::DownFinite;
  std::uint64_t n = 0;
  friend bool operator==(const LimitDescriptor&, const LimitDescriptor&) = default;
};

nlohmann::json to_json(const LimitDescriptor& d);
LimitDescriptor descriptor_from_json(const nlohmann::json& j);

// Oracle view of a countable poset enumerated as a_0, a_1, ...
class CofinalityAdapter {
 public:
  virtual ~CofinalityAdapter() = default;

  virtual std::string name() const = 0;
  virtual bool infinite() const { return true; }
  // True when this adapter presents the opposite order of its named host.
  virtual bool reversed() const = 0;

  // i != j
  virtual Relation relation(std::size_t i, std::size_t j) const = 0;
  virtual ChainRank chain_down(std::size_t i) const = 0;
  virtual ChainRank chain_up(std::size_t i) const = 0;

  virtual bool chain_ranks_unbounded() const = 0;
  // Least n with {a | c_a = n} infinite; only meaningful when ranks are bounded.
  virtual std::optional<std::uint64_t> least_infinite_level() const = 0;

  virtual std::size_t generator_count() const = 0;
  virtual std::size_t apply(std::size_t g, std::size_t i) const = 0;
  virtual std::size_t apply_inverse(std::size_t g, std::size_t i) const = 0;

  // Is there a finite V0 with V0⁻ = V? nullopt when the adapter cannot say.
  virtual std::optional<bool> finite_dominating(const LimitDescriptor& d) const = 0;
  // Is there a finite W0 with W0⁺ = A \ V?
  virtual std::optional<bool> finite_codominating(const LimitDescriptor& d) const = 0;

  virtual std::unique_ptr<CofinalityAdapter> opposite() const = 0;
  virtual std::unique_ptr<CofinalityAdapter> clone() const = 0;

  bool in_V(const LimitDescriptor& d, std::size_t i) const;
};

std::vector<std::string> builtin_adapter_names();
// Throws BadConfig for unknown names.
std::unique_ptr<CofinalityAdapter> make_adapter(std::string_view name);
// Finite host, for exercising the FiniteHost error path.
std::unique_ptr<CofinalityAdapter> make_finite_adapter(const FinitePoset& p);

// The generator orbit of a_i, breadth first. Throws OrbitBudgetExhausted past `bound`.
std::vector<std::size_t> adapter_orbit(const CofinalityAdapter& a, std::size_t i, std::size_t bound = 4096);

// First n elements as a FinitePoset with ids 0..n-1.
FinitePoset adapter_truncation(const CofinalityAdapter& a, std::size_t n);

// The triple (∅, V, W) restricted to a_0..a_{n-1}.
ValidTriple descriptor_triple(const CofinalityAdapter& a, const LimitDescriptor& d, std::size_t n);

bool is_upper_limit(const CofinalityAdapter& a, const LimitDescriptor& d);
bool is_lower_limit(const CofinalityAdapter& a, const LimitDescriptor& d);

enum class LimitMode : std::uint8_t { Upper, NeedsOpReduction };
std::string_view to_string(LimitMode m);

struct FixedLimit {
  LimitDescriptor descriptor;
  LimitMode mode = LimitMode::Upper;
};

FixedLimit fixed_limit(const CofinalityAdapter& a);

// For NeedsOpReduction: the opposite host with shift_down(op_type(p)), which
// is an upper limit there. For Upper: a copy of the input.
struct ReducedHost {
  std::unique_ptr<CofinalityAdapter> adapter;
  LimitDescriptor descriptor;
};
ReducedHost reduce_to_upper(const CofinalityAdapter& a, const FixedLimit& fl);

// Checks that every generator preserves V on the first n elements.
bool descriptor_is_fixed(const CofinalityAdapter& a, const LimitDescriptor& d, std::size_t n = 64);

}  // namespace forge
