#include "forge/adapter.hpp"

#include <deque>
#include <unordered_set>

namespace forge {

std::string_view to_string(LimitRule r) {
  switch (r) {
    case LimitRule::DownFinite: return "c_finite";
    case LimitRule::DownLe: return "c_le_n";
    case LimitRule::UpInfinite: return "op_c_infinite";
  }
  return "?";
}

std::string_view to_string(LimitMode m) { return m == LimitMode::Upper ? "UPPER" : "NEEDS_OP_REDUCTION"; }

nlohmann::json to_json(const LimitDescriptor& d) {
  return nlohmann::json{{"rule", std::string(to_string(d.rule))}, {"n", d.n}};
}

LimitDescriptor descriptor_from_json(const nlohmann::json& j) {
  LimitDescriptor d;
  const auto rule = j.at("rule").get<std::string>();
  if (rule == "c_finite") d.rule = LimitRule::DownFinite;
  else if (rule == "c_le_n") d.rule = LimitRule::DownLe;
  else if (rule == "op_c_infinite") d.rule = LimitRule::UpInfinite;
  else throw Error(ErrorCode::CorruptArtifact, "unknown descriptor rule " + rule);
  d.n = j.at("n").get<std::uint64_t>();
  return d;
}

bool CofinalityAdapter::in_V(const LimitDescriptor& d, std::size_t i) const {
  switch (d.rule) {
    case LimitRule::DownFinite: return chain_down(i).has_value();
    case LimitRule::DownLe: {
      auto c = chain_down(i);
      return c && *c <= d.n;
    }
    case LimitRule::UpInfinite: return !chain_up(i).has_value();
  }
  return false;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Shared orientation handling: subclasses describe the host in its named
// orientation and this class flips it on request.
class Builtin : public CofinalityAdapter {
 public:
  explicit Builtin(bool rev) : rev_(rev) {}
  bool reversed() const override { return rev_; }

  Relation relation(std::size_t i, std::size_t j) const final {
    Relation r = base_relation(i, j);
    return rev_ ? flip(r) : r;
  }
  ChainRank chain_down(std::size_t i) const final { return rev_ ? base_up(i) : base_down(i); }
  ChainRank chain_up(std::size_t i) const final { return rev_ ? base_down(i) : base_up(i); }

 protected:
  virtual Relation base_relation(std::size_t i, std::size_t j) const = 0;
  virtual ChainRank base_down(std::size_t i) const = 0;
  virtual ChainRank base_up(std::size_t i) const = 0;

  bool rev_;
};

// Ranks of V's elements, classified per adapter below.
enum class Region { Empty, All, Other };

class Antichain final : public Builtin {
 public:
  using Builtin::Builtin;
  std::string name() const override { return "antichain"; }
  bool chain_ranks_unbounded() const override { return false; }
  std::optional<std::uint64_t> least_infinite_level() const override { return 1; }
  std::size_t generator_count() const override { return 2; }
  std::size_t apply(std::size_t g, std::size_t i) const override {
    if (g == 0) return i == 0 ? 1 : i == 1 ? 0 : i;
    return i == 1 ? 2 : i == 2 ? 3 : i == 3 ? 1 : i;
  }
  std::size_t apply_inverse(std::size_t g, std::size_t i) const override {
    if (g == 0) return apply(0, i);
    return i == 1 ? 3 : i == 3 ? 2 : i == 2 ? 1 : i;
  }
  std::optional<bool> finite_dominating(const LimitDescriptor& d) const override {
    return region(d) == Region::Empty;
  }
  std::optional<bool> finite_codominating(const LimitDescriptor& d) const override {
    return region(d) == Region::All;
  }
  std::unique_ptr<CofinalityAdapter> opposite() const override { return std::make_unique<Antichain>(!rev_); }
  std::unique_ptr<CofinalityAdapter> clone() const override { return std::make_unique<Antichain>(rev_); }

 protected:
  Relation base_relation(std::size_t, std::size_t) const override { return Relation::INC; }
  ChainRank base_down(std::size_t) const override { return 1; }
  ChainRank base_up(std::size_t) const override { return 1; }

 private:
  static Region region(const LimitDescriptor& d) {
    if (d.rule == LimitRule::DownFinite) return Region::All;
    if (d.rule == LimitRule::DownLe) return d.n >= 1 ? Region::All : Region::Empty;
    return Region::Empty;
  }
};

// a_i < a_j iff i < j, or its reverse.
class Chain final : public Builtin {
 public:
  using Builtin::Builtin;
  std::string name() const override { return rev_ ? "chain-down" : "chain-up"; }
  bool chain_ranks_unbounded() const override { return true; }
  std::optional<std::uint64_t> least_infinite_level() const override { return std::nullopt; }
  std::size_t generator_count() const override { return 0; }
  std::size_t apply(std::size_t, std::size_t i) const override { return i; }
  std::size_t apply_inverse(std::size_t, std::size_t i) const override { return i; }
  std::optional<bool> finite_dominating(const LimitDescriptor& d) const override {
    if (rev_) return true;  // every rule gives V = ∅
    return d.rule == LimitRule::DownLe;  // finite initial segment, else all of A
  }
  std::optional<bool> finite_codominating(const LimitDescriptor& d) const override {
    if (rev_) return false;  // W = A, a descending chain with no finite cobase
    (void)d;
    return true;  // W is ∅ or a final segment {a_i | i >= n}
  }
  std::unique_ptr<CofinalityAdapter> opposite() const override { return std::make_unique<Chain>(!rev_); }
  std::unique_ptr<CofinalityAdapter> clone() const override { return std::make_unique<Chain>(rev_); }

 protected:
  Relation base_relation(std::size_t i, std::size_t j) const override { return i < j ? Relation::LT : Relation::GT; }
  ChainRank base_down(std::size_t i) const override { return i + 1; }
  ChainRank base_up(std::size_t) const override { return std::nullopt; }
};

// Two disjoint ascending chains on the even and the odd indices.
class TwoChains final : public Builtin {
 public:
  using Builtin::Builtin;
  std::string name() const override { return "two-chains"; }
  bool chain_ranks_unbounded() const override { return true; }
  std::optional<std::uint64_t> least_infinite_level() const override { return std::nullopt; }
  std::size_t generator_count() const override { return 1; }
  std::size_t apply(std::size_t, std::size_t i) const override { return i ^ 1U; }
  std::size_t apply_inverse(std::size_t, std::size_t i) const override { return i ^ 1U; }
  std::optional<bool> finite_dominating(const LimitDescriptor& d) const override {
    if (rev_) return true;
    return d.rule == LimitRule::DownLe;
  }
  std::optional<bool> finite_codominating(const LimitDescriptor&) const override { return !rev_; }
  std::unique_ptr<CofinalityAdapter> opposite() const override { return std::make_unique<TwoChains>(!rev_); }
  std::unique_ptr<CofinalityAdapter> clone() const override { return std::make_unique<TwoChains>(rev_); }

 protected:
  Relation base_relation(std::size_t i, std::size_t j) const override {
    if ((i & 1U) != (j & 1U)) return Relation::INC;
    return i < j ? Relation::LT : Relation::GT;
  }
  ChainRank base_down(std::size_t i) const override { return i / 2 + 1; }
  ChainRank base_up(std::size_t) const override { return std::nullopt; }
};

// a_0 below every other element; the rest an antichain.
class Star final : public Builtin {
 public:
  using Builtin::Builtin;
  std::string name() const override { return "star"; }
  bool chain_ranks_unbounded() const override { return false; }
  std::optional<std::uint64_t> least_infinite_level() const override { return rev_ ? 1 : 2; }
  std::size_t generator_count() const override { return 2; }
  std::size_t apply(std::size_t g, std::size_t i) const override {
    if (g == 0) return i == 1 ? 2 : i == 2 ? 1 : i;
    return i == 1 ? 2 : i == 2 ? 3 : i == 3 ? 1 : i;
  }
  std::size_t apply_inverse(std::size_t g, std::size_t i) const override {
    if (g == 0) return apply(0, i);
    return i == 1 ? 3 : i == 3 ? 2 : i == 2 ? 1 : i;
  }
  std::optional<bool> finite_dominating(const LimitDescriptor& d) const override {
    switch (v_shape(d)) {
      case Shape::Empty: return true;
      case Shape::Root: return true;
      case Shape::Leaves: return false;
      case Shape::All: return rev_;  // a_0 is the top when reversed
    }
    return std::nullopt;
  }
  std::optional<bool> finite_codominating(const LimitDescriptor& d) const override {
    switch (v_shape(d)) {
      case Shape::All: return true;       // W = ∅
      case Shape::Empty: return !rev_;    // W = A: a_0 is the bottom unless reversed
      case Shape::Root: return false;     // W = leaves
      case Shape::Leaves: return true;    // W = {a_0}
    }
    return std::nullopt;
  }
  std::unique_ptr<CofinalityAdapter> opposite() const override { return std::make_unique<Star>(!rev_); }
  std::unique_ptr<CofinalityAdapter> clone() const override { return std::make_unique<Star>(rev_); }

 protected:
  Relation base_relation(std::size_t i, std::size_t j) const override {
    if (i == 0) return Relation::LT;
    if (j == 0) return Relation::GT;
    return Relation::INC;
  }
  ChainRank base_down(std::size_t i) const override { return i == 0 ? 1 : 2; }
  ChainRank base_up(std::size_t i) const override { return i == 0 ? 2 : 1; }

 private:
  enum class Shape { Empty, Root, Leaves, All };
  Shape v_shape(const LimitDescriptor& d) const {
    if (d.rule == LimitRule::DownFinite) return Shape::All;
    if (d.rule == LimitRule::UpInfinite) return Shape::Empty;
    if (d.n == 0) return Shape::Empty;
    if (d.n >= 2) return Shape::All;
    return rev_ ? Shape::Leaves : Shape::Root;
  }
};

// Three infinite antichain levels (index mod 3). Cross-level relations go
// upward only and are partly decided by a fixed hash; the forced edges keep
// every chain rank exact.
class RandomLevels final : public Builtin {
 public:
  RandomLevels(bool rev, std::uint64_t seed) : Builtin(rev), seed_(seed) {}
  std::string name() const override { return "random-fixed-seed"; }
  bool chain_ranks_unbounded() const override { return false; }
  std::optional<std::uint64_t> least_infinite_level() const override { return 1; }
  std::size_t generator_count() const override { return 0; }
  std::size_t apply(std::size_t, std::size_t i) const override { return i; }
  std::size_t apply_inverse(std::size_t, std::size_t i) const override { return i; }
  std::optional<bool> finite_dominating(const LimitDescriptor& d) const override { return v_empty(d); }
  std::optional<bool> finite_codominating(const LimitDescriptor& d) const override { return v_all(d); }
  std::unique_ptr<CofinalityAdapter> opposite() const override {
    return std::make_unique<RandomLevels>(!rev_, seed_);
  }
  std::unique_ptr<CofinalityAdapter> clone() const override { return std::make_unique<RandomLevels>(rev_, seed_); }

 protected:
  Relation base_relation(std::size_t i, std::size_t j) const override {
    const std::size_t li = i % 3, lj = j % 3;
    if (li == lj) return Relation::INC;
    if (li > lj) return flip(base_relation(j, i));
    return lower(i, j) ? Relation::LT : Relation::INC;
  }
  ChainRank base_down(std::size_t i) const override { return i % 3 + 1; }
  ChainRank base_up(std::size_t i) const override { return 3 - i % 3; }

 private:
  bool bit(std::size_t i, std::size_t j) const { return (splitmix(seed_ ^ splitmix(i * 1000003ULL + j)) & 1U) != 0; }
  // i below j, with level(i) < level(j)
  bool lower(std::size_t i, std::size_t j) const {
    const std::size_t li = i % 3, lj = j % 3;
    if (li == 0 && lj == 2) return true;
    if (li == 0) return i == 0 || j == i + 1 || bit(i, j);
    return i == 1 || j == 2 || j == i + 1 || bit(i, j);
  }
  bool v_empty(const LimitDescriptor& d) const {
    return d.rule == LimitRule::UpInfinite || (d.rule == LimitRule::DownLe && d.n == 0);
  }
  bool v_all(const LimitDescriptor& d) const {
    return d.rule == LimitRule::DownFinite || (d.rule == LimitRule::DownLe && d.n >= 3);
  }

  std::uint64_t seed_;
};

class FiniteHost final : public CofinalityAdapter {
 public:
  explicit FiniteHost(FinitePoset p, bool rev = false) : p_(std::move(p)), rev_(rev) {}
  std::string name() const override { return "finite"; }
  bool infinite() const override { return false; }
  bool reversed() const override { return rev_; }
  Relation relation(std::size_t i, std::size_t j) const override {
    Relation r = p_.rel_at(i, j);
    return rev_ ? flip(r) : r;
  }
  ChainRank chain_down(std::size_t i) const override { return rank(i, !rev_); }
  ChainRank chain_up(std::size_t i) const override { return rank(i, rev_); }
  bool chain_ranks_unbounded() const override { return false; }
  std::optional<std::uint64_t> least_infinite_level() const override { return std::nullopt; }
  std::size_t generator_count() const override { return 0; }
  std::size_t apply(std::size_t, std::size_t i) const override { return i; }
  std::size_t apply_inverse(std::size_t, std::size_t i) const override { return i; }
  std::optional<bool> finite_dominating(const LimitDescriptor&) const override { return std::nullopt; }
  std::optional<bool> finite_codominating(const LimitDescriptor&) const override { return std::nullopt; }
  std::unique_ptr<CofinalityAdapter> opposite() const override { return std::make_unique<FiniteHost>(p_, !rev_); }
  std::unique_ptr<CofinalityAdapter> clone() const override { return std::make_unique<FiniteHost>(p_, rev_); }

 private:
  std::uint64_t rank(std::size_t i, bool down) const {
    std::uint64_t best = 1;
    const Bitset& row = down ? p_.below_row(i) : p_.above_row(i);
    for_each_bit(row, [&](std::size_t k) { best = std::max(best, rank(k, down) + 1); });
    return best;
  }

  FinitePoset p_;
  bool rev_;
};

void require_infinite(const CofinalityAdapter& a) {
  if (!a.infinite()) throw Error(ErrorCode::FiniteHost, "limit operations need an infinite host");
}

}  // namespace

std::vector<std::string> builtin_adapter_names() {
  return {"antichain", "chain-up", "chain-down", "two-chains", "star", "random-fixed-seed"};
}

std::unique_ptr<CofinalityAdapter> make_adapter(std::string_view name) {
  if (name == "antichain") return std::make_unique<Antichain>(false);
  if (name == "chain-up") return std::make_unique<Chain>(false);
  if (name == "chain-down") return std::make_unique<Chain>(true);
  if (name == "two-chains") return std::make_unique<TwoChains>(false);
  if (name == "star") return std::make_unique<Star>(false);
  if (name == "random-fixed-seed") return std::make_unique<RandomLevels>(false, 0x5eed);
  throw Error(ErrorCode::BadConfig, "unknown adapter '" + std::string(name) + "'");
}

std::unique_ptr<CofinalityAdapter> make_finite_adapter(const FinitePoset& p) {
  return std::make_unique<FiniteHost>(p);
}

std::vector<std::size_t> adapter_orbit(const CofinalityAdapter& a, std::size_t i, std::size_t bound) {
  std::vector<std::size_t> orbit{i};
  std::unordered_set<std::size_t> seen{i};
  std::deque<std::size_t> queue{i};
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < a.generator_count(); ++g) {
      for (std::size_t y : {a.apply(g, x), a.apply_inverse(g, x)}) {
        if (seen.insert(y).second) {
          if (orbit.size() >= bound) throw Error(ErrorCode::OrbitBudgetExhausted, "host orbit too large");
          orbit.push_back(y);
          queue.push_back(y);
        }
      }
    }
  }
  return orbit;
}

FinitePoset adapter_truncation(const CofinalityAdapter& a, std::size_t n) {
  FinitePoset p;
  for (std::size_t j = 0; j < n; ++j) {
    Bitset below(j), above(j);
    for (std::size_t i = 0; i < j; ++i) {
      Relation r = a.relation(i, j);
      if (r == Relation::LT) below.set(i);
      else if (r == Relation::GT) above.set(i);
    }
    p.append(j, below, above);
  }
  return p;
}

ValidTriple descriptor_triple(const CofinalityAdapter& a, const LimitDescriptor& d, std::size_t n) {
  ValidTriple t;
  for (std::size_t i = 0; i < n; ++i) (a.in_V(d, i) ? t.V : t.W).push_back(i);
  return t;
}

bool is_upper_limit(const CofinalityAdapter& a, const LimitDescriptor& d) {
  require_infinite(a);
  auto answer = a.finite_dominating(d);
  if (!answer) throw Error(ErrorCode::OracleUnavailable, a.name() + " cannot decide finite dominating sets");
  return !*answer;
}

bool is_lower_limit(const CofinalityAdapter& a, const LimitDescriptor& d) {
  require_infinite(a);
  auto answer = a.finite_codominating(d);
  if (!answer) throw Error(ErrorCode::OracleUnavailable, a.name() + " cannot decide finite codominating sets");
  return !*answer;
}

bool descriptor_is_fixed(const CofinalityAdapter& a, const LimitDescriptor& d, std::size_t n) {
  for (std::size_t g = 0; g < a.generator_count(); ++g)
    for (std::size_t i = 0; i < n; ++i)
      if (a.in_V(d, i) != a.in_V(d, a.apply(g, i))) return false;
  return true;
}

FixedLimit fixed_limit(const CofinalityAdapter& a) {
  require_infinite(a);
  FixedLimit out;
  if (a.chain_ranks_unbounded()) {
    out.descriptor = {LimitRule::DownFinite, 0};
  } else {
    auto n = a.least_infinite_level();
    if (!n) throw Error(ErrorCode::OracleUnavailable, a.name() + " has no infinite rank level");
    out.descriptor = {LimitRule::DownLe, *n};
  }
  if (!descriptor_is_fixed(a, out.descriptor))
    throw Error(ErrorCode::Internal, "limit descriptor is not generator-fixed");
  if (is_upper_limit(a, out.descriptor)) {
    out.mode = LimitMode::Upper;
  } else {
    if (!is_lower_limit(a, out.descriptor))
      throw Error(ErrorCode::Internal, "descriptor is neither an upper nor a lower limit");
    out.mode = LimitMode::NeedsOpReduction;
  }
  return out;
}

ReducedHost reduce_to_upper(const CofinalityAdapter& a, const FixedLimit& fl) {
  if (fl.mode == LimitMode::Upper) return {a.clone(), fl.descriptor};
  if (fl.descriptor.rule != LimitRule::DownFinite)
    throw Error(ErrorCode::WrongLimitMode, "only the unbounded-rank case reduces through the opposite");
  // p = (∅, V, W) over A gives shift_down(op_type(p)) = (∅, W, V) over A^op,
  // and W = {a | c_a = ∞} is named by the rank of the opposite's up-chains.
  ReducedHost r{a.opposite(), {LimitRule::UpInfinite, 0}};
  if (!is_upper_limit(*r.adapter, r.descriptor))
    throw Error(ErrorCode::Internal, "reduced descriptor is not an upper limit");
  return r;
}

}  // namespace forge
