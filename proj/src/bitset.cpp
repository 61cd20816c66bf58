#include "forge/bitset.hpp"

#include <algorithm>

#include "forge/error.hpp"

namespace forge {

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::SizeBound: return "SizeBound";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::InvalidTriple: return "InvalidTriple";
    case ErrorCode::HostMismatch: return "HostMismatch";
    case ErrorCode::NotInLambda: return "NotInLambda";
    case ErrorCode::OracleUnavailable: return "OracleUnavailable";
    case ErrorCode::FiniteHost: return "FiniteHost";
    case ErrorCode::InconsistentWithK: return "InconsistentWithK";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ForcedZConflictsAvoid: return "ForcedZConflictsAvoid";
    case ErrorCode::WrongLimitMode: return "WrongLimitMode";
    case ErrorCode::NotAcceptable: return "NotAcceptable";
    case ErrorCode::OrbitBudgetExhausted: return "OrbitBudgetExhausted";
    case ErrorCode::NotAValidTriple: return "NotAValidTriple";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::CorruptArtifact: return "CorruptArtifact";
    case ErrorCode::StageOutOfRange: return "StageOutOfRange";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

void Bitset::resize(std::size_t bits) {
  words_.resize((bits + 63) / 64, 0);
  if (bits < bits_ && (bits & 63) != 0) words_.back() &= (std::uint64_t{1} << (bits & 63)) - 1;
  bits_ = bits;
}

Bitset& Bitset::operator|=(const Bitset& o) {
  if (o.bits_ > bits_) resize(o.bits_);
  simd::active().or_into(words_.data(), o.words_.data(), o.words_.size());
  return *this;
}

Bitset& Bitset::operator&=(const Bitset& o) {
  const std::size_t n = std::min(words_.size(), o.words_.size());
  simd::active().and_into(words_.data(), o.words_.data(), n);
  std::fill(words_.begin() + static_cast<std::ptrdiff_t>(n), words_.end(), 0);
  return *this;
}

Bitset& Bitset::and_not(const Bitset& o) {
  const std::size_t n = std::min(words_.size(), o.words_.size());
  simd::active().andnot_into(words_.data(), o.words_.data(), n);
  return *this;
}

bool Bitset::intersects(const Bitset& o) const {
  return simd::active().intersects(words_.data(), o.words_.data(),
                                   std::min(words_.size(), o.words_.size()));
}

bool Bitset::is_subset_of(const Bitset& o) const {
  const std::size_t n = std::min(words_.size(), o.words_.size());
  if (!simd::active().subset(words_.data(), o.words_.data(), n)) return false;
  for (std::size_t i = n; i < words_.size(); ++i)
    if (words_[i] != 0) return false;
  return true;
}

bool Bitset::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t Bitset::count() const { return simd::active().popcount(words_.data(), words_.size()); }

std::size_t Bitset::find_next(std::size_t from) const noexcept {
  if (from >= bits_) return bits_;
  std::size_t k = from >> 6;
  std::uint64_t x = words_[k] & (~std::uint64_t{0} << (from & 63));
  while (true) {
    if (x != 0) return std::min(bits_, k * 64 + static_cast<std::size_t>(__builtin_ctzll(x)));
    if (++k >= words_.size()) return bits_;
    x = words_[k];
  }
}

std::vector<std::size_t> Bitset::indices() const {
  std::vector<std::size_t> out;
  for_each_bit(*this, [&](std::size_t i) { out.push_back(i); });
  return out;
}

bool operator==(const Bitset& a, const Bitset& b) {
  const std::size_t n = std::min(a.words_.size(), b.words_.size());
  if (!simd::active().equal(a.words_.data(), b.words_.data(), n)) return false;
  const auto& longer = a.words_.size() > n ? a.words_ : b.words_;
  for (std::size_t i = n; i < longer.size(); ++i)
    if (longer[i] != 0) return false;
  return true;
}

}  // namespace forge
