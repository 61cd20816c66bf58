#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "forge/simd/kernels.hpp"

namespace forge {

// Growable bitset over element indices. Bulk operations go through the
// runtime-selected word kernels.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const noexcept { return bits_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  const std::uint64_t* data() const noexcept { return words_.data(); }
  std::uint64_t* data() noexcept { return words_.data(); }

  void resize(std::size_t bits);

  bool test(std::size_t i) const noexcept {
    return i < bits_ && ((words_[i >> 6] >> (i & 63)) & 1U);
  }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool v) noexcept { v ? set(i) : reset(i); }

  // Operands may differ in size; the shorter one is treated as zero-padded.
  Bitset& operator|=(const Bitset& o);
  Bitset& operator&=(const Bitset& o);
  Bitset& and_not(const Bitset& o);

  bool intersects(const Bitset& o) const;
  bool is_subset_of(const Bitset& o) const;
  bool none() const;
  std::size_t count() const;

  // Index of the first set bit at or after `from`, or size() if none.
  std::size_t find_next(std::size_t from) const noexcept;
  std::size_t find_first() const noexcept { return find_next(0); }

  std::vector<std::size_t> indices() const;

  friend bool operator==(const Bitset& a, const Bitset& b);

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

template <typename Fn>
void for_each_bit(const Bitset& b, Fn&& fn) {
  const std::uint64_t* w = b.data();
  for (std::size_t k = 0; k < b.word_count(); ++k) {
    std::uint64_t x = w[k];
    while (x != 0) {
      const auto bit = static_cast<std::size_t>(__builtin_ctzll(x));
      fn(k * 64 + bit);
      x &= x - 1;
    }
  }
}

}  // namespace forge
