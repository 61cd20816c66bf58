#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Word-level kernels behind forge::Bitset. Relation rows, closure sweeps and
// fingerprint comparisons all bottom out here. A scalar reference table is
// always available; an AVX2 table is selected at runtime when the CPU has it.
namespace forge::simd {

struct Kernels {
  std::string_view name;
  // dst |= src
  void (*or_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
  // dst &= src
  void (*and_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
  // dst &= ~src
  void (*andnot_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
  bool (*intersects)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  bool (*equal)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  // true iff a ⊆ b
  bool (*subset)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  std::size_t (*popcount)(const std::uint64_t* a, std::size_t words);
};

const Kernels& scalar_kernels();

// nullptr when the AVX2 translation unit was not built or the CPU lacks AVX2.
const Kernels* avx2_kernels();

// The table used by Bitset. Honours FORGE_SIMD=scalar|avx2 on first use.
const Kernels& active();

// Test hook: force a table for the remainder of the process.
void set_active(const Kernels& k);

}  // namespace forge::simd
