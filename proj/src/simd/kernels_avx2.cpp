#include "forge/simd/kernels.hpp"

#include <immintrin.h>

#include <bit>

namespace forge::simd {
namespace avx2 {
namespace {

inline __m256i load(const std::uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}
inline void store(std::uint64_t* p, __m256i v) {
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v);
}

void or_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_or_si256(load(dst + i), load(src + i)));
  for (; i < n; ++i) dst[i] |= src[i];
}

void and_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_and_si256(load(dst + i), load(src + i)));
  for (; i < n; ++i) dst[i] &= src[i];
}

void andnot_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
  std::size_t i = 0;
  // _mm256_andnot_si256(a, b) computes ~a & b
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_andnot_si256(load(src + i), load(dst + i)));
  for (; i < n; ++i) dst[i] &= ~src[i];
}

bool intersects(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i x = _mm256_and_si256(load(a + i), load(b + i));
    if (!_mm256_testz_si256(x, x)) return true;
  }
  for (; i < n; ++i)
    if (a[i] & b[i]) return true;
  return false;
}

bool equal(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i x = _mm256_xor_si256(load(a + i), load(b + i));
    if (!_mm256_testz_si256(x, x)) return false;
  }
  for (; i < n; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

bool subset(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // testc(b, a) is 1 iff (~b & a) == 0
    if (!_mm256_testc_si256(load(b + i), load(a + i))) return false;
  }
  for (; i < n; ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

std::size_t popcount(const std::uint64_t* a, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += static_cast<std::size_t>(_mm_popcnt_u64(a[i]));
  return c;
}

}  // namespace

const Kernels& table() {
  static const Kernels k{"avx2", or_into, and_into, andnot_into,
                         intersects, equal, subset, popcount};
  return k;
}

}  // namespace avx2
}  // namespace forge::simd
