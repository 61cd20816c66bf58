#include <doctest.h>

#include <random>
#include <vector>

#include "forge/bitset.hpp"
#include "forge/simd/kernels.hpp"

using namespace forge;

namespace {

std::vector<std::uint64_t> random_words(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution bit(density);
  std::vector<std::uint64_t> w(n, 0);
  for (auto& x : w)
    for (int b = 0; b < 64; ++b)
      if (bit(rng)) x |= std::uint64_t{1} << b;
  return w;
}

void check_equivalent(const simd::Kernels& ref, const simd::Kernels& alt) {
  std::mt19937_64 rng(12345);
  for (std::size_t words : {0, 1, 3, 4, 5, 7, 8, 9, 17, 64, 101}) {
    for (double density : {0.0, 0.01, 0.5, 1.0}) {
      auto a = random_words(rng, words, density);
      auto b = random_words(rng, words, density);
      CHECK(ref.intersects(a.data(), b.data(), words) == alt.intersects(a.data(), b.data(), words));
      CHECK(ref.equal(a.data(), b.data(), words) == alt.equal(a.data(), b.data(), words));
      CHECK(ref.equal(a.data(), a.data(), words) == alt.equal(a.data(), a.data(), words));
      CHECK(ref.subset(a.data(), b.data(), words) == alt.subset(a.data(), b.data(), words));
      auto sub = a;
      for (std::size_t k = 0; k < words; ++k) sub[k] &= b[k];
      CHECK(alt.subset(sub.data(), a.data(), words));
      CHECK(ref.popcount(a.data(), words) == alt.popcount(a.data(), words));

      auto r1 = a, r2 = a;
      ref.or_into(r1.data(), b.data(), words);
      alt.or_into(r2.data(), b.data(), words);
      CHECK(r1 == r2);
      r1 = a;
      r2 = a;
      ref.and_into(r1.data(), b.data(), words);
      alt.and_into(r2.data(), b.data(), words);
      CHECK(r1 == r2);
      r1 = a;
      r2 = a;
      ref.andnot_into(r1.data(), b.data(), words);
      alt.andnot_into(r2.data(), b.data(), words);
      CHECK(r1 == r2);
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels match a word-by-word oracle") {
  const auto& k = simd::scalar_kernels();
  std::uint64_t a[3] = {0b1010, 0, 1ULL << 63};
  std::uint64_t b[3] = {0b0110, 0, 0};
  CHECK(k.intersects(a, b, 3));
  CHECK_FALSE(k.subset(a, b, 3));
  CHECK(k.popcount(a, 3) == 3);
  k.andnot_into(a, b, 3);
  CHECK(a[0] == 0b1000);
}

TEST_CASE("avx2 kernels are equivalent to the scalar reference") {
  const simd::Kernels* avx = simd::avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 not available on this machine; equivalence check skipped");
    return;
  }
  check_equivalent(simd::scalar_kernels(), *avx);
}

TEST_CASE("bitset results do not depend on the active table") {
  std::mt19937_64 rng(7);
  std::vector<std::pair<Bitset, Bitset>> cases;
  for (std::size_t bits : {1, 63, 64, 65, 300, 1000}) {
    Bitset a(bits), b(bits + 17);
    for (std::size_t i = 0; i < bits; ++i) {
      if (rng() % 3 == 0) a.set(i);
      if (rng() % 3 == 0) b.set(i);
    }
    cases.emplace_back(a, b);
  }
  auto run = [&]() {
    std::vector<std::size_t> out;
    for (auto [a, b] : cases) {
      out.push_back(a.intersects(b));
      out.push_back(a.is_subset_of(b));
      out.push_back(a.count());
      Bitset c = a;
      c |= b;
      out.push_back(c.count());
      c = a;
      c &= b;
      out.push_back(c.count());
      c = a;
      c.and_not(b);
      out.push_back(c.count());
      out.push_back(a.find_next(5));
    }
    return out;
  };
  const simd::Kernels& before = simd::active();
  simd::set_active(simd::scalar_kernels());
  auto scalar = run();
  if (simd::avx2_kernels() != nullptr) {
    simd::set_active(*simd::avx2_kernels());
    CHECK(run() == scalar);
  }
  simd::set_active(before);
}
