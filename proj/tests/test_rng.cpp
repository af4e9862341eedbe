#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "tlc/rng.hpp"

using tlc::SplitMix64;

// Expected values frozen from tests/oracles/reference_rng.py.

TEST_CASE("splitmix64 known outputs, seed 0") {
  SplitMix64 rng(0);
  CHECK(rng.next_u64() == 0xE220A8397B1DCDAFull);
  CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ull);
  CHECK(rng.next_u64() == 0x06C45D188009454Full);
  CHECK(rng.next_u64() == 0xF88BB8A8724C81ECull);
  CHECK(rng.next_u64() == 0x1B39896A51A8749Bull);
}

TEST_CASE("splitmix64 known outputs, seed 42") {
  SplitMix64 rng(42);
  CHECK(rng.next_u64() == 0xBDD732262FEB6E95ull);
  CHECK(rng.next_u64() == 0x28EFE333B266F103ull);
  CHECK(rng.next_u64() == 0x47526757130F9F52ull);
}

TEST_CASE("next_below sequence, seed 7") {
  SplitMix64 rng(7);
  const std::vector<std::uint64_t> expected = {3, 0, 0, 3, 4, 3, 4, 0};
  for (const std::uint64_t e : expected) {
    CHECK(rng.next_below(6) == e);
  }
}

TEST_CASE("unit doubles, seed 9") {
  SplitMix64 rng(9);
  CHECK(rng.next_unit() == doctest::Approx(0.6823627349789958).epsilon(1e-15));
  CHECK(rng.next_unit() == doctest::Approx(0.7506948929582787).epsilon(1e-15));
  CHECK(rng.next_unit() == doctest::Approx(0.2653224405991833).epsilon(1e-15));
  CHECK(rng.next_unit() == doctest::Approx(0.7848136924650979).epsilon(1e-15));
}

TEST_CASE("gaussians, seed 5") {
  SplitMix64 rng(5);
  CHECK(rng.next_gaussian() ==
        doctest::Approx(0.01997910663403584).epsilon(1e-12));
  CHECK(rng.next_gaussian() ==
        doctest::Approx(1.3856395252820701).epsilon(1e-12));
  CHECK(rng.next_gaussian() ==
        doctest::Approx(-1.3376260697055289).epsilon(1e-12));
  CHECK(rng.next_gaussian() ==
        doctest::Approx(-0.17012383061332137).epsilon(1e-12));
}

TEST_CASE("gaussian moments") {
  SplitMix64 rng(1234);
  const int n = 20000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("shuffle golden permutation, seed 123") {
  std::vector<int> v = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  SplitMix64 rng(123);
  rng.shuffle(v);
  CHECK(v == std::vector<int>{7, 3, 4, 9, 8, 2, 1, 0, 6, 5});
}

TEST_CASE("shuffle is a permutation") {
  std::vector<int> v(257);
  for (int i = 0; i < 257; ++i) v[static_cast<std::size_t>(i)] = i;
  SplitMix64 rng(99);
  rng.shuffle(v);
  std::set<int> seen(v.begin(), v.end());
  CHECK(seen.size() == 257);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 256);
}

TEST_CASE("combine_seed goldens and distinctness") {
  CHECK(tlc::combine_seed(1, 2) == 0xF893A2EEFB32555Eull);
  CHECK(tlc::combine_seed(tlc::combine_seed(77, 1), 3) ==
        0x769F566BB6CB5F5Full);

  std::set<std::uint64_t> seeds;
  for (std::uint64_t base = 0; base < 10; ++base) {
    for (std::uint64_t stream = 0; stream < 10; ++stream) {
      seeds.insert(tlc::combine_seed(base, stream));
    }
  }
  CHECK(seeds.size() == 100);
}
