#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cgc/errors.hpp"
#include "cgc/normal.hpp"
#include "cgc/rng.hpp"

using namespace cgc;

TEST_SUITE_BEGIN("rng");

// Known-answer vectors for Philox 4x64 (10 rounds), captured from an
// independent implementation of the same algorithm. Each case lists the
// outputs of the block function for the given counter and for counter+1.
struct PhiloxKat {
  std::array<std::uint64_t, 4> counter;
  std::array<std::uint64_t, 2> key;
  std::array<std::uint64_t, 8> expect;
};

static const PhiloxKat kKat[] = {
    {{1, 0, 0, 0},
     {0, 0},
     {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
      0x907d7a052fd5b4dcULL, 0x809bf322883987c3ULL, 0x471128b9e807f7ddULL,
      0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL}},
    {{1, 0, 0, 0},
     {0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL},
     {0xd96148ed4eef3177ULL, 0x3756c9977974e2e4ULL, 0xaca97084472822a9ULL,
      0xf84393111bc816fcULL, 0xafeacafa58106bc2ULL, 0x8ceec2cd5d66be03ULL,
      0xf35d32a580766947ULL, 0x71552ce89be91f93ULL}},
    {{2, 0, 0, 0},
     {0x2a, 0x7},
     {0x69c633ee791df6b3ULL, 0x89327f7a8f0127a4ULL, 0x1ed8260458996ff6ULL,
      0x4299f7433fb1683eULL, 0x38054e68eaff7c8aULL, 0x90569b868bcaa6a1ULL,
      0x4fdbc934ea181f3dULL, 0x4788be1902403fa4ULL}},
    {{0xdeadbef0, 1, 2, 3},
     {0x9e3779b97f4a7c15ULL, 0xbb67ae8584caa73bULL},
     {0x63ff4abc7a7adb3aULL, 0x392b50a8127b62a5ULL, 0xa5d5cd5399beaeecULL,
      0x99f2558f9cceb461ULL, 0x8092919eefbed5f5ULL, 0xe4919402e6ddc113ULL,
      0xe4554975c91978d6ULL, 0x1b2dad7f2a94e57cULL}},
};

TEST_CASE("philox 4x64-10 block function matches the known answers") {
  for (const PhiloxKat& kat : kKat) {
    const auto first = detail::philox4x64(kat.counter, kat.key);
    auto next_counter = kat.counter;
    for (int w = 0; w < 4; ++w)
      if (++next_counter[w] != 0) break;
    const auto second = detail::philox4x64(next_counter, kat.key);
    for (int i = 0; i < 4; ++i) {
      CHECK(first[i] == kat.expect[i]);
      CHECK(second[i] == kat.expect[4 + i]);
    }
  }
}

TEST_CASE("stream draws follow the block sequence") {
  RngStream s(0, 0);
  for (int i = 0; i < 8; ++i) CHECK(s.next_u64() == kKat[0].expect[i]);

  RngStream keyed(0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL);
  for (int i = 0; i < 8; ++i) CHECK(keyed.next_u64() == kKat[1].expect[i]);
}

TEST_CASE("identical (seed, stream) reproduce; different streams diverge") {
  RngStream a(123, 45), b(123, 45);
  for (int i = 0; i < 10000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  RngStream c(123, 46), d(124, 45);
  int equal_c = 0, equal_d = 0;
  RngStream a2(123, 45);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = a2.next_u64();
    equal_c += v == c.next_u64();
    equal_d += v == d.next_u64();
  }
  CHECK(equal_c < 5);
  CHECK(equal_d < 5);

  // substream restarts the stream identity deterministically
  RngStream base(9, 1);
  RngStream s1 = base.substream(77);
  RngStream s2(9, 77);
  for (int i = 0; i < 100; ++i) CHECK(s1.next_u64() == s2.next_u64());
}

TEST_CASE("uniform ranges and moments") {
  RngStream s(2024, 0);
  double sum = 0.0;
  double lo = 1.0, hi = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);

  for (int i = 0; i < 200000; ++i) {
    const double u = s.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("below is in range, unbiased-looking, and rejects bound 0") {
  RngStream s(5, 5);
  CHECK_THROWS_AS(s.below(0), DataError);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const std::uint64_t v = s.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(c == doctest::Approx(10000).epsilon(0.06));
  // powers of two take the mask path
  for (int i = 0; i < 1000; ++i) REQUIRE(s.below(8) < 8);
}

TEST_CASE("normal draws have the right moments and construction") {
  RngStream s(7, 3);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.01));

  // one uniform per normal, mapped through the quantile function
  RngStream a(77, 8), b(77, 8);
  for (int i = 0; i < 1000; ++i) CHECK(a.normal() == normal_quantile(b.uniform_open()));
}

TEST_CASE("exponential rates give the right means") {
  RngStream s(13, 0);
  const int n = 100000;
  double s1 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) s1 += s.exponential(1.0);
  for (int i = 0; i < n; ++i) s4 += s.exponential(4.0);
  CHECK(s1 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s4 / n == doctest::Approx(0.25).epsilon(0.02));
  CHECK_THROWS_AS(s.exponential(0.0), DataError);
  CHECK_THROWS_AS(s.exponential(-1.0), DataError);
}

// Reference quantiles from an independent high-precision implementation.
static const double kQuantileRef[][2] = {
    {1e-12, -7.034483825301131},   {1e-09, -5.9978070150076865},
    {1e-06, -4.753424308822899},   {0.001, -3.090232306167813},
    {0.01, -2.3263478740408408},   {0.025, -1.9599639845400545},
    {0.05, -1.6448536269514729},   {0.1, -1.2815515655446004},
    {0.25, -0.6744897501960817},   {0.4, -0.2533471031357997},
    {0.5, 0.0},                    {0.6, 0.2533471031357997},
    {0.75, 0.6744897501960817},    {0.9, 1.2815515655446004},
    {0.95, 1.6448536269514722},    {0.975, 1.959963984540054},
    {0.99, 2.3263478740408408},    {0.999, 3.090232306167813},
    {0.999999, 4.753424308817087}, {0.999999999, 5.997807019601637},
};

static const double kCdfRef[][2] = {
    {-8.0, 6.22096057427174e-16},
    {-3.0, 0.0013498980316300933},
    {-1.959963984540054, 0.025},
    {-1.0, 0.15865525393145707},
    {0.0, 0.5},
    {0.5, 0.6914624612740131},
    {1.0, 0.8413447460685429},
    {1.6448536269514722, 0.95},
    {2.5, 0.9937903346742238},
    {5.0, 0.9999997133484281},
};

TEST_CASE("normal quantile matches reference values") {
  for (const auto& ref : kQuantileRef) {
    const double got = normal_quantile(ref[0]);
    CHECK(got == doctest::Approx(ref[1]).epsilon(1e-12).scale(std::max(1.0, std::fabs(ref[1]))));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), DataError);
  CHECK_THROWS_AS(normal_quantile(1.0), DataError);
  CHECK(upper_quantile(0.05) == -normal_quantile(0.05));
  CHECK(upper_quantile(0.05) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
}

TEST_CASE("normal cdf matches reference values and inverts the quantile") {
  for (const auto& ref : kCdfRef)
    CHECK(normal_cdf(ref[0]) == doctest::Approx(ref[1]).epsilon(1e-12));
  for (double p : {0.001, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
}

TEST_SUITE_END();
