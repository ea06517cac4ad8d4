#include <doctest.h>

#include "spectral/progression.hpp"

using namespace spectral;

namespace {

// Exhaustive bitmask oracle: a mask is 3AP-free iff m & (m >> d) & (m >> 2d) == 0 for all d.
int bitmask_R(int n) {
  int best = 0;
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) {
    bool ok = true;
    for (int d = 1; 2 * d < n && ok; ++d) ok = (m & (m >> d) & (m >> (2 * d))) == 0;
    if (ok) best = std::max(best, __builtin_popcount(m));
  }
  return best;
}

}  // namespace

TEST_CASE("3AP checker") {
  CHECK(is_3ap_free({}));
  CHECK(is_3ap_free({1, 2, 4, 5}));
  CHECK_FALSE(is_3ap_free({1, 2, 3}));
  CHECK_FALSE(is_3ap_free({1, 4, 7, 20}));
}

TEST_CASE("exact R(N)") {
  const int oracle[30] = {1, 2, 2, 3, 4, 4, 4, 4, 5, 5, 6, 6, 7, 8, 8, 8, 8, 8, 8, 9, 9, 9, 9, 10, 10, 11, 11, 11, 11, 12};
  for (int n = 1; n <= 30; ++n) {
    const auto r = exact_R(n);
    CHECK(r.value == oracle[n - 1]);
    CHECK(static_cast<int>(r.witness.size()) == r.value);
    CHECK(is_3ap_free(r.witness));
    CHECK(r.witness.back() <= n);
  }
  for (int n = 1; n <= 16; ++n) CHECK(exact_R(n).value == bitmask_R(n));
  CHECK_THROWS_AS(exact_R(41), Error);
}

TEST_CASE("Behrend construction") {
  std::size_t last = 0;
  for (const std::int64_t n : {8, 30, 101, 500, 1000, 5000, 10000, 50000}) {
    const auto b = behrend_construct(n);
    CHECK(is_3ap_free(b.set));
    CHECK(b.set.front() >= 1);
    CHECK(b.set.back() <= n);
    CHECK(b.set.size() >= last);
    last = b.set.size();
  }
  CHECK_THROWS_AS(behrend_construct(7), Error);
  const auto g = embedding_group(100, {1, 1, -2});
  CHECK(g.order() == 503);
}
