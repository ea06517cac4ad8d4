#include "spectral/progression.hpp"

#include <algorithm>
#include <cstdlib>

#include "spectral/error.hpp"

namespace spectral {

bool is_3ap_free(const IntSet& s) {
  if (s.empty()) return true;
  const std::int64_t top = s.back();
  std::vector<std::uint8_t> in(static_cast<std::size_t>(top + 1), 0);
  for (const auto x : s) in[static_cast<std::size_t>(x)] = 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const std::int64_t sum = s[i] + s[j];
      if (sum % 2 == 0 && in[static_cast<std::size_t>(sum / 2)]) return false;
    }
  return true;
}

namespace {

/// Digit vectors with entries < d and k digits in base 2d - 1 whose value + 1 is
/// at most n, visited through their value and squared norm.
template <typename Visit>
void walk_digits(int d, int k, std::int64_t n, Visit&& visit) {
  const std::int64_t base = 2 * d - 1;
  std::vector<std::int64_t> power(static_cast<std::size_t>(k), 1);
  for (int j = 1; j < k; ++j) power[static_cast<std::size_t>(j)] = power[static_cast<std::size_t>(j - 1)] * base;
  // Most significant digit first so whole subtrees above n are skipped.
  const auto rec = [&](auto&& self, int j, std::int64_t value, std::int64_t norm) -> void {
    if (j < 0) {
      visit(value + 1, norm);
      return;
    }
    for (std::int64_t a = 0; a < d; ++a) {
      const std::int64_t v = value + a * power[static_cast<std::size_t>(j)];
      if (v + 1 > n) break;
      self(self, j - 1, v, norm + a * a);
    }
  };
  rec(rec, k - 1, 0, 0);
}

}  // namespace

BehrendSet behrend_construct(std::int64_t n) {
  if (n < 8 || n > 1000000) throw Error(ErrorKind::OutOfRange, "Behrend construction needs 8 <= N <= 10^6");
  BehrendSet best;
  std::size_t best_size = 0;
  // Candidates are (d, k) with k >= 2 whose top digit can reach d - 1 below n,
  // a condition monotone in n.
  for (int k = 2;; ++k) {
    bool any = false;
    for (int d = 2;; ++d) {
      const std::int64_t base = 2 * d - 1;
      std::int64_t low = d - 1;
      for (int j = 1; j < k && low <= n; ++j) low *= base;
      if (low > n) break;
      any = true;
      std::vector<std::size_t> shells(static_cast<std::size_t>(k) * (d - 1) * (d - 1) + 1, 0);
      walk_digits(d, k, n, [&](std::int64_t, std::int64_t norm) { ++shells[static_cast<std::size_t>(norm)]; });
      for (std::size_t r = 0; r < shells.size(); ++r)
        if (shells[r] > best_size) {
          best_size = shells[r];
          best.params = {d, k, static_cast<std::int64_t>(r)};
        }
    }
    if (!any) break;
  }
  best.set.clear();
  walk_digits(best.params.digits_below, best.params.length, n, [&](std::int64_t v, std::int64_t norm) {
    if (norm == best.params.radius) best.set.push_back(v);
  });
  std::sort(best.set.begin(), best.set.end());
  return best;
}

ExactR exact_R(int n) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "N must be positive");
  if (n > 40) throw Error(ErrorKind::TooLarge, "exact R(N) is limited to N <= 40");
  // r[m] = R(m); a set in {x..N} has at most R(N - x + 1) elements.
  std::vector<int> r(static_cast<std::size_t>(n + 1), 0);
  ExactR out;
  for (int m = 1; m <= n; ++m) {
    int best = 0;
    std::uint64_t best_mask = 0;
    // chosen and forbidden are bitmasks over {1..m} (bit x).
    const auto rec = [&](auto&& self, int x, int size, std::uint64_t chosen, std::uint64_t forbidden) -> void {
      if (size > best) {
        best = size;
        best_mask = chosen;
      }
      if (x > m || size + r[static_cast<std::size_t>(m - x + 1)] <= best) return;
      if (!(forbidden >> x & 1)) {
        std::uint64_t next = forbidden;
        for (int y = 1; y < x; ++y)
          if (chosen >> y & 1 && 2 * x - y <= m) next |= std::uint64_t{1} << (2 * x - y);
        self(self, x + 1, size + 1, chosen | std::uint64_t{1} << x, next);
      }
      self(self, x + 1, size, chosen, forbidden);
    };
    // Including 1 loses nothing: any optimum can be translated to start at 1.
    rec(rec, 2, 1, 2, 0);
    r[static_cast<std::size_t>(m)] = best;
    if (m == n) {
      out.value = best;
      for (int x = 1; x <= n; ++x)
        if (best_mask >> x & 1) out.witness.push_back(x);
    }
  }
  return out;
}

Group embedding_group(std::int64_t n, const EquationCoeffs& c) {
  const std::int64_t top = std::max({std::abs(c.c1), std::abs(c.c2), std::abs(c.c3)});
  return Group::cyclic(next_prime(static_cast<std::uint64_t>((2 * top + 1) * n)));
}

ElementSet embed(const Group& g, const IntSet& s) {
  std::vector<Element> out;
  for (const auto x : s) {
    if (x < 0 || x >= static_cast<std::int64_t>(g.order())) throw Error(ErrorKind::OutOfRange, "value outside the group");
    out.push_back(static_cast<Element>(x));
  }
  return make_set(std::move(out));
}

}  // namespace spectral
