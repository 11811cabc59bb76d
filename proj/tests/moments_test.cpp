#include "ecsqb/moments.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

namespace ecsqb {
namespace {

// Counts set partitions of {0..n-1} into exactly k blocks by enumerating
// restricted growth strings.
std::uint64_t count_partitions(int n, int k) {
  std::vector<int> block(static_cast<std::size_t>(n), 0);
  std::uint64_t count = 0;
  std::function<void(int, int)> place = [&](int i, int used) {
    if (i == n) {
      count += used == k;
      return;
    }
    for (int b = 0; b <= used && b < k; ++b) {
      block[static_cast<std::size_t>(i)] = b;
      place(i + 1, std::max(used, b + 1));
    }
  };
  if (n == 0) return k == 0 ? 1 : 0;
  place(0, 0);
  return count;
}

TEST(Stirling2, MatchesPartitionEnumeration) {
  EXPECT_EQ(stirling2(0, 0), 1u);
  EXPECT_EQ(stirling2(4, 2), 7u);
  EXPECT_EQ(stirling2(3, 3), 1u);
  for (int n = 0; n <= 9; ++n)
    for (int k = 0; k <= n; ++k) EXPECT_EQ(stirling2(n, k), count_partitions(n, k)) << n << "," << k;
}

TEST(Stirling2, RejectsKAboveM) { EXPECT_THROW(stirling2(2, 3), DomainError); }

TEST(Stirling2, OverflowIsARangeError) {
  // S(m, k) peaks above 2^64 somewhere below m = 30.
  EXPECT_THROW(coherent_number_moment(40, 1.0), RangeError);
  EXPECT_NO_THROW(coherent_number_moment(20, 1.0));
}

TEST(CoherentNumberMoment, TabulatedValues) {
  EXPECT_DOUBLE_EQ(coherent_number_moment(1, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(coherent_number_moment(0, 7.3), 1.0);
  EXPECT_DOUBLE_EQ(coherent_number_moment(4, 1.0), 15.0);
  EXPECT_DOUBLE_EQ(coherent_number_moment(2, 2.0), 6.0);
  EXPECT_DOUBLE_EQ(coherent_number_moment(4, 4.0), 756.0);
}

TEST(CoherentNumberMoment, VacuumAndIdentity) {
  for (int m = 1; m <= 10; ++m) EXPECT_EQ(coherent_number_moment(m, 0.0), 0.0);
  for (double mu : {0.0, 0.3, 5.0, 100.0}) EXPECT_EQ(coherent_number_moment(0, mu), 1.0);
}

TEST(CoherentNumberMoment, RejectsBadQueries) {
  EXPECT_THROW(coherent_number_moment(-1, 1.0), DomainError);
  EXPECT_THROW(coherent_number_moment(1, -0.5), DomainError);
}

TEST(PoissonSum, Examples) {
  EXPECT_NEAR(moment_via_poisson_sum(1, 1.0, 1e-12), 1.0, 1e-12);
  EXPECT_EQ(moment_via_poisson_sum(0, 0.0, 1e-12), 1.0);
  EXPECT_NEAR(moment_via_poisson_sum(4, 4.0, 1e-10), 756.0, 1e-10);
  EXPECT_THROW(moment_via_poisson_sum(1, 1.0, 0.0), DomainError);
}

TEST(PoissonSum, AgreesWithClosedFormOnGrid) {
  for (int m = 0; m <= 12; ++m)
    for (double mu : {0.1, 0.5, 1.0, 2.0, 4.0, 9.0, 16.0}) {
      const double closed = coherent_number_moment(m, mu);
      const double summed = moment_via_poisson_sum(m, mu, 1e-13 * std::max(1.0, closed));
      EXPECT_LT(std::abs(closed - summed) / std::max(1.0, closed), 1e-10) << "m=" << m << " mu=" << mu;
    }
}

TEST(CoherentNumberMoment, MonotoneInMu) {
  for (int m = 1; m <= 8; ++m) {
    double prev = coherent_number_moment(m, 0.0);
    for (int i = 1; i <= 200; ++i) {
      const double next = coherent_number_moment(m, 0.1 * i);
      EXPECT_GE(next, prev);
      prev = next;
    }
  }
}

TEST(CoherentNumberMoment, EvenMomentExceedsSquare) {
  for (int m = 1; m <= 6; ++m)
    for (double mu : {0.01, 0.1, 1.0, 3.0, 20.0}) {
      const double fm = coherent_number_moment(m, mu);
      EXPECT_GT(coherent_number_moment(2 * m, mu), fm * fm);
    }
}

}  // namespace
}  // namespace ecsqb
