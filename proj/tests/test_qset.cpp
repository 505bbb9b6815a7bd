#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "etaq/qset.hpp"

namespace {

bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// All products of nonempty subsets of the odd primes <= bound, capped at bound.
std::set<std::uint64_t> subset_products(std::uint64_t bound) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 3; p <= bound; p += 2) {
    if (is_prime_trial(p)) primes.push_back(p);
  }
  std::set<std::uint64_t> out;
  std::vector<std::uint64_t> frontier{1};
  for (const auto p : primes) {
    const std::size_t n = frontier.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (frontier[i] * p <= bound) {
        frontier.push_back(frontier[i] * p);
        out.insert(frontier[i] * p);
      }
    }
  }
  return out;
}

std::vector<std::uint64_t> values(const std::vector<etaq::OddSquarefree>& qs) {
  std::vector<std::uint64_t> v;
  for (const auto& q : qs) v.push_back(q.value);
  return v;
}

}  // namespace

TEST(SievePrimes, MatchesTrialDivision) {
  EXPECT_TRUE(etaq::sieve_primes(1).empty());
  EXPECT_TRUE(etaq::sieve_primes(0).empty());
  EXPECT_EQ(etaq::sieve_primes(10), (std::vector<std::uint64_t>{2, 3, 5, 7}));
  EXPECT_EQ(etaq::sieve_primes(30), (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
  std::vector<std::uint64_t> oracle;
  for (std::uint64_t n = 0; n <= 5000; ++n) {
    if (is_prime_trial(n)) oracle.push_back(n);
  }
  EXPECT_EQ(etaq::sieve_primes(5000), oracle);
}

TEST(EnumerateQ, SmallBounds) {
  EXPECT_TRUE(etaq::enumerate_q(2).empty());
  const auto q15 = etaq::enumerate_q(15);
  EXPECT_EQ(values(q15), (std::vector<std::uint64_t>{3, 5, 7, 11, 13, 15}));
  EXPECT_EQ(q15.back().sign, 1);
  EXPECT_EQ(q15.back().factors, (std::vector<std::uint64_t>{3, 5}));

  const auto q105 = etaq::enumerate_q(105);
  const auto it = std::find_if(q105.begin(), q105.end(), [](const auto& q) { return q.value == 105; });
  ASSERT_NE(it, q105.end());
  EXPECT_EQ(it->sign, -1);
  EXPECT_EQ(it->factors, (std::vector<std::uint64_t>{3, 5, 7}));
}

TEST(EnumerateQ, MatchesSubsetProductOracle) {
  const auto got = etaq::enumerate_q(3000);
  const auto oracle = subset_products(3000);
  EXPECT_EQ(values(got), std::vector<std::uint64_t>(oracle.begin(), oracle.end()));
  for (const auto& q : got) {
    EXPECT_NO_THROW(etaq::QOrdering::validate(q)) << q.value;
  }
}

TEST(EnumerateQ, CountUpTo1e4MatchesSquarefreeOddCount) {
  // Independent count: odd n >= 3 with no squared odd prime divisor.
  std::size_t count = 0;
  for (std::uint64_t n = 3; n <= 10'000; n += 2) {
    bool squarefree = true;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
      if (n % (d * d) == 0) {
        squarefree = false;
        break;
      }
    }
    count += squarefree;
  }
  const auto q = etaq::enumerate_q(10'000);
  EXPECT_EQ(q.size(), count);
  for (const auto& e : q) {
    EXPECT_EQ(e.value % 2, 1u);
    EXPECT_GE(e.value, 3u);
  }
  EXPECT_TRUE(std::none_of(q.begin(), q.end(), [](const auto& e) { return e.value == 9 || e.value == 45; }));
}

TEST(SgnQ, FactorCountParity) {
  EXPECT_EQ(etaq::sgn_q(etaq::make_q(3)), -1);
  EXPECT_EQ(etaq::sgn_q(etaq::make_q(15)), 1);
  EXPECT_EQ(etaq::sgn_q(etaq::make_q(105)), -1);
  EXPECT_THROW(etaq::make_q(9), etaq::PreconditionError);
  EXPECT_THROW(etaq::make_q(6), etaq::PreconditionError);
  EXPECT_THROW(etaq::make_q(1), etaq::PreconditionError);
}

TEST(Delta, Divisibility) {
  EXPECT_EQ(etaq::delta(15, etaq::make_q(5)), 1);
  EXPECT_EQ(etaq::delta(8, etaq::make_q(3)), 0);
  EXPECT_EQ(etaq::delta(45, etaq::make_q(15)), 1);
  EXPECT_THROW(etaq::delta(0, etaq::make_q(3)), etaq::PreconditionError);
}

TEST(Fkh, DefinitionExamples) {
  const auto by = etaq::QOrdering::by_value(1000);
  EXPECT_EQ(etaq::f_kh(8, by, 100), 0);
  EXPECT_EQ(etaq::f_kh(15, by, 2), -2);
  EXPECT_EQ(etaq::f_kh(15, by, 6), -1);
  EXPECT_EQ(etaq::f_kh(15, by, 0), 0);
}

TEST(Fkh, ShortfallIsConfigurationError) {
  const auto small = etaq::QOrdering::by_value(15);  // 6 elements
  EXPECT_THROW(etaq::f_kh(15, small, 7), etaq::EnumerationShortfall);
}

TEST(Fkh, FastPathMatchesDefinition) {
  const auto prefix = etaq::QOrdering::by_value(5000).prefix(500);
  const etaq::Factorizer fac(2000);
  const etaq::OrderingIndex index(prefix);
  for (std::uint64_t k = 1; k <= 2000; ++k) {
    for (std::size_t h = 0; h <= 500; h += (h < 20 ? 1 : 37)) {
      ASSERT_EQ(etaq::f_kh(k, prefix, h), etaq::f_kh_fast(k, fac, index, h)) << "k=" << k << " h=" << h;
    }
  }
}

TEST(Fkh, StabilizesAtClosedFormForEveryOrdering) {
  const std::vector<etaq::QOrdering> orderings = {
      etaq::QOrdering::by_value(3000), etaq::QOrdering::by_factor_count_then_value(3000),
      etaq::QOrdering::seeded_shuffle(7, 400, 3000), etaq::QOrdering::seeded_shuffle(99, 1000, 3000)};
  for (const auto& o : orderings) {
    const auto all = o.materialize();
    for (std::uint64_t k : {1, 2, 3, 12, 15, 105, 210, 1155, 2048, 2310, 3000}) {
      // index of the last Q-divisor of k in this ordering
      std::size_t last = 0;
      for (std::size_t i = 0; i < all.size(); ++i) {
        if (k % all[i].value == 0) last = i + 1;
      }
      EXPECT_EQ(etaq::f_kh(k, all, last), etaq::f_closed(k)) << o.descriptor() << " k=" << k;
      EXPECT_EQ(etaq::f_kh(k, all, all.size()), etaq::f_closed(k));
    }
  }
}

TEST(FClosed, Examples) {
  EXPECT_EQ(etaq::f_closed(8), 0);
  EXPECT_EQ(etaq::f_closed(1), 0);
  EXPECT_EQ(etaq::f_closed(12), -1);
  EXPECT_EQ(etaq::f_bruteforce(1), 0);
  EXPECT_EQ(etaq::f_bruteforce(15), -1);
  EXPECT_EQ(etaq::f_bruteforce(std::uint64_t{1} << 20), 0);
  EXPECT_EQ(etaq::f_bruteforce(3 * 5 * 7 * 11 * 13 * 17 * 19 * 23), -1);
}

TEST(FClosed, AgreesWithBruteForceUpTo1e5) {
  for (std::uint64_t k = 1; k <= 100'000; ++k) {
    ASSERT_EQ(etaq::f_closed(k), etaq::f_bruteforce(k)) << k;
  }
}

TEST(IsGamma, PowersOfTwo) {
  EXPECT_TRUE(etaq::is_gamma(1));
  EXPECT_FALSE(etaq::is_gamma(6));
  EXPECT_TRUE(etaq::is_gamma(1024));
  EXPECT_FALSE(etaq::is_gamma(0));
  EXPECT_FALSE(etaq::is_gamma(3));
}

TEST(QOrdering, ByValueStrictlyIncreasing) {
  const auto all = etaq::QOrdering::by_value(5000).materialize();
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1].value, all[i].value);
}

TEST(QOrdering, FactorCountThenValue) {
  const auto all = etaq::QOrdering::by_factor_count_then_value(200).materialize();
  for (std::size_t i = 1; i < all.size(); ++i) {
    const auto a = all[i - 1].factors.size(), b = all[i].factors.size();
    EXPECT_TRUE(a < b || (a == b && all[i - 1].value < all[i].value));
  }
  EXPECT_EQ(all.size(), etaq::enumerate_q(200).size());
}

TEST(QOrdering, SeededShuffleIsPrefixBijectionAndReproducible) {
  const auto byValue = etaq::QOrdering::by_value(2000).materialize();
  const auto a = etaq::QOrdering::seeded_shuffle(42, 100, 2000).materialize();
  const auto b = etaq::QOrdering::seeded_shuffle(42, 100, 2000).materialize();
  const auto c = etaq::QOrdering::seeded_shuffle(43, 100, 2000).materialize();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  ASSERT_EQ(a.size(), byValue.size());
  auto head = values({a.begin(), a.begin() + 100});
  auto expected = values({byValue.begin(), byValue.begin() + 100});
  EXPECT_NE(head, expected);
  std::sort(head.begin(), head.end());
  EXPECT_EQ(head, expected);
  for (std::size_t i = 100; i < a.size(); ++i) EXPECT_EQ(a[i].value, byValue[i].value);
}

TEST(QOrdering, SeededShuffleFrozenSequence) {
  // Pins the generator: any change to SplitMix64 or the shuffle shows up here.
  const auto a = values(etaq::QOrdering::seeded_shuffle(7, 8, 100).prefix(8));
  etaq::SplitMix64 rng(7);
  std::vector<std::uint64_t> expect = {3, 5, 7, 11, 13, 15, 17, 19};
  for (std::size_t i = 8; i > 1; --i) std::swap(expect[i - 1], expect[rng.below(i)]);
  EXPECT_EQ(a, expect);
  EXPECT_EQ(etaq::SplitMix64(0).next(), 0xe220a8397b1dcdafULL);
}

TEST(QOrdering, ShuffleBeyondAvailableIsShortfall) {
  EXPECT_THROW(etaq::QOrdering::seeded_shuffle(1, 100, 50).materialize(), etaq::EnumerationShortfall);
}

TEST(QOrdering, ExplicitHeadThenByValue) {
  const auto o = etaq::QOrdering::explicit_order({etaq::make_q(15), etaq::make_q(3)}, 20);
  EXPECT_EQ(values(o.materialize()), (std::vector<std::uint64_t>{15, 3, 5, 7, 11, 13, 17, 19}));
  EXPECT_THROW(etaq::QOrdering::explicit_order({etaq::make_q(3), etaq::make_q(3)}), etaq::PreconditionError);
  etaq::OddSquarefree bad{9, {3, 3}, 1};
  EXPECT_THROW(etaq::QOrdering::explicit_order({bad}), etaq::PreconditionError);
}

TEST(QOrdering, EachElementAtMostOnce) {
  for (const auto& o : {etaq::QOrdering::by_value(3000), etaq::QOrdering::by_factor_count_then_value(3000),
                        etaq::QOrdering::seeded_shuffle(5, 500, 3000)}) {
    std::set<std::uint64_t> seen;
    for (const auto& q : o.materialize()) EXPECT_TRUE(seen.insert(q.value).second);
  }
}

TEST(QDivisors, SubsetsOfOddPrimes) {
  const std::vector<std::uint64_t> primes = {3, 5, 7};
  auto d = etaq::q_divisors(primes);
  std::sort(d.begin(), d.end());
  const std::vector<std::pair<std::uint64_t, int>> expect = {{3, -1}, {5, -1}, {7, -1}, {15, 1},
                                                             {21, 1}, {35, 1}, {105, -1}};
  EXPECT_EQ(d, expect);
}

TEST(BoundForCount, ProducesEnoughElements) {
  const auto b = etaq::bound_for_count(500, 10);
  EXPECT_GE(etaq::enumerate_q(b).size(), 500u);
  EXPECT_LT(etaq::enumerate_q(b / 2).size(), 500u);
}
