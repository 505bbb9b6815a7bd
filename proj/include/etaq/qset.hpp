#ifndef ETAQ_QSET_HPP
#define ETAQ_QSET_HPP

// The set Q of finite products of distinct odd primes, its orderings, and the
// signed divisor counts f(k,h) and f(k) built on top of it.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "etaq/errors.hpp"
#include "etaq/rng.hpp"

namespace etaq {

/// Largest value bound accepted by any enumeration in this module.
inline constexpr std::uint64_t kMaxEnumerationBound = std::uint64_t{1} << 40;

/// An element of Q: value = product of factors, sign = (-1)^factors.size().
struct OddSquarefree {
  std::uint64_t value = 0;
  std::vector<std::uint64_t> factors;
  int sign = 0;

  friend bool operator==(const OddSquarefree&, const OddSquarefree&) = default;
};

inline std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  if (limit > kMaxEnumerationBound) throw PreconditionError("sieve limit exceeds 2^40");
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
  }
  return primes;
}

/// Smallest-prime-factor table for fast factorization of every k <= limit.
class Factorizer {
public:
  explicit Factorizer(std::uint64_t limit) : limit_(limit) {
    if (limit > kMaxEnumerationBound) throw PreconditionError("factorizer limit exceeds 2^40");
    spf_.assign(limit + 1, 0);
    for (std::uint64_t p = 2; p <= limit; ++p) {
      if (spf_[p] != 0) continue;
      spf_[p] = static_cast<std::uint32_t>(std::min<std::uint64_t>(p, UINT32_MAX));
      for (std::uint64_t m = p * p; m <= limit; m += p) {
        if (spf_[m] == 0) spf_[m] = static_cast<std::uint32_t>(p);
      }
    }
  }

  std::uint64_t limit() const noexcept { return limit_; }

  /// Distinct odd primes dividing k, ascending.
  std::vector<std::uint64_t> distinct_odd_primes(std::uint64_t k) const {
    if (k == 0 || k > limit_) throw PreconditionError("k outside factorizer range");
    std::vector<std::uint64_t> out;
    while (k % 2 == 0) k /= 2;
    while (k > 1) {
      const std::uint64_t p = spf_[k];
      out.push_back(p);
      while (k % p == 0) k /= p;
    }
    return out;
  }

  bool is_squarefree(std::uint64_t k) const {
    std::uint64_t prev = 0;
    while (k > 1) {
      const std::uint64_t p = spf_[k];
      if (p == prev) return false;
      prev = p;
      k /= p;
    }
    return true;
  }

private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
};

/// Every element of Q with value <= bound, ascending by value.
inline std::vector<OddSquarefree> enumerate_q(std::uint64_t bound) {
  std::vector<OddSquarefree> out;
  if (bound < 3) return out;
  if (bound > kMaxEnumerationBound) throw PreconditionError("enumeration bound exceeds 2^40");
  const Factorizer fac(bound);
  for (std::uint64_t v = 3; v <= bound; v += 2) {
    if (!fac.is_squarefree(v)) continue;
    auto factors = fac.distinct_odd_primes(v);
    const int sign = (factors.size() % 2 == 0) ? 1 : -1;
    out.push_back({v, std::move(factors), sign});
  }
  return out;
}

inline int sgn_q(const OddSquarefree& q) { return (q.factors.size() % 2 == 0) ? 1 : -1; }

inline int delta(std::uint64_t k, const OddSquarefree& q) {
  if (k == 0) throw PreconditionError("delta requires k >= 1");
  return (k % q.value == 0) ? 1 : 0;
}

inline bool is_gamma(std::uint64_t k) { return k != 0 && (k & (k - 1)) == 0; }

/// Closed form of f(k): 0 on powers of two, -1 elsewhere.
inline int f_closed(std::uint64_t k) {
  if (k == 0) throw PreconditionError("f requires k >= 1");
  return is_gamma(k) ? 0 : -1;
}

/// f(k) by summing (-1)^|T| over every nonempty subset T of the distinct odd
/// primes of k. Factors by trial division so it shares nothing with the sieve.
inline int f_bruteforce(std::uint64_t k) {
  if (k == 0) throw PreconditionError("f requires k >= 1");
  std::vector<std::uint64_t> primes;
  while (k % 2 == 0) k /= 2;
  for (std::uint64_t d = 3; d * d <= k; d += 2) {
    if (k % d != 0) continue;
    primes.push_back(d);
    while (k % d == 0) k /= d;
  }
  if (k > 1) primes.push_back(k);
  const std::size_t n = primes.size();
  int total = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    total += (std::popcount(mask) % 2 == 0) ? 1 : -1;
  }
  return total;
}

/// Elements of Q dividing k, as (value, sign) pairs: products over the
/// nonempty subsets of the distinct odd primes of k.
inline std::vector<std::pair<std::uint64_t, int>> q_divisors(std::span<const std::uint64_t> oddPrimes) {
  std::vector<std::pair<std::uint64_t, int>> out{{1, 1}};
  for (const auto p : oddPrimes) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(out[i].first * p, -out[i].second);
  }
  out.erase(out.begin());
  return out;
}

enum class OrderStrategy { ByValue, ByFactorCountThenValue, SeededShuffle, Explicit };

/// A concrete enumeration order over Q restricted to values <= boundHint.
///
/// SeededShuffle permutes the first prefixLength ByValue elements with a
/// SplitMix64-driven Fisher-Yates shuffle and leaves the rest in ByValue
/// order. Explicit lists a head sequence; the remaining elements up to
/// boundHint follow in ByValue order.
class QOrdering {
public:
  static QOrdering by_value(std::uint64_t boundHint) {
    return QOrdering(OrderStrategy::ByValue, boundHint);
  }

  static QOrdering by_factor_count_then_value(std::uint64_t boundHint) {
    return QOrdering(OrderStrategy::ByFactorCountThenValue, boundHint);
  }

  static QOrdering seeded_shuffle(std::uint64_t seed, std::size_t prefixLength, std::uint64_t boundHint) {
    QOrdering o(OrderStrategy::SeededShuffle, boundHint);
    o.seed_ = seed;
    o.prefixLength_ = prefixLength;
    return o;
  }

  static QOrdering explicit_order(std::vector<OddSquarefree> head, std::uint64_t boundHint = 0) {
    std::unordered_set<std::uint64_t> seen;
    std::uint64_t maxValue = 0;
    for (const auto& q : head) {
      validate(q);
      if (!seen.insert(q.value).second) {
        throw PreconditionError("explicit ordering repeats " + std::to_string(q.value));
      }
      maxValue = std::max(maxValue, q.value);
    }
    QOrdering o(OrderStrategy::Explicit, std::max(boundHint, maxValue));
    o.head_ = std::move(head);
    return o;
  }

  OrderStrategy strategy() const noexcept { return strategy_; }
  std::uint64_t boundHint() const noexcept { return boundHint_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t prefixLength() const noexcept { return prefixLength_; }
  const std::vector<OddSquarefree>& head() const noexcept { return head_; }

  /// Short, stable text id used in reports and file names.
  std::string descriptor() const {
    const std::string b = ",bound=" + std::to_string(boundHint_) + ")";
    switch (strategy_) {
      case OrderStrategy::ByValue: return "byvalue(" + b.substr(1);
      case OrderStrategy::ByFactorCountThenValue: return "byfactorcount(" + b.substr(1);
      case OrderStrategy::SeededShuffle:
        return "shuffle(seed=" + std::to_string(seed_) + ",prefix=" + std::to_string(prefixLength_) +
               ",rng=" + SplitMix64::kAlgorithmId + b;
      case OrderStrategy::Explicit: return "explicit(head=" + std::to_string(head_.size()) + b;
    }
    return "unknown";
  }

  /// The whole ordering of Q within boundHint.
  std::vector<OddSquarefree> materialize() const {
    auto all = enumerate_q(boundHint_);
    switch (strategy_) {
      case OrderStrategy::ByValue:
        break;
      case OrderStrategy::ByFactorCountThenValue:
        std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
          return a.factors.size() < b.factors.size();
        });
        break;
      case OrderStrategy::SeededShuffle: {
        if (all.size() < prefixLength_) throw EnumerationShortfall(prefixLength_, all.size());
        SplitMix64 rng(seed_);
        for (std::size_t i = prefixLength_; i > 1; --i) {
          const auto j = static_cast<std::size_t>(rng.below(i));
          std::swap(all[i - 1], all[j]);
        }
        break;
      }
      case OrderStrategy::Explicit: {
        std::unordered_set<std::uint64_t> listed;
        for (const auto& q : head_) listed.insert(q.value);
        std::vector<OddSquarefree> out = head_;
        for (auto& q : all) {
          if (!listed.contains(q.value)) out.push_back(std::move(q));
        }
        return out;
      }
    }
    return all;
  }

  /// The first count elements q_1..q_count.
  std::vector<OddSquarefree> prefix(std::size_t count) const {
    auto all = materialize();
    if (all.size() < count) throw EnumerationShortfall(count, all.size());
    all.resize(count);
    return all;
  }

  static void validate(const OddSquarefree& q) {
    if (q.value < 3 || q.factors.empty()) throw PreconditionError("element of Q must be >= 3");
    std::uint64_t product = 1;
    for (std::size_t i = 0; i < q.factors.size(); ++i) {
      const auto p = q.factors[i];
      if (p < 3 || p % 2 == 0) throw PreconditionError("factor " + std::to_string(p) + " is not an odd prime");
      for (std::uint64_t d = 3; d * d <= p; d += 2) {
        if (p % d == 0) throw PreconditionError("factor " + std::to_string(p) + " is not prime");
      }
      if (i > 0 && q.factors[i - 1] >= p) throw PreconditionError("factors must be strictly ascending");
      product *= p;
    }
    if (product != q.value) throw PreconditionError("value differs from product of factors");
    if (q.sign != sgn_q(q)) throw PreconditionError("sign differs from (-1)^factor count");
  }

private:
  QOrdering(OrderStrategy s, std::uint64_t bound) : strategy_(s), boundHint_(bound) {
    if (bound > kMaxEnumerationBound) throw PreconditionError("enumeration bound exceeds 2^40");
  }

  OrderStrategy strategy_;
  std::uint64_t boundHint_;
  std::uint64_t seed_ = 0;
  std::size_t prefixLength_ = 0;
  std::vector<OddSquarefree> head_;
};

/// Build an OddSquarefree from a value, validating membership in Q.
inline OddSquarefree make_q(std::uint64_t value) {
  OddSquarefree q{value, {}, 0};
  std::uint64_t rest = value;
  if (rest % 2 == 0 || rest < 3) throw PreconditionError(std::to_string(value) + " is not in Q");
  for (std::uint64_t d = 3; d * d <= rest; d += 2) {
    if (rest % d != 0) continue;
    q.factors.push_back(d);
    rest /= d;
    if (rest % d == 0) throw PreconditionError(std::to_string(value) + " is not squarefree");
  }
  if (rest > 1) q.factors.push_back(rest);
  q.sign = sgn_q(q);
  return q;
}

/// Smallest power-of-two multiple of minBound whose Q enumeration holds at
/// least count elements.
inline std::uint64_t bound_for_count(std::size_t count, std::uint64_t minBound = 16) {
  std::uint64_t bound = std::max<std::uint64_t>(minBound, 16);
  while (enumerate_q(bound).size() < count) {
    if (bound > kMaxEnumerationBound / 2) throw EnumerationShortfall(count, enumerate_q(bound).size());
    bound *= 2;
  }
  return bound;
}

/// 1-based positions of the elements of an ordered prefix, looked up by value.
class OrderingIndex {
public:
  explicit OrderingIndex(std::span<const OddSquarefree> prefix) {
    index_.reserve(prefix.size());
    for (std::size_t i = 0; i < prefix.size(); ++i) index_.emplace(prefix[i].value, i + 1);
  }

  std::optional<std::size_t> index_of(std::uint64_t value) const {
    const auto it = index_.find(value);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return index_.size(); }

private:
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// f(k,h) by its definition: sum of sgn(q_i) over i <= h with q_i | k.
inline int f_kh(std::uint64_t k, std::span<const OddSquarefree> prefix, std::size_t h) {
  if (h > prefix.size()) throw EnumerationShortfall(h, prefix.size());
  int total = 0;
  for (std::size_t i = 0; i < h; ++i) total += prefix[i].sign * delta(k, prefix[i]);
  return total;
}

inline int f_kh(std::uint64_t k, const QOrdering& ordering, std::size_t h) {
  const auto prefix = ordering.prefix(h);
  return f_kh(k, prefix, h);
}

/// f(k,h) looking only at the Q-divisors of k.
inline int f_kh_fast(std::uint64_t k, const Factorizer& fac, const OrderingIndex& index, std::size_t h) {
  if (h > index.size()) throw EnumerationShortfall(h, index.size());
  const auto primes = fac.distinct_odd_primes(k);
  int total = 0;
  for (const auto& [value, sign] : q_divisors(primes)) {
    const auto i = index.index_of(value);
    if (i && *i <= h) total += sign;
  }
  return total;
}

}  // namespace etaq

#endif  // ETAQ_QSET_HPP
