#ifndef ETAQ_SEARCH_HPP
#define ETAQ_SEARCH_HPP

// Simulated annealing over orderings of a finite ByValue prefix of Q.
//
// The objective measures how far C(n,h), S(n,h) sit from their n-limits
// A(h) over a window of n, taking the worst h <= hMax:
//
//   sum_points max_{h <= hMax} max_{n0 <= n <= n1} |C(n,h) - A_cos(h)| + |S(n,h) - A_sin(h)|
//
// A small value means the inner n-limits are approached uniformly in h, the
// usual prerequisite for swapping the order of the two limits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "etaq/compensated.hpp"
#include "etaq/errors.hpp"
#include "etaq/limits.hpp"
#include "etaq/qset.hpp"
#include "etaq/rng.hpp"
#include "etaq/series.hpp"

namespace etaq {

enum class Neighborhood { AdjacentSwap, RandomSwap };

inline const char* neighborhood_name(Neighborhood n) {
  return n == Neighborhood::AdjacentSwap ? "AdjacentSwap" : "RandomSwap";
}

struct ObjectiveSpec {
  std::vector<StripPoint> points;
  std::uint64_t n0 = 1;
  std::uint64_t n1 = 1;
  std::size_t hMax = 0;
  double etaTol = 1e-12;
};

struct SearchConfig {
  std::uint64_t seed = 0;
  std::size_t prefixLength = 2;
  std::size_t iterations = 1;
  Neighborhood neighborhood = Neighborhood::AdjacentSwap;
  double initialTemperature = 1e-3;
  double decay = 0.95;
  ObjectiveSpec objective;
};

/// permutation[i] is the ByValue position placed at ordering index i + 1.
struct OrderingCandidate {
  std::vector<std::size_t> permutation;
  double objective = 0;
};

struct TraceEntry {
  std::size_t iteration = 0;
  double objective = 0;
  bool accepted = false;
};

struct SearchResult {
  OrderingCandidate initial;
  OrderingCandidate best;
  std::vector<std::uint64_t> bestValues;  // q values of the best prefix, in order
  std::vector<TraceEntry> trace;
};

/// Precomputes everything that does not depend on the permutation.
class ObjectiveEvaluator {
public:
  ObjectiveEvaluator(ObjectiveSpec spec, std::size_t prefixLength) : spec_(std::move(spec)), prefixLength_(prefixLength) {
    if (spec_.n0 == 0 || spec_.n1 < spec_.n0) throw PreconditionError("objective window requires 1 <= n0 <= n1");
    if (prefixLength_ < 2) throw PreconditionError("prefixLength must be at least 2");
    for (const auto& p : spec_.points) {
      if (!(p.x() > 0)) throw PreconditionError("objective points need x > 0");
    }
    const std::size_t needed = std::max(prefixLength_, spec_.hMax);
    std::uint64_t bound = std::max<std::uint64_t>(spec_.n1, 16);
    byValue_ = enumerate_q(bound);
    while (byValue_.size() < needed) {
      bound *= 2;
      byValue_ = enumerate_q(bound);
    }

    // Q-divisors of each k as ByValue positions.
    std::vector<std::uint32_t> pos(spec_.n1 + 1, 0);
    for (std::size_t j = 0; j < byValue_.size() && byValue_[j].value <= spec_.n1; ++j) {
      pos[byValue_[j].value] = static_cast<std::uint32_t>(j + 1);
    }
    const Factorizer fac(spec_.n1);
    divStart_.assign(spec_.n1 + 2, 0);
    for (std::uint64_t k = 1; k <= spec_.n1; ++k) {
      divStart_[k] = divs_.size();
      for (const auto& [value, sign] : q_divisors(fac.distinct_odd_primes(k))) {
        divs_.push_back({pos[value] - 1, sign});
      }
    }
    divStart_[spec_.n1 + 1] = divs_.size();

    for (const auto& p : spec_.points) {
      PointData d;
      d.a.resize(spec_.n1 + 1);
      d.b.resize(spec_.n1 + 1);
      for (std::uint64_t k = 1; k <= spec_.n1; ++k) {
        const auto t = term_ab(k, p);
        d.a[k] = t.a;
        d.b[k] = t.b;
      }
      d.eta = eta_accel(p, spec_.etaTol).value;
      d.weights.reserve(needed);
      for (std::size_t j = 0; j < needed; ++j) {
        d.weights.push_back(static_cast<double>(byValue_[j].sign) *
                            power_minus_s(static_cast<double>(byValue_[j].value), p));
      }
      points_.push_back(std::move(d));
    }
  }

  std::size_t prefixLength() const noexcept { return prefixLength_; }
  const ObjectiveSpec& spec() const noexcept { return spec_; }
  const std::vector<OddSquarefree>& byValue() const noexcept { return byValue_; }

  double operator()(const std::vector<std::size_t>& permutation) const {
    if (permutation.size() != prefixLength_) throw PreconditionError("permutation length mismatch");
    const std::size_t hMax = spec_.hMax;
    if (hMax == 0) return 0;

    // ordering index (1-based) of each ByValue position; beyond the prefix it is the identity.
    std::vector<std::size_t> orderIndex(byValue_.size());
    std::iota(orderIndex.begin(), orderIndex.end(), std::size_t{1});
    for (std::size_t i = 0; i < prefixLength_; ++i) orderIndex[permutation[i]] = i + 1;

    double total = 0;
    std::vector<double> limCos(hMax + 1);
    std::vector<double> limSin(hMax + 1);
    std::vector<double> slotC(hMax + 1);
    std::vector<double> slotS(hMax + 1);
    for (const auto& d : points_) {
      CompensatedSum<Complex> w;
      for (std::size_t h = 1; h <= hMax; ++h) {
        const std::size_t j = (h <= prefixLength_) ? permutation[h - 1] : h - 1;
        w += d.weights[j];
        const Complex v = w.value() * d.eta;
        limCos[h] = v.real();
        limSin[h] = -v.imag();
      }
      std::fill(slotC.begin(), slotC.end(), 0.0);
      std::fill(slotS.begin(), slotS.end(), 0.0);
      double worst = 0;
      for (std::uint64_t k = 1; k <= spec_.n1; ++k) {
        for (std::size_t e = divStart_[k]; e < divStart_[k + 1]; ++e) {
          const std::size_t idx = orderIndex[divs_[e].position];
          if (idx > hMax) continue;
          slotC[idx] += divs_[e].sign * d.a[k];
          slotS[idx] += divs_[e].sign * d.b[k];
        }
        if (k < spec_.n0) continue;
        double c = 0;
        double s = 0;
        for (std::size_t h = 1; h <= hMax; ++h) {
          c += slotC[h];
          s += slotS[h];
          worst = std::max(worst, std::abs(c - limCos[h]) + std::abs(s - limSin[h]));
        }
      }
      total += worst;
    }
    return total;
  }

private:
  struct Divisor {
    std::size_t position;  // ByValue position, 0-based
    int sign;
  };
  struct PointData {
    std::vector<double> a;
    std::vector<double> b;
    Complex eta;
    std::vector<Complex> weights;  // sgn(q) q^-s by ByValue position
  };

  ObjectiveSpec spec_;
  std::size_t prefixLength_;
  std::vector<OddSquarefree> byValue_;
  std::vector<std::size_t> divStart_;
  std::vector<Divisor> divs_;
  std::vector<PointData> points_;
};

inline double objective_gap(const OrderingCandidate& candidate, const ObjectiveSpec& spec) {
  const ObjectiveEvaluator eval(spec, candidate.permutation.size());
  return eval(candidate.permutation);
}

/// The candidate's prefix as an Explicit ordering (rest in ByValue order).
inline QOrdering candidate_ordering(const OrderingCandidate& candidate, const std::vector<OddSquarefree>& byValue,
                                    std::uint64_t boundHint) {
  std::vector<OddSquarefree> head;
  for (const auto j : candidate.permutation) head.push_back(byValue.at(j));
  return QOrdering::explicit_order(std::move(head), boundHint);
}

inline SearchResult anneal(const SearchConfig& config) {
  if (config.prefixLength < 2) throw PreconditionError("prefixLength must be at least 2");
  if (config.iterations < 1) throw PreconditionError("iterations must be at least 1");
  if (!(config.decay > 0 && config.decay < 1)) throw PreconditionError("decay must lie in (0, 1)");
  if (!(config.initialTemperature > 0)) throw PreconditionError("initial temperature must be positive");

  const ObjectiveEvaluator eval(config.objective, config.prefixLength);
  SplitMix64 rng(config.seed);
  const std::size_t len = config.prefixLength;

  SearchResult result;
  std::vector<std::size_t> current(len);
  std::iota(current.begin(), current.end(), std::size_t{0});
  double currentObjective = eval(current);
  result.initial = {current, currentObjective};
  result.best = result.initial;

  double temperature = config.initialTemperature;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    std::vector<std::size_t> proposal = current;
    if (config.neighborhood == Neighborhood::AdjacentSwap) {
      const auto i = static_cast<std::size_t>(rng.below(len - 1));
      std::swap(proposal[i], proposal[i + 1]);
    } else {
      const auto i = static_cast<std::size_t>(rng.below(len));
      auto j = static_cast<std::size_t>(rng.below(len - 1));
      if (j >= i) ++j;
      std::swap(proposal[i], proposal[j]);
    }
    const double objective = eval(proposal);
    const double diff = objective - currentObjective;
    const bool accepted = diff <= 0 || rng.unit() < std::exp(-diff / temperature);
    result.trace.push_back({it, objective, accepted});
    if (accepted) {
      current = std::move(proposal);
      currentObjective = objective;
      if (objective < result.best.objective) result.best = {current, objective};
    }
    temperature *= config.decay;
  }
  for (const auto j : result.best.permutation) result.bestValues.push_back(eval.byValue()[j].value);
  return result;
}

}  // namespace etaq

#endif  // ETAQ_SEARCH_HPP
