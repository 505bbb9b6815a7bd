#ifndef ETAQ_LIMITS_HPP
#define ETAQ_LIMITS_HPP

// Double sums C(n,h), S(n,h) and the two iterated limits built from them.
//
// C(n,h) = sum_{k<=n} f(k,h) a_k and S(n,h) = sum_{k<=n} f(k,h) b_k.
// Inner limit over n (for fixed h):  A(h) = sum_{i<=h} sgn(q_i) q_i^-s eta(s).
// Inner limit over h (for fixed n):  sum_{k<=n} f(k) a_k, whose n-limit is
//   B = sum_Gamma phi - eta = geom_closed(s) - eta(s).
// cos components take Re, sin components take -Im.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "etaq/compensated.hpp"
#include "etaq/errors.hpp"
#include "etaq/qset.hpp"
#include "etaq/series.hpp"

namespace etaq {

struct SumSurface {
  StripPoint point{1, 0};
  std::string orderingId;
  std::vector<std::uint64_t> nAxis;
  std::vector<std::uint64_t> hAxis;
  std::vector<double> C;  // row-major, C[i * hAxis.size() + j] = C(nAxis[i], hAxis[j])
  std::vector<double> S;

  double c(std::size_t i, std::size_t j) const { return C[i * hAxis.size() + j]; }
  double s(std::size_t i, std::size_t j) const { return S[i * hAxis.size() + j]; }
};

/// Receives one surface row: n, then C(n, h) and S(n, h) over the h axis.
using SurfaceRowSink = std::function<void(std::uint64_t, std::span<const double>, std::span<const double>)>;

namespace detail {

inline void require_ascending(std::span<const std::uint64_t> axis, const char* name) {
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (axis[i] <= axis[i - 1]) throw PreconditionError(std::string(name) + " axis must be strictly ascending");
  }
}

}  // namespace detail

/// Streams C and S over the given axes. Each k is visited once; its
/// contribution goes to the first h-axis slot that covers the ordering index
/// of each Q-divisor of k, and rows are prefix sums over those slots.
inline void c_s_surface_stream(StripPoint s, const QOrdering& ordering, std::span<const std::uint64_t> nAxis,
                               std::span<const std::uint64_t> hAxis, const SurfaceRowSink& sink) {
  detail::require_ascending(nAxis, "n");
  detail::require_ascending(hAxis, "h");
  if (nAxis.empty() || hAxis.empty()) return;
  const std::uint64_t maxN = nAxis.back();
  const std::uint64_t maxH = hAxis.back();
  const auto prefix = ordering.prefix(maxH);

  // Only elements <= maxN can divide any k in range.
  std::vector<std::uint32_t> index(maxN + 1, 0);
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i].value <= maxN) index[prefix[i].value] = static_cast<std::uint32_t>(i + 1);
  }
  const Factorizer fac(std::max<std::uint64_t>(maxN, 1));

  std::vector<CompensatedSum<double>> slotC(hAxis.size());
  std::vector<CompensatedSum<double>> slotS(hAxis.size());
  std::vector<double> rowC(hAxis.size());
  std::vector<double> rowS(hAxis.size());
  std::size_t nextRow = 0;

  auto emit = [&](std::uint64_t n) {
    CompensatedSum<double> runC;
    CompensatedSum<double> runS;
    for (std::size_t j = 0; j < hAxis.size(); ++j) {
      runC += slotC[j].value();
      runS += slotS[j].value();
      rowC[j] = runC.value();
      rowS[j] = runS.value();
    }
    sink(n, rowC, rowS);
  };

  while (nextRow < nAxis.size() && nAxis[nextRow] == 0) emit(nAxis[nextRow++]);
  for (std::uint64_t k = 1; k <= maxN; ++k) {
    const auto primes = fac.distinct_odd_primes(k);
    if (!primes.empty()) {
      const auto [a, b] = term_ab(k, s);
      for (const auto& [value, sign] : q_divisors(primes)) {
        const std::uint32_t idx = index[value];
        if (idx == 0 || idx > maxH) continue;
        const auto slot = static_cast<std::size_t>(
            std::lower_bound(hAxis.begin(), hAxis.end(), std::uint64_t{idx}) - hAxis.begin());
        slotC[slot] += sign * a;
        slotS[slot] += sign * b;
      }
    }
    if (nextRow < nAxis.size() && nAxis[nextRow] == k) emit(nAxis[nextRow++]);
  }
}

inline SumSurface c_s_surface(StripPoint s, const QOrdering& ordering, std::vector<std::uint64_t> nAxis,
                              std::vector<std::uint64_t> hAxis) {
  SumSurface out{s, ordering.descriptor(), std::move(nAxis), std::move(hAxis), {}, {}};
  out.C.reserve(out.nAxis.size() * out.hAxis.size());
  out.S.reserve(out.nAxis.size() * out.hAxis.size());
  c_s_surface_stream(s, ordering, out.nAxis, out.hAxis,
                     [&](std::uint64_t, std::span<const double> c, std::span<const double> srow) {
                       out.C.insert(out.C.end(), c.begin(), c.end());
                       out.S.insert(out.S.end(), srow.begin(), srow.end());
                     });
  return out;
}

struct LimitA {
  double cos = 0;
  double sin = 0;
  double errorEstimate = 0;
};

/// A(h) for h = 1..prefix.size(), given eta(s) and its error.
inline std::vector<LimitA> limit_a_sequence(StripPoint s, std::span<const OddSquarefree> prefix,
                                            const SeriesResult& eta) {
  std::vector<LimitA> out;
  out.reserve(prefix.size());
  CompensatedSum<Complex> weights;
  double weightMass = 0;
  for (const auto& q : prefix) {
    const Complex w = power_minus_s(static_cast<double>(q.value), s);
    weights += static_cast<double>(q.sign) * w;
    weightMass += std::abs(w);
    const Complex v = weights.value() * eta.value;
    out.push_back({v.real(), -v.imag(), weightMass * eta.errorEstimate});
  }
  return out;
}

/// lim_n C(n,h) and lim_n S(n,h).
inline LimitA limit_A(StripPoint s, const QOrdering& ordering, std::size_t h, double tol) {
  if (h == 0) return {};
  const auto prefix = ordering.prefix(h);
  double mass = 0;
  for (const auto& q : prefix) mass += std::abs(power_minus_s(static_cast<double>(q.value), s));
  const auto eta = eta_accel(s, tol / std::max(1.0, mass));
  return limit_a_sequence(s, prefix, eta).back();
}

struct LimitB {
  double B_cos = 0;
  double B_sin = 0;
  double directError = 0;
  double oracle_cos = 0;
  double oracle_sin = 0;
  double oracleError = 0;
  double discrepancy = 0;
  bool agrees = false;
};

/// Largest L with 2^L <= n.
inline std::uint64_t gamma_levels_within(std::uint64_t n) { return static_cast<std::uint64_t>(std::bit_width(n)) - 1; }

/// sum_{k<=n} f(k) phi(k), smoothed by averaged tail. The powers of two above
/// the budget are missing from the sum, so their tail bound joins the estimate.
inline SeriesResult f_weighted_direct(StripPoint s, std::uint64_t budget) {
  auto r = averaged_tail_sum([&](std::uint64_t k) { return static_cast<double>(f_closed(k)) * phi(k, s); }, budget);
  r.errorEstimate += gamma_tail_bound(s, gamma_levels_within(budget));
  return r;
}

/// The other iterated limit: direct truncated estimate of sum f(k) a_k
/// (and b_k) next to the closed form geom_closed(s) - eta(s).
inline LimitB limit_B(StripPoint s, std::uint64_t budget, double tol) {
  if (budget == 0) throw PreconditionError("limit_B requires budget >= 1");
  const auto direct = f_weighted_direct(s, budget);
  const auto eta = eta_accel(s, tol);
  const Complex oracle = geom_closed(s) - eta.value;
  LimitB r;
  r.B_cos = direct.value.real();
  r.B_sin = -direct.value.imag();
  r.directError = direct.errorEstimate;
  r.oracle_cos = oracle.real();
  r.oracle_sin = -oracle.imag();
  r.oracleError = eta.errorEstimate;
  r.discrepancy = std::abs(direct.value - oracle);
  r.agrees = r.discrepancy <= r.directError + r.oracleError + tol;
  return r;
}

struct LimitReport {
  StripPoint point{1, 0};
  std::string orderingId;
  std::vector<double> A_cos;  // A_cos[h-1] = lim_n C(n,h)
  std::vector<double> A_sin;
  double A_error = 0;
  bool A_converged = false;
  double A_variation = 0;  // spread of the last quarter of A
  double B_cos = 0;  // the h-first limit used for the gap: the closed form
  double B_sin = 0;
  double oracleB_cos = 0;  // Re(geom - eta)
  double oracleB_sin = 0;  // -Im(geom - eta)
  double directB_cos = 0;  // averaged truncation at budget, 0 when budget = 0
  double directB_sin = 0;
  double directB_error = 0;
  double B_discrepancy = 0;
  double gap_cos = 0;
  double gap_sin = 0;
  double eta_re = 0;
  double eta_im = 0;
  double eta_error = 0;
  std::size_t hMax = 0;
  std::uint64_t budget = 0;
  double etaTol = 0;
  double convergenceTol = 0;
};

struct GapOptions {
  double etaTol = 1e-12;
  double convergenceTol = 1e-6;
};

/// Both iterated limits and their difference gap = B - A(hMax).
///
/// B is the closed form; the direct averaged-tail estimate at budget is
/// reported next to it when budget > 0. A is declared converged only when its
/// last quarter (cos and sin) spans less than convergenceTol.
inline LimitReport commutativity_gap(StripPoint s, const QOrdering& ordering, std::size_t hMax,
                                     std::uint64_t budget, GapOptions opt = {}) {
  LimitReport r;
  r.point = s;
  r.orderingId = ordering.descriptor();
  r.hMax = hMax;
  r.budget = budget;
  r.etaTol = opt.etaTol;
  r.convergenceTol = opt.convergenceTol;

  const auto eta = eta_accel(s, opt.etaTol);
  r.eta_re = eta.value.real();
  r.eta_im = eta.value.imag();
  r.eta_error = eta.errorEstimate;

  const auto prefix = ordering.prefix(hMax);
  for (const auto& a : limit_a_sequence(s, prefix, eta)) {
    r.A_cos.push_back(a.cos);
    r.A_sin.push_back(a.sin);
    r.A_error = a.errorEstimate;
  }
  if (hMax > 0) {
    const std::size_t from = (3 * hMax) / 4;
    const auto spread = [&](const std::vector<double>& v) {
      const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(from), v.end());
      return *hi - *lo;
    };
    r.A_variation = std::max(spread(r.A_cos), spread(r.A_sin));
    r.A_converged = r.A_variation < opt.convergenceTol;
  }

  const Complex oracle = geom_closed(s) - eta.value;
  r.oracleB_cos = oracle.real();
  r.oracleB_sin = -oracle.imag();
  r.B_cos = r.oracleB_cos;
  r.B_sin = r.oracleB_sin;
  if (budget > 0) {
    const auto direct = f_weighted_direct(s, budget);
    r.directB_cos = direct.value.real();
    r.directB_sin = -direct.value.imag();
    r.directB_error = direct.errorEstimate;
    r.B_discrepancy = std::abs(direct.value - oracle);
  }
  const double aCos = r.A_cos.empty() ? 0.0 : r.A_cos.back();
  const double aSin = r.A_sin.empty() ? 0.0 : r.A_sin.back();
  r.gap_cos = r.B_cos - aCos;
  r.gap_sin = r.B_sin - aSin;
  return r;
}

/// Numerical check of sum_Gamma phi = sum phi + sum f(k) phi(k). The oracle
/// path uses the closed forms; the direct path truncates both sides at budget.
struct ContradictionReport {
  StripPoint point{1, 0};
  Complex gammaSide;        // gamma_partial summed until its tail is negligible
  Complex geom;             // closed form of the same quantity
  Complex eta;              // accelerated
  Complex fSumOracle;       // geom - eta
  Complex fSumDirect;       // averaged truncation at budget
  Complex gammaAtBudget;    // powers of two up to budget
  double oracleResidual_cos = 0;
  double oracleResidual_sin = 0;
  double directResidual_cos = 0;
  double directResidual_sin = 0;
  std::uint64_t gammaLevels = 0;
  std::uint64_t budget = 0;
};

inline ContradictionReport rh_contradiction_check(StripPoint s, std::uint64_t budget, double etaTol = 1e-12) {
  if (budget == 0) throw PreconditionError("contradiction check requires budget >= 1");
  ContradictionReport r;
  r.point = s;
  r.budget = budget;
  std::uint64_t levels = 1;
  while (levels < 4096 && gamma_tail_bound(s, levels) > 1e-16) ++levels;
  r.gammaLevels = levels;
  r.gammaSide = gamma_partial(s, levels);
  r.geom = geom_closed(s);
  r.eta = eta_accel(s, etaTol).value;
  r.fSumOracle = r.geom - r.eta;
  r.fSumDirect = f_weighted_direct(s, budget).value;
  const Complex oracleDiff = r.gammaSide - (r.eta + r.fSumOracle);
  r.gammaAtBudget = gamma_partial(s, gamma_levels_within(budget));
  const Complex directDiff = r.gammaAtBudget - (r.eta + r.fSumDirect);
  r.oracleResidual_cos = std::abs(oracleDiff.real());
  r.oracleResidual_sin = std::abs(oracleDiff.imag());
  r.directResidual_cos = std::abs(directDiff.real());
  r.directResidual_sin = std::abs(directDiff.imag());
  return r;
}

}  // namespace etaq

#endif  // ETAQ_LIMITS_HPP
