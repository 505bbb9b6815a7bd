#ifndef ETAQ_SERIES_HPP
#define ETAQ_SERIES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "etaq/compensated.hpp"
#include "etaq/errors.hpp"
#include "etaq/qset.hpp"

namespace etaq {

using Complex = std::complex<double>;

/// Evaluation point s = x + iy with x > 0.
class StripPoint {
public:
  StripPoint(double x, double y) : x_(x), y_(y) {
    if (!(x > 0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw PreconditionError("evaluation point requires finite x > 0 and finite y");
    }
  }

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  Complex s() const noexcept { return {x_, y_}; }
  bool inCriticalStrip() const noexcept { return x_ < 1; }

  friend bool operator==(const StripPoint&, const StripPoint&) = default;

private:
  double x_;
  double y_;
};

enum class SeriesMethod { Raw, AveragedTail, ChebyshevAccelerated };

inline const char* method_name(SeriesMethod m) {
  switch (m) {
    case SeriesMethod::Raw: return "Raw";
    case SeriesMethod::AveragedTail: return "AveragedTail";
    case SeriesMethod::ChebyshevAccelerated: return "ChebyshevAccelerated";
  }
  return "?";
}

struct SeriesResult {
  Complex value;
  SeriesMethod method = SeriesMethod::Raw;
  std::size_t termsUsed = 0;
  double errorEstimate = 0;
};

/// k^(-s) = exp(-s ln k) with the real logarithm of k.
inline Complex power_minus_s(double k, StripPoint s) {
  const double lk = std::log(k);
  return std::pow(k, -s.x()) * std::polar(1.0, -s.y() * lk);
}

/// phi(k) = (-1)^(k-1) k^(-s).
inline Complex phi(std::uint64_t k, StripPoint s) {
  const Complex v = power_minus_s(static_cast<double>(k), s);
  return (k % 2 == 1) ? v : -v;
}

struct TermAB {
  double a = 0;
  double b = 0;
};

/// a_k = (-1)^(k-1) k^-x cos(y ln k), b_k the same with sin.
inline TermAB term_ab(std::uint64_t k, StripPoint s) {
  if (k == 0) throw PreconditionError("term index starts at 1");
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  const double lk = std::log(static_cast<double>(k));
  const double mag = sign * std::pow(static_cast<double>(k), -s.x());
  return {mag * std::cos(s.y() * lk), mag * std::sin(s.y() * lk)};
}

inline Complex eta_partial(StripPoint s, std::uint64_t n) {
  CompensatedSum<Complex> acc;
  for (std::uint64_t k = 1; k <= n; ++k) acc += phi(k, s);
  return acc.value();
}

/// Sum of term(1..n) with the last partial sums smoothed by `levels` passes
/// of pairwise averaging. Each pass removes one order of the oscillating
/// tail of an alternating series. The error estimate is the correction made
/// by the final pass.
template <class TermFn>
SeriesResult averaged_tail_sum(TermFn&& term, std::uint64_t n, int levels = 3) {
  CompensatedSum<Complex> acc;
  const std::uint64_t keep = static_cast<std::uint64_t>(levels) + 1;
  std::vector<Complex> tail;
  tail.reserve(keep);
  for (std::uint64_t k = 1; k <= n; ++k) {
    acc += Complex(term(k));
    if (k + keep > n) tail.push_back(acc.value());
  }
  if (n < keep) {
    return {acc.value(), SeriesMethod::Raw, n, std::numeric_limits<double>::infinity()};
  }
  double lastDelta = 0;
  while (tail.size() > 1) {
    std::vector<Complex> next(tail.size() - 1);
    for (std::size_t i = 0; i + 1 < tail.size(); ++i) next[i] = 0.5 * (tail[i] + tail[i + 1]);
    if (next.size() == 1) lastDelta = std::abs(next[0] - tail.back());
    tail = std::move(next);
  }
  return {tail.front(), SeriesMethod::AveragedTail, n, lastDelta};
}

inline SeriesResult eta_averaged(StripPoint s, std::uint64_t n) {
  return averaged_tail_sum([&](std::uint64_t k) { return phi(k, s); }, n);
}

namespace detail {

// log|Gamma(z)| for Re z > 0 via the Lanczos approximation (g = 7, 9 terms).
inline double log_abs_gamma(Complex z) {
  static constexpr std::array<double, 9> kCoef = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  double shift = 0;
  if (z.real() < 0.5) {
    shift = std::log(std::abs(z));
    z += 1.0;
  }
  z -= 1.0;
  Complex series = kCoef[0];
  for (std::size_t i = 1; i < kCoef.size(); ++i) series += kCoef[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  const double lg = 0.5 * std::log(2 * std::numbers::pi) + ((z + 0.5) * std::log(t)).real() - t.real() +
                    std::log(std::abs(series));
  return lg - shift;
}

}  // namespace detail

inline constexpr std::size_t kMaxAccelTerms = 400;

/// Alternating-series acceleration of eta with shifted Chebyshev weights
/// (Cohen, Rodriguez Villegas, Zagier, Algorithm 1).
///
/// With (k+1)^-s = int_0^1 x^k (-ln x)^(s-1) dx / Gamma(s) the truncation
/// error after n terms is at most Gamma(x) / (|Gamma(s)| d_n), where
/// d_n = cosh(n ln(3 + sqrt 8)). The reported estimate is ten times that bound
/// plus a rounding term for the weighted sum and the phases y ln k.
inline SeriesResult eta_accel(StripPoint s, double targetTol, std::size_t maxTerms = kMaxAccelTerms) {
  if (!(targetTol > 0)) throw PreconditionError("targetTol must be positive");
  maxTerms = std::min(maxTerms, kMaxAccelTerms);
  const double rate = std::log(3 + std::sqrt(8.0));
  const double logRatio = std::lgamma(s.x()) - detail::log_abs_gamma(s.s());
  const double logSafety = std::log(10.0);

  auto truncation = [&](std::size_t n) {
    const double nr = static_cast<double>(n) * rate;
    const double logD = nr + std::log1p(std::exp(-2 * nr)) - std::log(2.0);
    return std::exp(logSafety + logRatio - logD);
  };

  const double wanted = (logRatio + logSafety - std::log(0.5 * targetTol) + std::log(2.0)) / rate;
  std::size_t n = static_cast<std::size_t>(std::max(1.0, std::ceil(wanted)));
  n = std::min(n, maxTerms);

  // Weights normalized by d_n so that nothing overflows for n <= 400.
  const double dn = std::cosh(n * rate);
  double b = -1.0 / dn;
  double c = -1.0;
  CompensatedSum<Complex> acc;
  double weighted = 0;
  for (std::size_t k = 0; k < n; ++k) {
    c = b - c;
    const Complex term = power_minus_s(static_cast<double>(k + 1), s);
    acc += c * term;
    weighted += std::abs(c) * std::abs(term);
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    b = (kd + nd) * (kd - nd) * b / ((kd + 0.5) * (kd + 1));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double rounding = eps * weighted * (8 + std::abs(s.y()) * std::log(static_cast<double>(n) + 1));
  SeriesResult r{acc.value(), SeriesMethod::ChebyshevAccelerated, n, truncation(n) + rounding};
  if (!(r.errorEstimate <= targetTol)) {
    throw ConvergenceError("eta acceleration did not reach tolerance within " + std::to_string(maxTerms) +
                               " terms",
                           r.value, r.errorEstimate);
  }
  return r;
}

/// zeta(s) = eta(s) / (1 - 2^(1-s)).
inline SeriesResult zeta_from_eta(StripPoint s, double targetTol) {
  if (s.x() == 1 && s.y() == 0) throw PoleError();
  const Complex denom = 1.0 - 2.0 * power_minus_s(2.0, s);
  if (s.x() == 1 && std::abs(denom) <= 1e-12) throw SingularDenominatorError();
  const double scale = std::abs(denom);
  SeriesResult eta = eta_accel(s, targetTol * std::min(1.0, scale));
  return {eta.value / denom, eta.method, eta.termsUsed, eta.errorEstimate / scale};
}

/// (2^x - 2 e^(-iy ln 2)) / (2^x - e^(-iy ln 2)), the sum of phi over powers of two.
inline Complex geom_closed(StripPoint s) {
  const double twoX = std::exp2(s.x());
  const Complex rot = std::polar(1.0, -s.y() * std::numbers::ln2);
  return (twoX - 2.0 * rot) / (twoX - rot);
}

/// sum_{l=0..L} phi(2^l) = 1 - sum_{l=1..L} 2^(-l s).
inline Complex gamma_partial(StripPoint s, std::uint64_t levels) {
  CompensatedSum<Complex> acc(Complex(1.0));
  for (std::uint64_t l = 1; l <= levels; ++l) {
    const double e = static_cast<double>(l) * std::numbers::ln2;
    acc -= std::exp(-s.x() * e) * std::polar(1.0, -s.y() * e);
  }
  return acc.value();
}

/// Bound on |gamma_partial(s, L) - geom_closed(s)|.
inline double gamma_tail_bound(StripPoint s, std::uint64_t levels) {
  return std::exp2(-static_cast<double>(levels) * s.x()) * 2 / (1 - std::exp2(-s.x()));
}

struct ShiftedSums {
  double cosSum = 0;
  double sinSum = 0;
  double errorEstimate = 0;
};

/// Truncated sums of (-1)^(k-1) k^-x cos(y ln(shift k)) and the sin analogue.
inline ShiftedSums shifted_sums(StripPoint s, double shift, std::uint64_t n,
                                SeriesMethod method = SeriesMethod::Raw) {
  if (!(shift > 0)) throw PreconditionError("shift must be positive");
  const double ls = std::log(shift);
  auto term = [&](std::uint64_t k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    const double lk = std::log(static_cast<double>(k));
    const double mag = sign * std::pow(static_cast<double>(k), -s.x());
    const double angle = s.y() * (ls + lk);
    return Complex(mag * std::cos(angle), mag * std::sin(angle));
  };
  if (method == SeriesMethod::AveragedTail) {
    const auto r = averaged_tail_sum(term, n);
    return {r.value.real(), r.value.imag(), r.errorEstimate};
  }
  CompensatedSum<Complex> acc;
  for (std::uint64_t k = 1; k <= n; ++k) acc += term(k);
  return {acc.value().real(), acc.value().imag(), std::numeric_limits<double>::quiet_NaN()};
}

/// Limits of shifted_sums via angle addition: Re and -Im of shift^(-iy) eta(s).
inline ShiftedSums shifted_sums_limit(StripPoint s, double shift, double tol) {
  if (!(shift > 0)) throw PreconditionError("shift must be positive");
  const auto eta = eta_accel(s, tol);
  const Complex v = std::polar(1.0, -s.y() * std::log(shift)) * eta.value;
  return {v.real(), -v.imag(), eta.errorEstimate};
}

enum class SubseriesMethod { Direct, Oracle };

/// sum_m (-1)^(mq-1) (mq)^-s by truncation at n terms with averaged tail.
inline SeriesResult subseries_q_direct(StripPoint s, std::uint64_t q, std::uint64_t n) {
  if (q == 0 || q % 2 == 0) throw PreconditionError("subseries requires odd q >= 1");
  return averaged_tail_sum(
      [&](std::uint64_t m) {
        const std::uint64_t k = m * q;
        const Complex v = power_minus_s(static_cast<double>(k), s);
        return (k % 2 == 1) ? v : -v;
      },
      n);
}

/// q^-s eta(s).
inline SeriesResult subseries_q_oracle(StripPoint s, std::uint64_t q, double tol) {
  if (q == 0 || q % 2 == 0) throw PreconditionError("subseries requires odd q >= 1");
  const Complex scale = power_minus_s(static_cast<double>(q), s);
  const auto eta = eta_accel(s, tol / std::abs(scale));
  return {scale * eta.value, eta.method, eta.termsUsed, eta.errorEstimate * std::abs(scale)};
}

struct SubseriesBudget {
  std::uint64_t terms = 1'000'000;
  double tol = 1e-12;
};

inline SeriesResult subseries_q(StripPoint s, std::uint64_t q, SubseriesMethod method,
                                SubseriesBudget budget = {}) {
  return method == SubseriesMethod::Direct ? subseries_q_direct(s, q, budget.terms)
                                           : subseries_q_oracle(s, q, budget.tol);
}

struct EulerProducts {
  Complex allPrimes{1.0};
  Complex oddPrimes{1.0};
};

/// prod_{p <= limit} (1 - p^-s) over all primes and over odd primes only.
inline EulerProducts euler_product_check(StripPoint s, std::uint64_t primeLimit) {
  if (!(s.x() > 1)) throw PreconditionError("Euler product requires x > 1");
  EulerProducts out;
  for (const auto p : sieve_primes(primeLimit)) {
    const Complex factor = 1.0 - power_minus_s(static_cast<double>(p), s);
    out.allPrimes *= factor;
    if (p != 2) out.oddPrimes *= factor;
  }
  return out;
}

}  // namespace etaq

#endif  // ETAQ_SERIES_HPP
