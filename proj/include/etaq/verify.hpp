#ifndef ETAQ_VERIFY_HPP
#define ETAQ_VERIFY_HPP

// Self-check suite run by `etaq verify`: each check compares two independent
// routes to the same quantity at a fixed tolerance.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "etaq/limits.hpp"
#include "etaq/qset.hpp"
#include "etaq/series.hpp"

namespace etaq {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  std::uint64_t kMax = 100'000;
  std::uint64_t directBudget = 1'000'000;
  bool injectFault = false;  // flips the sign of f_closed inside the first check
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
  const CheckResult* first_failure() const {
    for (const auto& c : checks) {
      if (!c.passed) return &c;
    }
    return nullptr;
  }
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline const std::vector<StripPoint>& verify_grid() {
  static const std::vector<StripPoint> grid = {{0.5, 0},  {0.5, 14.134725141734693}, {0.75, 3},
                                               {0.3, 7.5}, {2, 0},                    {1.5, -4}};
  return grid;
}

}  // namespace detail

inline VerifyReport run_verify(const VerifyOptions& opt = {}) {
  VerifyReport report;
  auto run = [&](const std::string& name, const std::function<std::string(bool&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r{name, true, {}, 0};
    try {
      r.detail = body(r.passed);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.checks.push_back(std::move(r));
  };

  run("f_closed_vs_bruteforce", [&](bool& ok) {
    for (std::uint64_t k = 1; k <= opt.kMax; ++k) {
      const int closed = opt.injectFault ? -f_closed(k) : f_closed(k);
      if (closed != f_bruteforce(k)) {
        ok = false;
        return "mismatch at k=" + std::to_string(k);
      }
    }
    return "k <= " + std::to_string(opt.kMax);
  });

  run("surface_vs_definition", [&](bool& ok) {
    const auto ordering = QOrdering::by_value(1000);
    const auto prefix = ordering.prefix(50);
    std::vector<std::uint64_t> nAxis(200), hAxis(50);
    for (std::uint64_t i = 0; i < 200; ++i) nAxis[i] = i + 1;
    for (std::uint64_t i = 0; i < 50; ++i) hAxis[i] = i + 1;
    double worst = 0;
    for (const auto& s : {StripPoint(0.5, 14.134725141734693), StripPoint(0.75, 3)}) {
      const auto surf = c_s_surface(s, ordering, nAxis, hAxis);
      for (std::size_t j = 0; j < hAxis.size(); ++j) {
        double c = 0, sn = 0, mass = 0;
        for (std::size_t i = 0; i < nAxis.size(); ++i) {
          const auto t = term_ab(nAxis[i], s);
          const int f = f_kh(nAxis[i], prefix, hAxis[j]);
          c += f * t.a;
          sn += f * t.b;
          mass += std::abs(f) * std::hypot(t.a, t.b);
          const double err = std::max(std::abs(surf.c(i, j) - c), std::abs(surf.s(i, j) - sn)) / (1 + mass);
          worst = std::max(worst, err);
        }
      }
    }
    ok = worst <= 1e-12;
    return "max scaled difference " + detail::sci(worst);
  });

  run("classical_values", [&](bool& ok) {
    const double e1 = std::abs(eta_accel({1, 0}, 1e-13).value - std::numbers::ln2);
    const double e2 = std::abs(eta_accel({2, 0}, 1e-13).value - std::numbers::pi * std::numbers::pi / 12);
    const double z2 = std::abs(zeta_from_eta({2, 0}, 1e-12).value - std::numbers::pi * std::numbers::pi / 6);
    ok = e1 <= 1e-12 && e2 <= 1e-12 && z2 <= 1e-9;
    return "eta(1) " + detail::sci(e1) + ", eta(2) " + detail::sci(e2) + ", zeta(2) " + detail::sci(z2);
  });

  run("bridge_identity", [&](bool& ok) {
    double worst = 0;
    for (const auto& s : detail::verify_grid()) {
      const auto eta = eta_accel(s, 1e-12);
      const auto zeta = zeta_from_eta(s, 1e-12);
      const Complex denom = 1.0 - 2.0 * power_minus_s(2.0, s);
      worst = std::max(worst, std::abs(denom * zeta.value - eta.value));
    }
    ok = worst <= 1e-11;
    return "max |(1-2^(1-s)) zeta - eta| " + detail::sci(worst);
  });

  run("geometric_algebra", [&](bool& ok) {
    double worstAlg = 0;
    double worstBound = 1e300;
    for (int i = 1; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) {
        const StripPoint s(i / 41.0, -30 + 1.5 * j);
        const Complex g = geom_closed(s);
        const Complex lhs = g * (1.0 - power_minus_s(2.0, s));
        const Complex rhs = 1.0 - 2.0 * power_minus_s(2.0, s);
        worstAlg = std::max(worstAlg, std::abs(lhs - rhs));
        const double tx = std::exp2(s.x());
        worstBound = std::min(worstBound, std::abs(g) - (2 - tx) / (tx + 1));
      }
    }
    ok = worstAlg <= 1e-14 && worstBound >= 0;
    return "algebra " + detail::sci(worstAlg) + ", min |geom| - bound " + detail::sci(worstBound);
  });

  run("gamma_partial_tail", [&](bool& ok) {
    double worst = 0;
    for (const auto& s : detail::verify_grid()) {
      for (std::uint64_t L : {0, 1, 5, 20, 60}) {
        const double diff = std::abs(gamma_partial(s, L) - geom_closed(s));
        worst = std::max(worst, diff - gamma_tail_bound(s, L) - 1e-15);
      }
    }
    ok = worst <= 0;
    return "max excess over tail bound " + detail::sci(worst);
  });

  run("subseries_oracle", [&](bool& ok) {
    double worst = 0;
    for (const auto& s : {StripPoint(0.75, 3), StripPoint(0.5, 14.134725141734693), StripPoint(2, 0)}) {
      for (std::uint64_t q : {1, 3, 5, 9, 15}) {
        const auto direct = subseries_q_direct(s, q, 200'000);
        const auto oracle = subseries_q_oracle(s, q, 1e-12);
        worst = std::max(worst, std::abs(direct.value - oracle.value) / (direct.errorEstimate + 1e-11));
      }
    }
    ok = worst <= 1;
    return "max difference / tail estimate " + detail::sci(worst);
  });

  run("shifted_sums", [&](bool& ok) {
    double worst = 0;
    for (const double shift : {1.0, 2.0, std::numbers::e, 0.3}) {
      const StripPoint s(0.75, 5);
      const auto direct = shifted_sums(s, shift, 100'000, SeriesMethod::AveragedTail);
      const auto limit = shifted_sums_limit(s, shift, 1e-12);
      worst = std::max({worst, std::abs(direct.cosSum - limit.cosSum), std::abs(direct.sinSum - limit.sinSum)});
    }
    ok = worst <= 1e-3;
    return "max difference " + detail::sci(worst);
  });

  run("contradiction_chain", [&](bool& ok) {
    double oracle = 0;
    double direct = 0;
    for (const auto& s : detail::verify_grid()) {
      const auto r = rh_contradiction_check(s, opt.directBudget);
      oracle = std::max({oracle, r.oracleResidual_cos, r.oracleResidual_sin});
      direct = std::max({direct, r.directResidual_cos, r.directResidual_sin});
    }
    ok = oracle <= 1e-10 && direct <= 5e-3;
    return "oracle path " + detail::sci(oracle) + ", direct path " + detail::sci(direct);
  });

  return report;
}

}  // namespace etaq

#endif  // ETAQ_VERIFY_HPP
