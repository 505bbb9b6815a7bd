#ifndef ETAQ_ZEROS_HPP
#define ETAQ_ZEROS_HPP

// Critical-line zero ordinates: ingestion from text files, grid scanning of
// |eta(1/2 + iy)|, and golden-section refinement.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "etaq/errors.hpp"
#include "etaq/series.hpp"

namespace etaq {

enum class ZeroSource { File, Scan };

inline const char* source_name(ZeroSource s) { return s == ZeroSource::File ? "File" : "Scan"; }

struct ZeroRecord {
  double ordinate = 0;
  ZeroSource source = ZeroSource::Scan;
  double residual = 0;  // |eta(1/2 + i ordinate)|
  bool refined = false;
};

/// Refinement failed to reach the requested residual. Carries the best record.
class RefinementError : public Error {
public:
  RefinementError(const std::string& what, ZeroRecord best) : Error(what), best_(best) {}
  const ZeroRecord& best() const noexcept { return best_; }

private:
  ZeroRecord best_;
};

inline constexpr double kDuplicateOrdinate = 1e-6;
inline constexpr double kLineEtaTol = 1e-11;

inline double eta_abs_on_line(double y, double tol = kLineEtaTol) {
  return std::abs(eta_accel(StripPoint(0.5, y), tol).value);
}

/// Parses one ordinate per line; blank lines and '#' comments are skipped.
inline std::vector<ZeroRecord> load_zeros(std::istream& in) {
  std::vector<ZeroRecord> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string_view v(line);
    const auto first = v.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    v.remove_prefix(first);
    if (v.front() == '#') continue;
    v = v.substr(0, v.find_last_not_of(" \t\r") + 1);
    double y = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), y);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ParseError(lineNo, "not a decimal ordinate: '" + std::string(v) + "'");
    }
    if (!(y > 0) || !std::isfinite(y)) throw ParseError(lineNo, "ordinate must be positive");
    if (!out.empty()) {
      if (y <= out.back().ordinate) throw ParseError(lineNo, "ordinates must be strictly ascending");
      if (y - out.back().ordinate < kDuplicateOrdinate) continue;
    }
    out.push_back({y, ZeroSource::File, 0, false});
  }
  for (auto& r : out) r.residual = eta_abs_on_line(r.ordinate);
  return out;
}

inline std::vector<ZeroRecord> load_zeros(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read zero file '" + path + "'");
  return load_zeros(in);
}

struct ScanOptions {
  std::size_t maxGridPoints = 10'000'000;
  unsigned threads = 1;
  double etaTol = 1e-10;
};

/// Grid local minima of |eta(1/2 + iy)| below threshold, unrefined.
inline std::vector<ZeroRecord> scan_zeros(double yMin, double yMax, double step, double threshold,
                                          ScanOptions opt = {}) {
  if (!(yMin >= 0) || !(step > 0) || yMax < yMin) {
    throw PreconditionError("scan requires 0 <= yMin <= yMax and step > 0");
  }
  if (yMax == yMin) return {};
  const double span = (yMax - yMin) / step;
  if (span + 1 > static_cast<double>(opt.maxGridPoints)) {
    throw PreconditionError("scan grid exceeds " + std::to_string(opt.maxGridPoints) + " points");
  }
  const auto last = static_cast<std::size_t>(std::floor(span + 1e-9));
  std::vector<double> ys(last + 1);
  for (std::size_t i = 0; i <= last; ++i) ys[i] = yMin + static_cast<double>(i) * step;
  std::vector<double> mag(ys.size());

  const unsigned workers = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(ys.size())));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) mag[i] = eta_abs_on_line(ys[i], opt.etaTol);
  };
  if (workers == 1) {
    work(0, ys.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (ys.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(ys.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }

  std::vector<ZeroRecord> out;
  for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
    if (mag[i] < threshold && mag[i] < mag[i - 1] && mag[i] <= mag[i + 1]) {
      out.push_back({ys[i], ZeroSource::Scan, mag[i], false});
    }
  }
  return out;
}

/// Golden-section minimization of |eta(1/2 + iy)|^2 on [y0 - window, y0 + window].
inline ZeroRecord refine_zero(double y0, double window, double tol, ZeroSource source = ZeroSource::Scan) {
  if (!(window > 0) || !(tol > 0)) throw PreconditionError("refine requires window > 0 and tol > 0");
  const double invPhi = (std::sqrt(5.0) - 1) / 2;
  auto f = [](double y) {
    const double m = eta_abs_on_line(y);
    return m * m;
  };
  double a = std::max(y0 - window, 0.0);
  double b = y0 + window;
  double c = b - invPhi * (b - a);
  double d = a + invPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  const double stop = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(y0));
  for (int iter = 0; iter < 200 && (b - a) > stop; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invPhi * (b - a);
      fd = f(d);
    }
  }
  const double y = fc < fd ? c : d;
  ZeroRecord r{y, source, eta_abs_on_line(y), true};
  if (!(r.residual <= tol)) {
    r.refined = false;
    throw RefinementError("no zero in window around " + std::to_string(y0) + ": best residual " +
                              std::to_string(r.residual) + " exceeds " + std::to_string(tol),
                          r);
  }
  return r;
}

/// Sorts by ordinate and drops records within kDuplicateOrdinate of the previous one.
inline std::vector<ZeroRecord> dedupe_zeros(std::vector<ZeroRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const ZeroRecord& l, const ZeroRecord& r) { return l.ordinate < r.ordinate; });
  std::vector<ZeroRecord> out;
  for (const auto& r : records) {
    if (out.empty() || r.ordinate - out.back().ordinate >= kDuplicateOrdinate) out.push_back(r);
  }
  return out;
}

/// Scan followed by refinement of every candidate within one grid step.
inline std::vector<ZeroRecord> scan_and_refine(double yMin, double yMax, double step, double threshold,
                                               double tol, ScanOptions opt = {}) {
  std::vector<ZeroRecord> refined;
  for (const auto& cand : scan_zeros(yMin, yMax, step, threshold, opt)) {
    refined.push_back(refine_zero(cand.ordinate, step, tol));
  }
  return dedupe_zeros(std::move(refined));
}

}  // namespace etaq

#endif  // ETAQ_ZEROS_HPP
