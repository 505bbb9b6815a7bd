#ifndef ETAQ_IO_HPP
#define ETAQ_IO_HPP

// Text formats shared by the command-line tool and the tests: integer
// ranges, fixed-precision CSV, and JSON forms of the report types.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "etaq/errors.hpp"
#include "etaq/limits.hpp"
#include "etaq/search.hpp"
#include "etaq/zeros.hpp"

namespace etaq {

/// 17 significant digits, enough to round-trip any double.
inline std::string format_real(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

namespace detail {

inline std::uint64_t parse_u64(std::string_view text, std::string_view whole) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw PreconditionError("malformed range '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace detail

/// "start:stop[:step]" (stop included only when hit exactly), a single
/// value, or a comma-separated list of either.
inline std::vector<std::uint64_t> parse_range(std::string_view text) {
  std::vector<std::uint64_t> out;
  if (text.empty()) throw PreconditionError("empty range");
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t comma = text.find(',', begin);
    const std::string_view part = text.substr(begin, comma == std::string_view::npos ? comma : comma - begin);
    std::vector<std::uint64_t> fields;
    std::size_t fb = 0;
    while (true) {
      const std::size_t colon = part.find(':', fb);
      fields.push_back(detail::parse_u64(part.substr(fb, colon == std::string_view::npos ? colon : colon - fb), text));
      if (colon == std::string_view::npos) break;
      fb = colon + 1;
    }
    if (fields.size() == 1) {
      out.push_back(fields[0]);
    } else if (fields.size() <= 3) {
      const std::uint64_t start = fields[0];
      const std::uint64_t stop = fields[1];
      const std::uint64_t step = fields.size() == 3 ? fields[2] : 1;
      if (step == 0 || stop < start) throw PreconditionError("malformed range '" + std::string(text) + "'");
      for (std::uint64_t v = start; v <= stop; v += step) out.push_back(v);
    } else {
      throw PreconditionError("malformed range '" + std::string(text) + "'");
    }
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) throw PreconditionError("range '" + std::string(text) + "' is not ascending");
  }
  return out;
}

inline void write_surface_header(std::ostream& os) { os << "n,h,C,S\n"; }

inline void write_surface_row(std::ostream& os, std::uint64_t n, std::span<const std::uint64_t> hAxis,
                              std::span<const double> c, std::span<const double> s) {
  for (std::size_t j = 0; j < hAxis.size(); ++j) {
    os << n << ',' << hAxis[j] << ',' << format_real(c[j]) << ',' << format_real(s[j]) << '\n';
  }
}

inline void write_surface_csv(std::ostream& os, const SumSurface& surface) {
  write_surface_header(os);
  const std::size_t w = surface.hAxis.size();
  for (std::size_t i = 0; i < surface.nAxis.size(); ++i) {
    write_surface_row(os, surface.nAxis[i], surface.hAxis, std::span(surface.C).subspan(i * w, w),
                      std::span(surface.S).subspan(i * w, w));
  }
}

inline void write_zeros_csv(std::ostream& os, const std::vector<ZeroRecord>& zeros) {
  os << "ordinate,residual,refined\n";
  for (const auto& z : zeros) {
    os << format_real(z.ordinate) << ',' << format_real(z.residual) << ',' << (z.refined ? "true" : "false") << '\n';
  }
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace) {
  os << "iteration,objective,accepted\n";
  for (const auto& t : trace) {
    os << t.iteration << ',' << format_real(t.objective) << ',' << (t.accepted ? 1 : 0) << '\n';
  }
}

inline nlohmann::json to_json(const StripPoint& p) { return {{"x", p.x()}, {"y", p.y()}}; }

inline nlohmann::json to_json(const LimitReport& r) {
  return {
      {"point", to_json(r.point)},
      {"orderingId", r.orderingId},
      {"A_cos", r.A_cos},
      {"A_sin", r.A_sin},
      {"A_error", r.A_error},
      {"A_converged", r.A_converged},
      {"A_variation", r.A_variation},
      {"B_cos", r.B_cos},
      {"B_sin", r.B_sin},
      {"oracleB_cos", r.oracleB_cos},
      {"oracleB_sin", r.oracleB_sin},
      {"directB_cos", r.directB_cos},
      {"directB_sin", r.directB_sin},
      {"directB_error", r.directB_error},
      {"B_discrepancy", r.B_discrepancy},
      {"gap_cos", r.gap_cos},
      {"gap_sin", r.gap_sin},
      {"eta", {{"re", r.eta_re}, {"im", r.eta_im}, {"errorEstimate", r.eta_error}}},
      {"tolerances", {{"etaTol", r.etaTol}, {"convergenceTol", r.convergenceTol}}},
      {"budgets", {{"hMax", r.hMax}, {"budget", r.budget}}},
  };
}

inline nlohmann::json to_json(const ZeroRecord& z) {
  return {{"ordinate", z.ordinate}, {"source", source_name(z.source)}, {"residual", z.residual}, {"refined", z.refined}};
}

inline nlohmann::json to_json(const ObjectiveSpec& spec) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : spec.points) pts.push_back(to_json(p));
  return {{"points", pts}, {"n0", spec.n0}, {"n1", spec.n1}, {"hMax", spec.hMax}, {"etaTol", spec.etaTol}};
}

inline nlohmann::json to_json(const SearchConfig& c) {
  return {{"seed", c.seed},
          {"prefixLength", c.prefixLength},
          {"iterations", c.iterations},
          {"neighborhood", neighborhood_name(c.neighborhood)},
          {"coolingSchedule", {{"initialTemperature", c.initialTemperature}, {"decay", c.decay}}},
          {"objectiveSpec", to_json(c.objective)},
          {"rng", SplitMix64::kAlgorithmId}};
}

inline nlohmann::json best_to_json(const SearchResult& r) {
  return {{"ordering", r.bestValues},
          {"objective", r.best.objective},
          {"initialObjective", r.initial.objective},
          {"permutation", r.best.permutation}};
}

}  // namespace etaq

#endif  // ETAQ_IO_HPP
