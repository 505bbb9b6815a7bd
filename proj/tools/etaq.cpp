// etaq: command-line front end for the eta / Q-sum toolkit.
//
// Exit codes: 0 success, 1 failed check or numerical failure, 2 usage or
// precondition error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "etaq/etaq.hpp"
#include "etaq/io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

json manifest(const std::string& command, json parameters) {
  return {{"command", command},
          {"parameters", std::move(parameters)},
          {"toolVersion", etaq::kVersion},
          {"methods",
           {{"eta", "ChebyshevAccelerated(cohen-villegas-zagier-1)"},
            {"directSums", "AveragedTail(levels=3)"},
            {"accumulation", "neumaier"},
            {"rng", etaq::SplitMix64::kAlgorithmId}}},
          {"timestamp", utc_timestamp()}};
}

// Writes the payload and a sidecar `<path>.manifest.json`. The payload never
// contains the timestamp, so identical parameters give identical bytes.
void write_output(const std::string& path, const std::string& payload, const json& mf) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw etaq::PreconditionError("cannot write '" + path + "'");
  out << payload;
  std::ofstream side(path + ".manifest.json", std::ios::binary);
  side << mf.dump(2) << '\n';
}

// byvalue | byfactorcount | shuffle:SEED:PREFIX | explicit:q1,q2,...
etaq::QOrdering parse_ordering(const std::string& spec, std::uint64_t bound) {
  if (spec == "byvalue") return etaq::QOrdering::by_value(bound);
  if (spec == "byfactorcount") return etaq::QOrdering::by_factor_count_then_value(bound);
  if (spec.rfind("shuffle:", 0) == 0) {
    const auto rest = spec.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw etaq::PreconditionError("shuffle ordering needs shuffle:SEED:PREFIX");
    return etaq::QOrdering::seeded_shuffle(std::stoull(rest.substr(0, colon)), std::stoull(rest.substr(colon + 1)),
                                           bound);
  }
  if (spec.rfind("explicit:", 0) == 0) {
    std::vector<etaq::OddSquarefree> head;
    std::stringstream ss(spec.substr(9));
    std::string item;
    while (std::getline(ss, item, ',')) head.push_back(etaq::make_q(std::stoull(item)));
    return etaq::QOrdering::explicit_order(std::move(head), bound);
  }
  throw etaq::PreconditionError("unknown ordering '" + spec + "'");
}

std::size_t needed_elements(const std::string& spec, std::size_t hMax) {
  if (spec.rfind("shuffle:", 0) == 0) {
    const auto colon = spec.find(':', 8);
    if (colon != std::string::npos) return std::max<std::size_t>(hMax, std::stoull(spec.substr(colon + 1)));
  }
  return hMax;
}

std::string complex_text(etaq::Complex v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.12f %c %.12fi", v.real(), v.imag() < 0 ? '-' : '+', std::abs(v.imag()));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet eta, Q-indexed double sums and iterated-limit diagnostics"};
  app.require_subcommand(1);
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", etaq::kVersion);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the identity and property self-check suite");
  etaq::VerifyOptions vopt;
  std::string verifyJson;
  verify->add_option("--k-max", vopt.kMax, "Upper k for the f(k) closed form vs brute force check");
  verify->add_option("--budget", vopt.directBudget, "Direct-sum budget for the contradiction chain");
  verify->add_option("--json", verifyJson, "Write a machine-readable summary here");
  verify->add_flag("--inject-fault", vopt.injectFault)->group("");

  // eta / zeta
  double ex = 0, ey = 0, etol = 1e-12;
  auto* eta = app.add_subcommand("eta", "Evaluate eta(x + iy)");
  eta->add_option("x", ex)->required();
  eta->add_option("y", ey)->required();
  eta->add_option("--tol", etol);
  auto* zeta = app.add_subcommand("zeta", "Evaluate zeta(x + iy) = eta / (1 - 2^(1-s))");
  zeta->add_option("x", ex)->required();
  zeta->add_option("y", ey)->required();
  zeta->add_option("--tol", etol);

  // surface
  auto* surface = app.add_subcommand("surface", "Write C(n,h), S(n,h) as CSV");
  surface->set_help_flag("--help", "Print this help message and exit");
  double sx = 0.5, sy = 0;
  std::string sOrdering = "byvalue", sN, sH, sOut;
  std::uint64_t sBound = 0;
  surface->add_option("--x", sx);
  surface->add_option("--y", sy);
  surface->add_option("--ordering", sOrdering, "byvalue | byfactorcount | shuffle:SEED:PREFIX | explicit:q1,q2,...");
  surface->add_option("--n", sN, "n axis: start:stop[:step] or comma list")->required();
  surface->add_option("--h", sH, "h axis: start:stop[:step] or comma list")->required();
  surface->add_option("--bound", sBound, "Q enumeration bound (default: just enough)");
  surface->add_option("--out", sOut, "Output CSV path (default stdout)");

  // gap
  auto* gap = app.add_subcommand("gap", "Both iterated limits and their gap as JSON");
  double gx = 0.5, gy = 14.134725141734693, gEtaTol = 1e-12, gConvTol = 1e-6;
  std::string gOrdering = "byvalue", gOut;
  std::uint64_t gBound = 10'000, gBudget = 1'000'000;
  std::size_t gHMax = 0;
  gap->add_option("--x", gx);
  gap->add_option("--y", gy);
  gap->add_option("--ordering", gOrdering);
  gap->add_option("--q-bound", gBound, "Enumerate Q up to this value");
  gap->add_option("--h-max", gHMax, "Number of Q elements (default: all up to --q-bound)");
  gap->add_option("--budget", gBudget, "Direct-sum budget for the h-first limit (0: closed form only)");
  gap->add_option("--eta-tol", gEtaTol);
  gap->add_option("--convergence-tol", gConvTol);
  gap->add_option("--out", gOut);

  // zeros
  auto* zeros = app.add_subcommand("zeros", "Critical-line zero ordinates");
  zeros->require_subcommand(1);
  std::string zOut;
  auto* zScan = zeros->add_subcommand("scan", "Grid scan of |eta(1/2 + iy)|");
  double yMin = 0, yMax = 25.02, zStep = 0.01, zThreshold = 0.05, zTol = 1e-9;
  bool zRefine = false;
  zScan->add_option("--y-min", yMin);
  zScan->add_option("--y-max", yMax);
  zScan->add_option("--step", zStep);
  zScan->add_option("--threshold", zThreshold);
  zScan->add_flag("--refine", zRefine, "Refine every candidate");
  zScan->add_option("--tol", zTol);
  zScan->add_option("--out", zOut);
  auto* zRefineCmd = zeros->add_subcommand("refine", "Golden-section refinement near y0");
  double y0 = 14.13, zWindow = 0.05;
  zRefineCmd->add_option("--y0", y0)->required();
  zRefineCmd->add_option("--window", zWindow);
  zRefineCmd->add_option("--tol", zTol);
  zRefineCmd->add_option("--out", zOut);
  auto* zLoad = zeros->add_subcommand("load", "Read ordinates from a text file");
  std::string zFile;
  zLoad->add_option("--file", zFile, "One ordinate per line, '#' comments")->required();
  zLoad->add_option("--out", zOut);

  // search
  auto* search = app.add_subcommand("search", "Simulated annealing over Q-prefix orderings");
  etaq::SearchConfig cfg;
  cfg.prefixLength = 32;
  cfg.iterations = 200;
  cfg.objective.n0 = 2000;
  cfg.objective.n1 = 4000;
  cfg.objective.hMax = 32;
  std::string neighborhood = "adjacent", traceOut, bestOut;
  std::vector<std::string> pointSpecs;
  search->add_option("--seed", cfg.seed);
  search->add_option("--prefix", cfg.prefixLength);
  search->add_option("--iters", cfg.iterations);
  search->add_option("--neighborhood", neighborhood)->check(CLI::IsMember({"adjacent", "random"}));
  search->add_option("--t0", cfg.initialTemperature);
  search->add_option("--decay", cfg.decay);
  search->add_option("--point", pointSpecs, "Objective point x,y (repeatable; default 0.75,3)");
  search->add_option("--n0", cfg.objective.n0);
  search->add_option("--n1", cfg.objective.n1);
  search->add_option("--h-max", cfg.objective.hMax);
  search->add_option("--trace", traceOut, "Trace CSV path (default stdout)");
  search->add_option("--best", bestOut, "Best ordering JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*verify) {
      const auto report = etaq::run_verify(vopt);
      json summary = json::array();
      for (const auto& c : report.checks) {
        std::printf("%-24s %s  %s  (%.2fs)\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.detail.c_str(), c.seconds);
        summary.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"seconds", c.seconds}});
      }
      if (!verifyJson.empty()) {
        const json doc = {{"passed", report.passed()}, {"checks", summary}};
        write_output(verifyJson, doc.dump(2) + "\n",
                     manifest("verify", {{"kMax", vopt.kMax}, {"budget", vopt.directBudget}}));
      }
      if (const auto* bad = report.first_failure()) {
        std::fprintf(stderr, "verify failed: %s\n", bad->name.c_str());
        return kExitCheck;
      }
      return 0;
    }

    if (*eta) {
      const auto r = etaq::eta_accel({ex, ey}, etol);
      std::printf("%s\nerror estimate %.3e (%zu terms, %s)\n", complex_text(r.value).c_str(), r.errorEstimate,
                  r.termsUsed, etaq::method_name(r.method));
      return 0;
    }

    if (*zeta) {
      const auto r = etaq::zeta_from_eta({ex, ey}, etol);
      std::printf("%s\nerror estimate %.3e (%zu terms, %s)\n", complex_text(r.value).c_str(), r.errorEstimate,
                  r.termsUsed, etaq::method_name(r.method));
      return 0;
    }

    if (*surface) {
      const auto nAxis = etaq::parse_range(sN);
      const auto hAxis = etaq::parse_range(sH);
      const std::uint64_t bound =
          sBound ? sBound : etaq::bound_for_count(needed_elements(sOrdering, hAxis.back()), nAxis.back());
      const auto ordering = parse_ordering(sOrdering, bound);
      std::ostringstream csv;
      etaq::write_surface_header(csv);
      etaq::c_s_surface_stream({sx, sy}, ordering, nAxis, hAxis,
                               [&](std::uint64_t n, std::span<const double> c, std::span<const double> s) {
                                 etaq::write_surface_row(csv, n, hAxis, c, s);
                               });
      write_output(sOut, csv.str(),
                   manifest("surface", {{"x", sx}, {"y", sy}, {"ordering", ordering.descriptor()}, {"n", sN}, {"h", sH}}));
      return 0;
    }

    if (*gap) {
      const auto ordering = parse_ordering(gOrdering, gBound);
      const std::size_t hMax = gHMax ? gHMax : ordering.materialize().size();
      const auto report =
          etaq::commutativity_gap({gx, gy}, ordering, hMax, gBudget, {.etaTol = gEtaTol, .convergenceTol = gConvTol});
      write_output(gOut, etaq::to_json(report).dump(2) + "\n",
                   manifest("gap", {{"x", gx},
                                    {"y", gy},
                                    {"ordering", ordering.descriptor()},
                                    {"hMax", hMax},
                                    {"budget", gBudget},
                                    {"etaTol", gEtaTol},
                                    {"convergenceTol", gConvTol}}));
      return 0;
    }

    if (*zeros) {
      std::vector<etaq::ZeroRecord> records;
      json params;
      if (*zScan) {
        etaq::ScanOptions opt;
        opt.threads = threads;
        records = zRefine ? etaq::scan_and_refine(yMin, yMax, zStep, zThreshold, zTol, opt)
                          : etaq::scan_zeros(yMin, yMax, zStep, zThreshold, opt);
        params = {{"mode", "scan"},      {"yMin", yMin},       {"yMax", yMax}, {"step", zStep},
                  {"threshold", zThreshold}, {"refine", zRefine}, {"tol", zTol}};
      } else if (*zRefineCmd) {
        records.push_back(etaq::refine_zero(y0, zWindow, zTol));
        params = {{"mode", "refine"}, {"y0", y0}, {"window", zWindow}, {"tol", zTol}};
      } else {
        records = etaq::load_zeros(zFile);
        params = {{"mode", "load"}, {"file", zFile}};
      }
      std::ostringstream csv;
      etaq::write_zeros_csv(csv, records);
      write_output(zOut, csv.str(), manifest("zeros", params));
      return 0;
    }

    if (*search) {
      cfg.neighborhood = neighborhood == "random" ? etaq::Neighborhood::RandomSwap : etaq::Neighborhood::AdjacentSwap;
      if (pointSpecs.empty()) pointSpecs.push_back("0.75,3");
      for (const auto& p : pointSpecs) {
        const auto comma = p.find(',');
        if (comma == std::string::npos) throw etaq::PreconditionError("--point expects x,y");
        cfg.objective.points.emplace_back(std::stod(p.substr(0, comma)), std::stod(p.substr(comma + 1)));
      }
      const auto result = etaq::anneal(cfg);
      std::ostringstream csv;
      etaq::write_trace_csv(csv, result.trace);
      const json mf = manifest("search", etaq::to_json(cfg));
      write_output(traceOut, csv.str(), mf);
      if (!bestOut.empty()) write_output(bestOut, etaq::best_to_json(result).dump(2) + "\n", mf);
      std::fprintf(stderr, "initial objective %.6e, best %.6e\n", result.initial.objective, result.best.objective);
      return 0;
    }
  } catch (const etaq::PoleError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const etaq::SingularDenominatorError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const etaq::PreconditionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const etaq::EnumerationShortfall& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const etaq::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: malformed number (%s)\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheck;
  }
  return 0;
}
