#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wignerlab/canonical_maps.hpp"
#include "wignerlab/errors.hpp"
#include "wignerlab/ksequence.hpp"
#include "wignerlab/map_io.hpp"
#include "wignerlab/preserver.hpp"
#include "wignerlab/report.hpp"
#include "wignerlab/search.hpp"
#include "wignerlab/wigner.hpp"

#ifndef WIGNERLAB_VERSION
#define WIGNERLAB_VERSION "0.1.0"
#endif

namespace wignerlab {

inline constexpr const char* kVersion = WIGNERLAB_VERSION;
inline constexpr const char* kTrialsEnv = "WIGNERLAB_TRIALS";

/// Exit codes: 0 completed, 1 usage/precondition/parse error, 2 numerical
/// failure.
enum ExitCode : int { kExitOk = 0, kExitPrecondition = 1, kExitNumerical = 2 };

/// Trial count: explicit flag, else WIGNERLAB_TRIALS, else the default.
inline std::size_t resolve_trials(std::optional<std::size_t> flag) {
  if (flag) {
    if (*flag < 1) throw PreconditionError("--trials must be a positive integer");
    return *flag;
  }
  const char* env = std::getenv(kTrialsEnv);
  if (env == nullptr || *env == '\0') return kDefaultTrials;
  const std::string s(env);
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || v < 1)
    throw PreconditionError(std::string(kTrialsEnv) + " must be a positive integer, got '" +
                            s + "'");
  return static_cast<std::size_t>(v);
}

/// Every check in the structural suite, each on its own seed stream.
inline std::vector<CheckReport> run_check_suite(const Superoperator& t, Index k,
                                                std::size_t trials, std::uint64_t seed) {
  const Index n = t.dim();
  if (k < 1 || k > n)
    throw InvalidRank("check: need 1 <= k <= n (n=" + std::to_string(n) +
                      ", k=" + std::to_string(k) + ")");
  std::vector<CheckReport> out;
  out.push_back(is_trace_preserving(t));
  out.push_back(is_unital(t));
  out.push_back(is_hs_isometry(t));
  out.push_back(is_invertible(t));
  out.push_back(unit_circle_spectrum(t));
  out.push_back(preserves_rank_k(t, k, trials, derive_seed(seed, 1)));
  out.push_back(preserves_orthogonality(t, k, trials, derive_seed(seed, 2)));
  if (2 * k <= n) out.push_back(preserves_rank_qk(t, k, 2, trials, derive_seed(seed, 3)));
  out.push_back(is_positive_sampled(t, trials, derive_seed(seed, 4)));
  if (out.front().passed)
    out.push_back(trace_norm_contraction_check(t, trials, derive_seed(seed, 5)));
  return out;
}

namespace detail {

inline std::string num(double x) { return format_double(x); }

inline Json suite_json(const std::vector<CheckReport>& reports) {
  Json a = Json::array();
  for (const auto& r : reports) a.push_back(to_json(r));
  return a;
}

inline Json suite_verdict(const std::vector<CheckReport>& reports) {
  Json failed = Json::array();
  for (const auto& r : reports)
    if (!r.passed) failed.push_back(r.name);
  Json v;
  v["all_passed"] = failed.empty();
  v["failed"] = std::move(failed);
  return v;
}

inline void suite_summary(std::ostream& out, const std::vector<CheckReport>& reports,
                          const std::string& indent = "") {
  for (const auto& r : reports) {
    out << "# " << indent << (r.passed ? "PASS " : "FAIL ") << r.name
        << "  max_violation=" << r.max_violation;
    if (r.trials) out << "  trials=" << r.trials;
    if (r.witness) out << "  witness_trial=" << r.witness->trial << " value=" << r.witness->value;
    out << "\n";
  }
}

struct Envelope {
  Json j;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Envelope(const std::vector<std::string>& command, std::optional<std::uint64_t> seed) {
    j["tool"] = "wignerlab";
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
  }

  void emit(std::ostream& out) {
    const auto ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    j["timings"] = Json{{"elapsed_ms", ms}};
    out << j.dump(2) << "\n";
  }
};

// Subcommands ----------------------------------------------------------------

inline int cmd_classify(std::int64_t n, std::int64_t k, std::ostream& out) {
  const KSequence s = compute_sequence(n, k);
  Envelope env({"classify", "--n", std::to_string(n), "--k", std::to_string(k)}, std::nullopt);
  env.j["results"] = to_json(s, k);
  env.j["verdicts"] = Json{{"verdict", to_string(s.verdict)}, {"detail", describe(s)}};
  env.emit(out);
  out << "# classify n=" << n << " k=" << k << ": " << describe(s) << ", ks=[";
  for (std::size_t i = 0; i < s.ks.size(); ++i) out << (i ? "," : "") << s.ks[i];
  out << "]\n";
  return kExitOk;
}

inline int cmd_check(const std::string& path, Index k, std::optional<std::size_t> trials_flag,
                     std::uint64_t seed, std::ostream& out) {
  const std::size_t trials = resolve_trials(trials_flag);
  const Superoperator t = load_map(path);
  const auto suite = run_check_suite(t, k, trials, seed);
  Envelope env({"check", "--map", path, "--k", std::to_string(k), "--trials",
                std::to_string(trials), "--seed", std::to_string(seed)},
               seed);
  env.j["results"] = Json{{"n", t.dim()}, {"k", k}, {"trials", trials},
                          {"checks", suite_json(suite)}};
  env.j["verdicts"] = suite_verdict(suite);
  env.emit(out);
  out << "# check " << path << " (n=" << t.dim() << ", k=" << k << ")\n";
  suite_summary(out, suite);
  return kExitOk;
}

inline int cmd_decompose(const std::string& path, Index k, double tol, std::ostream& out) {
  const Superoperator t = load_map(path);
  const DecompositionResult r = decompose(t, k, tol);
  Envelope env({"decompose", "--map", path, "--k", std::to_string(k), "--tol", num(tol)},
               std::nullopt);
  env.j["results"] = Json{{"n", t.dim()}, {"k", k}, {"decomposition", to_json(r)}};
  env.j["verdicts"] = Json{{"kind", is_wigner_form(r) ? "WignerForm" : "NotWignerForm"}};
  env.emit(out);
  out << "# decompose " << path << ": " << describe(r) << "\n";
  if (const auto* d = std::get_if<Decomposed>(&r))
    out << "# reconstruction_error=" << d->reconstruction_error << "\n";
  return kExitOk;
}

inline int cmd_search(const SearchConfig& cfg, std::ostream& out) {
  const auto cands = optimize(cfg);
  const SearchSummary s = summarize(cands, cfg.residual_accept);
  Envelope env({"search", "--k", std::to_string(cfg.k), "--restarts",
                std::to_string(cfg.restarts), "--seed", std::to_string(cfg.seed),
                "--max-iterations", std::to_string(cfg.max_iterations), "--samples",
                std::to_string(cfg.sample_projectors), "--step", num(cfg.step_size),
                "--floor", num(cfg.invertibility_floor), "--accept",
                num(cfg.residual_accept)},
               cfg.seed);
  Json jc = Json::array();
  for (const auto& c : cands) jc.push_back(to_json(c, cfg.residual_accept));
  env.j["results"] = Json{{"n", 2 * cfg.k}, {"k", cfg.k}, {"candidates", std::move(jc)}};
  env.j["verdicts"] = Json{{"wigner_form", s.wigner},
                           {"wigner_form_reduced", s.wigner_reduced},
                           {"unclassified", s.unclassified},
                           {"above_accept", s.above_accept}};
  env.emit(out);
  out << "# search k=" << cfg.k << " restarts=" << cfg.restarts << " seed=" << cfg.seed << "\n"
      << "# below residual " << cfg.residual_accept << ": " << s.wigner << " Wigner form, "
      << s.wigner_reduced << " Wigner form o R_k, " << s.unclassified << " unclassified\n"
      << "# above accept: " << s.above_accept << "\n";
  for (const auto& c : cands)
    out << "#   restart " << c.restart << "  residual=" << c.residual << "  "
        << describe(c.classification) << "\n";
  return kExitOk;
}

inline int cmd_demo(Index n, Index k, std::uint64_t seed,
                    std::optional<std::size_t> trials_flag, std::ostream& out) {
  const std::size_t trials = resolve_trials(trials_flag);
  detail::require_dimension(n);
  if (k < 1 || k > n) throw InvalidRank("demo: need 1 <= k <= n");

  std::vector<std::pair<std::string, Superoperator>> maps;
  const Eigen::MatrixXcd u = haar_unitary(n, derive_seed(seed, 100));
  maps.emplace_back("wigner", wigner_map(u, false));
  maps.emplace_back("wigner_transpose", wigner_map(u, true));
  if (k < n) maps.emplace_back("reduction", reduction_map(n, k));
  if (n == 2 * k) maps.emplace_back("involution", involution_map(k));
  if (n % 2 == 0 && n >= 4)
    maps.emplace_back("breuer_hall",
                      breuer_hall_map(n / 2, random_antisymmetric_unitary(n / 2, derive_seed(seed, 101))));

  Envelope env({"demo", "--n", std::to_string(n), "--k", std::to_string(k), "--seed",
                std::to_string(seed), "--trials", std::to_string(trials)},
               seed);
  Json results;
  results["n"] = n;
  results["k"] = k;
  results["trials"] = trials;
  if (k < n) results["classification"] = to_json(compute_sequence(n, k), k);
  Json jm = Json::object();
  Json verdicts = Json::object();
  std::vector<std::pair<std::string, std::vector<CheckReport>>> suites;
  std::vector<DecompositionResult> decomps;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& [name, t] = maps[i];
    auto suite = run_check_suite(t, k, trials, derive_seed(seed, 200 + i));
    auto dec = decompose(t, k);
    jm[name] = Json{{"checks", suite_json(suite)}, {"decomposition", to_json(dec)}};
    verdicts[name] = Json{{"checks", suite_verdict(suite)},
                          {"decomposition", is_wigner_form(dec) ? "WignerForm" : "NotWignerForm"}};
    suites.emplace_back(name, std::move(suite));
    decomps.push_back(std::move(dec));
  }
  results["maps"] = std::move(jm);
  env.j["results"] = std::move(results);
  env.j["verdicts"] = std::move(verdicts);
  env.emit(out);

  out << "# demo n=" << n << " k=" << k << " seed=" << seed << " trials=" << trials << "\n";
  if (k < n) out << "# classification: " << describe(compute_sequence(n, k)) << "\n";
  for (std::size_t i = 0; i < suites.size(); ++i) {
    out << "# [" << suites[i].first << "] " << describe(decomps[i]) << "\n";
    suite_summary(out, suites[i].second, "  ");
  }
  return kExitOk;
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name. The report goes
/// to `out`: a JSON block with stable key order, then '#'-prefixed summary
/// lines.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"wignerlab: linear maps preserving rank-k projectors", "wignerlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::int64_t c_n = 0, c_k = 0;
  auto* classify = app.add_subcommand("classify", "k-sequence verdict for (n, k)");
  classify->add_option("--n", c_n, "dimension")->required();
  classify->add_option("--k", c_k, "rank")->required();

  std::string map_path;
  Index k_rank = 0;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 0;
  auto* check = app.add_subcommand("check", "run the structural check suite on a map file");
  check->add_option("--map", map_path, "map file")->required();
  check->add_option("--k", k_rank, "rank")->required();
  check->add_option("--trials", trials, "samples per check (default: $WIGNERLAB_TRIALS or 200)");
  check->add_option("--seed", seed, "base seed");

  double tol = kDecomposeTolerance;
  auto* decomp = app.add_subcommand("decompose", "recover a Wigner form from a map file");
  decomp->add_option("--map", map_path, "map file")->required();
  decomp->add_option("--k", k_rank, "rank (used for the reduced branch when n = 2k)")->required();
  decomp->add_option("--tol", tol, "acceptance tolerance");

  SearchConfig cfg = SearchConfig::defaults(1);
  std::optional<std::size_t> samples;
  auto* search = app.add_subcommand("search", "gradient-descent probe for rank-k preservers, n = 2k");
  search->add_option("--k", cfg.k, "rank")->required();
  search->add_option("--restarts", cfg.restarts, "restarts");
  search->add_option("--seed", cfg.seed, "base seed");
  search->add_option("--max-iterations", cfg.max_iterations, "iterations per restart");
  search->add_option("--samples", samples, "sample projectors (default 4 n^2)");
  search->add_option("--step", cfg.step_size, "initial step size");
  search->add_option("--floor", cfg.invertibility_floor, "smallest singular value floor");
  search->add_option("--accept", cfg.residual_accept, "residual accept threshold");

  Index d_n = 0;
  auto* demo = app.add_subcommand("demo", "build the canonical maps and run everything");
  demo->add_option("--n", d_n, "dimension")->required();
  demo->add_option("--k", k_rank, "rank")->required();
  demo->add_option("--seed", seed, "base seed")->required();
  demo->add_option("--trials", trials, "samples per check");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("wignerlab");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitPrecondition;
  }

  try {
    if (*classify) return detail::cmd_classify(c_n, c_k, out);
    if (*check) return detail::cmd_check(map_path, k_rank, trials, seed, out);
    if (*decomp) return detail::cmd_decompose(map_path, k_rank, tol, out);
    if (*search) {
      const Index k = cfg.k;
      if (!samples) cfg.sample_projectors = SearchConfig::defaults(k).sample_projectors;
      else cfg.sample_projectors = *samples;
      cfg.validate();
      return detail::cmd_search(cfg, out);
    }
    if (*demo) return detail::cmd_demo(d_n, k_rank, seed, trials, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  err << app.help();
  return kExitPrecondition;
}

}  // namespace wignerlab
