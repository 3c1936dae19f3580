#pragma once

// Command-line front end: one subcommand per operation, JSON by default, CSV on
// request. Exit codes: 0 ok, 1 other failure, 2 domain/alignment error,
// 3 capacity error, 64 usage error.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphon/acceptance.hpp"
#include "graphon/constructions.hpp"
#include "graphon/cutnorm.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/independence.hpp"
#include "graphon/io.hpp"
#include "graphon/sampler.hpp"
#include "graphon/spectral.hpp"

namespace graphon::cli {

using ojson = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitUsage = 64;

/// Raised for semantic command-line problems CLI11 cannot see (bad rationals, env vars).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline ojson exact(const Rational& q) { return {{"exact", to_string(q)}, {"decimal", to_decimal(q)}}; }

inline ojson exact_list(const std::vector<Rational>& v) {
  ojson out = ojson::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

inline ojson decimal_list(const std::vector<Rational>& v) {
  ojson out = ojson::array();
  for (const auto& x : v) out.push_back(to_decimal(x));
  return out;
}

inline ojson to_ordered(const io::json& j) { return ojson::parse(j.dump()); }

inline ojson graph_json(const SimpleGraph& g) {
  ojson edges = ojson::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.order()}, {"m", g.size()}, {"edges", edges}};
}

inline Rational rational_arg(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(name + ": '" + text + "' is not a rational (expected p/q or an integer)");
  }
}

inline std::string csv_cell(const ojson& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline void flatten(const ojson& v, const std::string& prefix, std::vector<std::pair<std::string, ojson>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const ojson& x) { return x.is_structured(); })) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, v);
  }
}

/// A "rows" array of flat objects becomes a table; anything else becomes key,value lines.
inline void write_csv(const ojson& result, std::ostream& out) {
  if (result.contains("rows") && result["rows"].is_array() && !result["rows"].empty()) {
    const auto& rows = result["rows"];
    bool first = true;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
      out << (first ? "" : ",") << it.key();
      first = false;
    }
    out << "\n";
    for (const auto& row : rows) {
      first = true;
      for (auto it = row.begin(); it != row.end(); ++it) {
        out << (first ? "" : ",") << csv_cell(it.value());
        first = false;
      }
      out << "\n";
    }
    return;
  }
  std::vector<std::pair<std::string, ojson>> cells;
  flatten(result, "", cells);
  out << "key,value\n";
  for (const auto& [k, v] : cells) {
    if (v.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? " " : "") + (v[i].is_string() ? v[i].get<std::string>() : v[i].dump());
      out << csv_cell(k) << "," << csv_cell(joined) << "\n";
    } else {
      out << csv_cell(k) << "," << csv_cell(v) << "\n";
    }
  }
}

inline std::vector<int> parse_schedule(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size() || n < 1) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw UsageError("--schedule: '" + item + "' is not a positive integer");
    }
  }
  if (out.empty()) throw UsageError("--schedule: empty list");
  return out;
}

inline std::uint64_t budget_from_env() {
  const char* env = std::getenv("GRAPHON_BUDGET");
  if (!env || !*env) return kDefaultBudget;
  try {
    std::size_t used = 0;
    const std::string s(env);
    const auto v = std::stoull(s, &used);
    if (used != s.size() || v == 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("GRAPHON_BUDGET: '") + env + "' is not a positive integer");
  }
}

}  // namespace detail

/// Runs one command line (program name excluded). Output goes to `out`, diagnostics to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with step graphons and kernels", "graphon"};
  app.require_subcommand(1);
  app.fallthrough();

  bool as_json = false;
  std::string csv_target;
  unsigned threads = 1;
  std::uint64_t budget = 0;
  app.add_flag("--json", as_json, "JSON output (default)");
  auto* csv_opt = app.add_option("--csv", csv_target, "CSV output, to FILE if given")->expected(0, 1);
  app.add_option("--threads", threads, "worker threads (results do not depend on it)")->check(CLI::Range(1u, 1024u));
  auto* budget_opt = app.add_option("--budget", budget, "evaluation budget (overrides GRAPHON_BUDGET)")->check(CLI::PositiveNumber);

  std::string graph_path, kernel_path, template_path, out_path, p_text, eps_text, delta_text, d0_text;
  std::string schedule_text, mode_text = "injective", suite;
  int k = 0, qbase = 0, ell = 0, a = 0, b = 0, n = 0, trials = 0;
  unsigned resolution = 8;
  double tol = kDefaultSpectralTolerance;
  std::uint64_t seed = 0, scan_bound = kDefaultScanBound;

  auto* density_cmd = app.add_subcommand("density", "t(H, W)");
  density_cmd->add_option("--graph", graph_path, "graph file")->required();
  density_cmd->add_option("--kernel", kernel_path, "kernel JSON")->required();

  auto* expand_cmd = app.add_subcommand("expand", "coefficients of t(H, p + eps U) in eps");
  expand_cmd->add_option("--graph", graph_path)->required();
  expand_cmd->add_option("--p", p_text, "base constant p")->required();
  expand_cmd->add_option("--kernel", kernel_path, "perturbation U")->required();

  auto* margin_cmd = app.add_subcommand("margin", "monochromatic sum minus k^{1-|E(H)|}");
  margin_cmd->add_option("--template", template_path)->required();
  margin_cmd->add_option("--graph", graph_path)->required();

  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and cycle-trace checks");
  spectrum_cmd->add_option("--kernel", kernel_path)->required();
  spectrum_cmd->add_option("--tol", tol, "eigenvalue cutoff")->capture_default_str();

  auto* cutnorm_cmd = app.add_subcommand("cutnorm", "exact cut norm with a maximizing pair");
  cutnorm_cmd->add_option("--kernel", kernel_path)->required();

  auto* local_cmd = app.add_subcommand("localcheck", "per-color window check around 1/k");
  local_cmd->add_option("--template", template_path)->required();
  local_cmd->add_option("--eps0", eps_text)->required();

  auto* construct_cmd = app.add_subcommand("construct", "named constructions");
  construct_cmd->require_subcommand(1);
  auto* binary_cmd = construct_cmd->add_subcommand("binary", "binary-digit coloring with k colors");
  binary_cmd->add_option("--k", k)->required();
  auto* chromatic_cmd = construct_cmd->add_subcommand("chromatic", "base-q digit coloring with k colors");
  chromatic_cmd->add_option("--k", k)->required();
  chromatic_cmd->add_option("--q", qbase)->required();
  auto* oddgirth_cmd = construct_cmd->add_subcommand("oddgirth", "signed odd-girth kernel");
  oddgirth_cmd->add_option("--l", ell)->required();
  auto* perm_cmd = construct_cmd->add_subcommand("permfamily", "permutation family of a diagonal-averaged graphon");
  perm_cmd->add_option("--kernel", kernel_path)->required();
  perm_cmd->add_option("--l", ell)->required();
  auto* kc5_cmd = construct_cmd->add_subcommand("kc5", "K_{2a,2b} with b pendant 5-cycles");
  kc5_cmd->add_option("--a", a)->required();
  kc5_cmd->add_option("--b", b)->required();
  kc5_cmd->add_option("--out", out_path, "also write the graph file");

  auto* deficit_cmd = app.add_subcommand("deficit", "monochromatic density of H in the odd-girth template, in eps");
  deficit_cmd->add_option("--graph", graph_path)->required();
  deficit_cmd->add_option("--k", k)->required();

  auto* kappa_cmd = app.add_subcommand("kappa", "upper bounds on the least non-common k");
  kappa_cmd->add_option("--graph", graph_path)->required();

  auto* constants_cmd = app.add_subcommand("constants", "certified constants up to level k");
  constants_cmd->add_option("--k", k)->required();
  constants_cmd->add_option("--scan-bound", scan_bound, "largest exponent scanned")->capture_default_str();

  auto* alpha_cmd = app.add_subcommand("alpha", "certified lower bound on the delta-independence ratio");
  alpha_cmd->add_option("--kernel", kernel_path)->required();
  alpha_cmd->add_option("--delta", delta_text)->required();
  alpha_cmd->add_option("--resolution", resolution)->capture_default_str()->check(CLI::PositiveNumber);

  auto* peel_cmd = app.add_subcommand("peel", "iterated low-degree peeling");
  peel_cmd->add_option("--kernel", kernel_path)->required();
  peel_cmd->add_option("--d0", d0_text)->required();

  auto* sample_cmd = app.add_subcommand("sample", "draw G(n, W)");
  sample_cmd->add_option("--kernel", kernel_path)->required();
  sample_cmd->add_option("--n", n)->required();
  sample_cmd->add_option("--seed", seed)->required();
  sample_cmd->add_option("--out", out_path, "graph file (stdout if omitted)");

  auto* converge_cmd = app.add_subcommand("converge", "sampled densities against the exact limit");
  auto* converge_template = converge_cmd->add_option("--template", template_path);
  auto* converge_kernel = converge_cmd->add_option("--kernel", kernel_path);
  converge_template->excludes(converge_kernel);
  converge_cmd->add_option("--graph", graph_path)->required();
  converge_cmd->add_option("--schedule", schedule_text, "comma-separated sizes")->required();
  converge_cmd->add_option("--trials", trials)->required();
  converge_cmd->add_option("--seed", seed)->required();
  converge_cmd->add_option("--mode", mode_text)->check(CLI::IsMember({"injective", "homomorphism"}))->capture_default_str();

  auto* reproduce_cmd = app.add_subcommand("reproduce", "run the acceptance battery");
  reproduce_cmd->add_option("--suite", suite)->required()->check(CLI::IsMember({"paper"}));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const bool as_csv = csv_opt->count() > 0;
  auto emit = [&](const ojson& result) {
    if (!as_csv) {
      out << result.dump(2) << "\n";
      return;
    }
    if (csv_target.empty()) {
      detail::write_csv(result, out);
      return;
    }
    std::ofstream file(csv_target);
    if (!file) throw io::FormatError("cannot write '" + csv_target + "'");
    detail::write_csv(result, file);
  };

  try {
    if (as_json && as_csv) throw UsageError("--json and --csv are mutually exclusive");
    EvalOptions eval;
    eval.budget = budget_opt->count() ? budget : detail::budget_from_env();
    eval.threads = threads;
    auto graph = [&] { return io::read_graph_file(graph_path); };
    auto kernel = [&] { return io::kernel_from_json(io::read_json_file(kernel_path)); };
    auto coloring = [&] { return io::template_from_json(io::read_json_file(template_path)); };

    if (density_cmd->parsed()) {
      emit({{"density", detail::exact(density(graph(), kernel(), eval))}});
    } else if (expand_cmd->parsed()) {
      auto poly = epsilon_expansion(graph(), detail::rational_arg("--p", p_text), kernel(), eval);
      emit({{"coeffs", detail::exact_list(poly.coeffs)}, {"decimal", detail::decimal_list(poly.coeffs)}});
    } else if (margin_cmd->parsed()) {
      const auto t = coloring();
      const auto h = graph();
      const Rational mono = mono_sum(t, h, eval);
      const Rational rnd = random_coloring_value(t.k(), h);
      emit({{"k", t.k()},
            {"mono_sum", detail::exact(mono)},
            {"random_coloring", detail::exact(rnd)},
            {"margin", detail::exact(mono - rnd)}});
    } else if (spectrum_cmd->parsed()) {
      const auto w = kernel();
      const auto d = decompose(w, tol);
      ojson checks = ojson::object();
      for (int len = 3; len <= 8; ++len) {
        auto c = cycle_trace_check(w, len, tol, eval);
        checks[std::to_string(len)] = {{"exact", to_string(c.exact)},
                                       {"decimal", to_decimal(c.exact)},
                                       {"spectral", c.spectral}};
      }
      emit({{"eigenvalues", d.eigenvalues}, {"trace_checks", checks}});
    } else if (cutnorm_cmd->parsed()) {
      CutNormOptions opts;
      opts.threads = threads;
      auto r = cut_norm(kernel(), opts);
      emit({{"value", detail::exact(r.value)}, {"S", r.s}, {"T", r.t}});
    } else if (local_cmd->parsed()) {
      const auto t = coloring();
      CutNormOptions opts;
      opts.threads = threads;
      ojson rows = ojson::array();
      std::size_t color = 0;
      for (const auto& c : local_window_check(t, detail::rational_arg("--eps0", eps_text), opts))
        rows.push_back({{"color", color++},
                        {"cut_deviation", to_string(c.cut_deviation)},
                        {"cut_ok", c.cut_ok},
                        {"sup_deviation", to_string(c.sup_deviation)},
                        {"sup_ok", c.sup_ok}});
      emit({{"rows", rows}});
    } else if (binary_cmd->parsed()) {
      emit(detail::to_ordered(io::template_to_json(binary_coloring(k))));
    } else if (chromatic_cmd->parsed()) {
      emit(detail::to_ordered(io::template_to_json(chromatic_coloring(k, qbase))));
    } else if (oddgirth_cmd->parsed()) {
      emit(detail::to_ordered(io::kernel_to_json(odd_girth_kernel(ell))));
    } else if (perm_cmd->parsed()) {
      auto [wpp, delta] = diagonal_average(kernel());
      auto fam = permutation_family(wpp, ell);
      emit({{"delta", detail::exact(delta)}, {"k", fam.k()}, {"template", detail::to_ordered(io::template_to_json(fam))}});
    } else if (kc5_cmd->parsed()) {
      const auto g = build_K2a2bC5(a, b);
      if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) throw io::FormatError("cannot write '" + out_path + "'");
        io::write_graph(file, g);
      }
      emit(detail::graph_json(g));
    } else if (deficit_cmd->parsed()) {
      auto poly = local_deficit(graph(), k, eval);
      emit({{"coeffs", detail::exact_list(poly.coeffs)}, {"decimal", detail::decimal_list(poly.coeffs)}});
    } else if (kappa_cmd->parsed()) {
      auto r = kappa_upper(graph());
      ojson j;
      j["k_search"] = r.k_search ? ojson(*r.k_search) : ojson(nullptr);
      j["k_formula"] = r.k_formula ? ojson(*r.k_formula) : ojson(nullptr);
      if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
      emit(j);
    } else if (constants_cmd->parsed()) {
      auto cc = certified_constants(k, scan_bound);
      auto scan = [](const ExponentScan& s) {
        ojson j;
        if (s.value) {
          j["value"] = *s.value;
        } else {
          j["capped"] = true;
          j["at_least"] = s.at_least();
          j["log10_estimate"] = s.log10_estimate;
        }
        return j;
      };
      ojson rows = ojson::array();
      for (const auto& l : cc.levels)
        rows.push_back({{"k", l.k},
                        {"p0", detail::exact(l.p0)},
                        {"eps0", detail::exact(l.eps0)},
                        {"pi0", detail::exact(l.pi0)},
                        {"delta0", detail::exact(l.delta0)},
                        {"d0", detail::exact(l.d0)},
                        {"n0", scan(l.n0)},
                        {"delta", detail::exact(l.delta)},
                        {"n", scan(l.n)}});
      emit({{"levels", rows}, {"capped", cc.capped()}});
      if (cc.capped()) {
        err << "capacity: some n_k exceed the scan bound " << scan_bound << "\n";
        return kExitCapacity;
      }
    } else if (alpha_cmd->parsed()) {
      const auto w = kernel();
      const Rational delta = detail::rational_arg("--delta", delta_text);
      AlphaOptions opts;
      opts.resolution = resolution;
      opts.budget = eval.budget;
      auto r = alpha_lower(w, delta, opts);
      emit({{"bound", detail::exact(r.bound)},
            {"h", detail::to_ordered(io::weighting_to_json(r.h))},
            {"verified", verify_certificate(w, delta, r.h)}});
    } else if (peel_cmd->parsed()) {
      auto r = low_degree_peel(kernel(), detail::rational_arg("--d0", d0_text));
      emit({{"A", r.peeled},
            {"layers", r.layers},
            {"measure", detail::exact(r.measure)},
            {"internal_mass", detail::exact(r.internal_mass)},
            {"density_bound_holds", r.density_bound_holds},
            {"outside_degrees_exceed", r.outside_degrees_exceed}});
    } else if (sample_cmd->parsed()) {
      const auto g = sample_w_random(kernel(), n, seed);
      if (out_path.empty()) {
        io::write_graph(out, g);
      } else {
        std::ofstream file(out_path);
        if (!file) throw io::FormatError("cannot write '" + out_path + "'");
        io::write_graph(file, g);
        emit({{"n", g.order()}, {"m", g.size()}, {"out", out_path}});
      }
    } else if (converge_cmd->parsed()) {
      if (template_path.empty() == kernel_path.empty()) throw UsageError("converge needs exactly one of --template, --kernel");
      const SampleSource src = template_path.empty() ? SampleSource(kernel()) : SampleSource(coloring());
      const auto schedule = detail::parse_schedule(schedule_text);
      const auto mode = mode_text == "homomorphism" ? CountMode::homomorphism : CountMode::injective;
      auto rep = convergence_report(src, graph(), schedule, trials, seed, mode, eval);
      ojson rows = ojson::array();
      for (const auto& r : rep.rows)
        rows.push_back({{"n", r.n},
                        {"trials", r.trials},
                        {"mean", r.mean},
                        {"sd", r.sd},
                        {"standard_error", r.standard_error},
                        {"deviation", r.deviation},
                        {"flagged", r.flagged}});
      emit({{"exact", detail::exact(rep.exact)}, {"mode", mode_text}, {"rows", rows}});
    } else if (reproduce_cmd->parsed()) {
      acceptance::Options opts;
      opts.threads = threads;
      const bool lines = !as_json && !as_csv;
      auto outcomes = acceptance::run_all(opts, lines ? &out : nullptr);
      std::size_t passed = 0;
      ojson rows = ojson::array();
      for (const auto& o : outcomes) {
        passed += o.passed();
        rows.push_back({{"id", o.id},
                        {"name", o.name},
                        {"passed", o.passed()},
                        {"seconds", o.seconds},
                        {"limit_seconds", o.limit_seconds},
                        {"detail", o.detail}});
      }
      if (lines)
        out << passed << "/" << outcomes.size() << " criteria passed\n";
      else
        emit({{"passed", passed}, {"total", outcomes.size()}, {"rows", rows}});
      return passed == outcomes.size() ? kExitOk : kExitFailure;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const AlignmentError& e) {
    err << "alignment error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace graphon::cli
