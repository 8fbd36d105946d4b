// Copyright 2026 The dsfkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit codes: 0 success, 1 a verification or
// reproduction check failed, 2 bad usage or unreadable input.

#ifndef DSFKIT_CLI_HPP_
#define DSFKIT_CLI_HPP_

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsfkit/analysis.hpp"
#include "dsfkit/io.hpp"
#include "dsfkit/learn.hpp"
#include "dsfkit/optimize.hpp"
#include "dsfkit/zoo.hpp"

namespace dsfkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// A named, code-constructed function. `model` is empty for functions that
// have no DSF form here (the K4 graphic matroid rank).
struct Preset {
  std::optional<DsfModel> model;
  SetFunction function;
};

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "laminar6", "overlap6", "fourblocks8", "k4",          "fk1",
      "fk2",      "fig1",     "thm41:sqrt",  "thm41:trunc3"};
  return names;
}

inline bool is_preset(const std::string& name) {
  for (const auto& n : preset_names()) {
    if (n == name) return true;
  }
  return false;
}

inline Preset make_preset(const std::string& name) {
  auto wrap = [&](DsfModel m) {
    SetFunction f = as_set_function(m, name);
    return Preset{std::move(m), std::move(f)};
  };
  if (name == "laminar6") {
    auto l = presets::laminar6();
    return Preset{l.model, l.oracle};
  }
  if (name == "overlap6") return wrap(presets::overlap6());
  if (name == "fourblocks8") return wrap(presets::fourblocks8());
  if (name == "k4") return Preset{std::nullopt, k4_rank()};
  if (name == "fk1") return wrap(make_fk_hat(1));
  if (name == "fk2") return wrap(make_fk_hat(2));
  if (name == "fig1") return wrap(presets::shape_features());
  if (name == "thm41:sqrt") return wrap(presets::two_block_nest(units::sqrt()));
  if (name == "thm41:trunc3")
    return wrap(presets::two_block_nest(units::truncate(3)));
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error("unknown preset '" + name + "' (known: " + known + ")");
}

// A --model argument: a preset name, else a model file path.
inline Preset resolve_model(const std::string& ref) {
  if (is_preset(ref)) return make_preset(ref);
  if (!std::filesystem::exists(ref)) {
    throw Error("'" + ref + "' is neither a preset nor an existing file");
  }
  DsfModel m = load_model(ref);
  SetFunction f = as_set_function(m, ref);
  return Preset{std::move(m), std::move(f)};
}

inline std::vector<double> parse_real_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_real(Json(item), "list entry"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reproduction cases. Each prints one line per check and returns whether
// every embedded expectation held.

class ReproLog {
 public:
  explicit ReproLog(std::ostream& out) : out_(out) {}

  void check(bool ok, const std::string& what) {
    out_ << (ok ? "  ok   " : "  FAIL ") << what << "\n";
    pass_ = pass_ && ok;
  }
  void near(double got, double want, double tol, const std::string& what) {
    check(std::fabs(got - want) <= tol, what + " = " + format_short(got) +
                                            " (expected " + format_short(want) +
                                            ")");
  }
  void report(const VerificationReport& r) {
    check(r.pass, r.property + ": " + (r.pass ? "PASS" : "FAIL") + " over " +
                      std::to_string(r.subsets_checked));
    if (!r.pass) out_ << r.to_string();
  }
  bool pass() const { return pass_; }

 private:
  std::ostream& out_;
  bool pass_ = true;
};

namespace detail {

inline void repro_polymatroid(ReproLog& log, const SetFunction& f) {
  log.report(verify_properties(f, kSubmodular | kMonotone | kNormalized));
}

inline std::map<std::string, std::function<void(ReproLog&)>> repro_cases() {
  std::map<std::string, std::function<void(ReproLog&)>> c;
  c["laminar6"] = [](ReproLog& log) {
    auto l = presets::laminar6();
    const auto& g = l.model.ground();
    bool same = true;
    for (std::uint64_t m = 0; m < 64; ++m) {
      const auto a = Subset::from_mask(g, m);
      same = same && evaluate(l.model, a) == l.oracle(a);
    }
    log.check(same, "DSF equals recursive rank on all 64 subsets");
    log.near(l.oracle(Subset::from_labels(g, {"a", "b", "d", "e"})), 3, 0,
             "f({a,b,d,e})");
    log.near(l.oracle(Subset::from_labels(g, {"a", "b", "c"})), 2, 0,
             "f({a,b,c})");
    repro_polymatroid(log, l.oracle);
  };
  c["overlap6"] = [](ReproLog& log) {
    auto f = as_set_function(presets::overlap6());
    const auto& g = f.ground();
    log.near(f(Subset::full(g)), 5, 1e-12, "f(V)");
    log.near(f(Subset::from_labels(g, {"c", "d"})), 4, 1e-12, "f({c,d})");
    repro_polymatroid(log, f);
  };
  c["fourblocks8"] = [](ReproLog& log) {
    auto f = as_set_function(presets::fourblocks8());
    const auto& g = f.ground();
    log.near(f(Subset::full(g)), 7, 1e-12, "f(V)");
    log.near(f(Subset::from_labels(g, {"a"})), 2, 1e-12, "f({a})");
    repro_polymatroid(log, f);
  };
  c["k4"] = [](ReproLog& log) {
    auto r = k4_rank();
    std::array<int, 4> hist{};
    for (std::uint64_t m = 0; m < 64; ++m) {
      const auto v = r.exact(Subset::from_mask(r.ground(), m));
      hist.at(static_cast<std::size_t>(to_double(v)))++;
    }
    // 1 empty set, 6 single edges, 15 pairs plus 4 triangles, the rest.
    log.check(hist == std::array<int, 4>{1, 6, 19, 38},
              "rank histogram (1, 6, 19, 38)");
    repro_polymatroid(log, r);
  };
  for (int k : {1, 2}) {
    c["fk" + std::to_string(k)] = [k](ReproLog& log) {
      auto f = as_set_function(make_fk_hat(k));
      log.report(check_fk_membership(f, k));
      repro_polymatroid(log, f);
    };
  }
  c["fig1"] = [](ReproLog& log) {
    auto f = presets::shape_features();
    const auto& g = f.ground();
    log.near(evaluate(f, Subset::from_labels(g, {"b"})), std::sqrt(8.0) + 1,
             1e-12, "g({b})");
    log.near(evaluate(f, Subset::from_labels(g, {"d", "h", "f"})), 9, 1e-12,
             "g({d,h,f})");
    auto r = greedy_max(f, Constraint::cardinality(3));
    log.check(r.set == Subset::from_labels(g, {"d", "h", "f"}),
              "greedy k=3 picks " + r.set.to_string());
    log.near(r.value, 9, 1e-12, "greedy value");
  };
  c["thm41:sqrt"] = [](ReproLog& log) {
    auto c = classify_two_layer_scmm(units::sqrt());
    log.check(c.is_scmm, "classified as SCMM");
    log.near(c.c1, 0.021544238030323903, 1e-6, "c1");
    log.near(c.c2, 0.48601033209758615, 1e-6, "c2");
    auto nested = as_set_function(presets::two_block_nest(units::sqrt()));
    auto flat = expand_two_layer_scmm(units::sqrt());
    double worst = 0.0;
    for (std::uint64_t m = 0; m < 64; ++m) {
      const auto a = Subset::from_mask(nested.ground(), m);
      worst = std::max(worst, std::fabs(nested(a) - flat(a)));
    }
    log.near(worst, 0.0, 1e-9, "max |nested - expansion|");
  };
  c["thm41:trunc3"] = [](ReproLog& log) {
    auto c = classify_two_layer_scmm(units::truncate(3));
    log.check(!c.is_scmm, "classified as not SCMM (" + c.violated + ")");
    log.check(c.c1 == -1.5, "c1 = " + format_short(c.c1) + " (expected -1.5)");
  };
  c["table1"] = [](ReproLog& log) {
    const std::vector<std::string> want = {"(1, 1, 1, 1, 1)", "(1, 2, 2, 2, 2)",
                                           "(1, 1, 2, 2, 2)", "(1, 2, 2, 3, 4)",
                                           "(7/12, 1, 5/6, 1, 1)"};
    const auto fs = five_vector_examples();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto v = symmetrize_five_vector(fs[i]);
      log.check(v.is_exact && v.to_string() == want[i],
                "f" + std::to_string(i + 1) + " " + v.to_string());
    }
  };
  return c;
}

}  // namespace detail

inline std::vector<std::string> repro_case_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : detail::repro_cases()) out.push_back(name);
  return out;
}

// Runs one case; true when every check passed.
inline bool run_repro(const std::string& name, std::ostream& out) {
  auto cases = detail::repro_cases();
  auto it = cases.find(name);
  if (it == cases.end()) throw Error("unknown repro case '" + name + "'");
  ReproLog log(out);
  out << "repro " << name << "\n";
  it->second(log);
  out << "repro " << name << ": " << (log.pass() ? "PASS" : "FAIL") << "\n";
  return log.pass();
}

// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"dsfkit: deep submodular functions"};
  app.require_subcommand(1);
  app.name("dsfkit");
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string model_ref, set_csv, x_csv,
      props = "submodular,monotone,normalized", preset, costs_csv, data_path,
      mode, out_path, csv_path, case_name;
  std::size_t cardinality = 0, budget_k = 0, batch = 16;
  double knapsack = -1, lr = 0.05, lambda = 0;
  int epochs = 100;
  unsigned threads = 0;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> init_seed;

  auto* eval = app.add_subcommand("eval", "Evaluate f at a set");
  eval->add_option("--model", model_ref, "Model file or preset")->required();
  eval->add_option("--set", set_csv, "Comma-separated labels")->required();

  auto* ext = app.add_subcommand("extension", "Lovasz extension at x");
  ext->add_option("--model", model_ref, "Model file or preset")->required();
  ext->add_option("--x", x_csv, "Comma-separated point in [0,1]^n")->required();

  auto* ver = app.add_subcommand("verify", "Exhaustive property check");
  auto* vm = ver->add_option("--model", model_ref, "Model file or preset");
  auto* vp = ver->add_option("--preset", preset, "Preset name");
  vm->excludes(vp);
  ver->add_option("--props", props, "Comma-separated properties");
  ver->add_option("--threads", threads, "Worker threads (0: default)");

  auto* max = app.add_subcommand("maximize", "Greedy maximization");
  max->add_option("--model", model_ref, "Model file or preset")->required();
  auto* mc = max->add_option("--cardinality", cardinality, "Size limit k");
  auto* mk = max->add_option("--knapsack", knapsack, "Budget");
  auto* mcost = max->add_option("--costs", costs_csv, "Comma-separated costs");
  mc->excludes(mk);
  mk->needs(mcost);
  mcost->needs(mk);

  auto* learn = app.add_subcommand("learn", "Fit a model to data");
  learn->add_option("--mode", mode, "regression or maxmargin")
      ->required()
      ->check(CLI::IsMember({"regression", "maxmargin"}));
  learn->add_option("--model", model_ref, "Topology (file or preset)")
      ->required();
  learn->add_option("--data", data_path, "JSON Lines dataset")->required();
  learn->add_option("--epochs", epochs, "Epochs")
      ->check(CLI::NonNegativeNumber);
  learn->add_option("--lr", lr, "Learning rate")->check(CLI::PositiveNumber);
  learn->add_option("--lambda", lambda, "L2 weight")
      ->check(CLI::NonNegativeNumber);
  learn->add_option("--seed", seed, "Shuffle seed");
  learn->add_option("--init", init_seed, "Random initialization seed");
  learn->add_option("--budget", budget_k, "Summary size (0: |S|)");
  learn->add_option("--batch", batch, "Mini-batch size")
      ->check(CLI::PositiveNumber);
  learn->add_option("--out", out_path, "Write the trained model here");
  learn->add_option("--loss-csv", csv_path, "Write the loss history here");

  auto* rep = app.add_subcommand("repro", "Self-checking reproduction case");
  rep->add_option("--case", case_name, "Case name or 'all'")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*eval) {
      const Preset p = resolve_model(model_ref);
      out << format_short(
                 p.function(parse_label_list(p.function.ground(), set_csv)))
          << "\n";
      return kExitOk;
    }
    if (*ext) {
      const Preset p = resolve_model(model_ref);
      const auto x = parse_real_list(x_csv);
      const auto r = lovasz_extension(p.function, x);
      out << "lovasz " << format_short(r.value) << "\n";
      out << "subgradient";
      for (double g : r.subgradient) out << " " << format_short(g);
      out << "\n";
      if (p.model) {
        out << "concave " << format_short(concave_extension(*p.model, x))
            << "\n";
      }
      return kExitOk;
    }
    if (*ver) {
      if (model_ref.empty() && preset.empty()) {
        err << "error: verify needs --model or --preset\n";
        return kExitUsage;
      }
      const Preset p =
          preset.empty() ? resolve_model(model_ref) : make_preset(preset);
      VerifyOptions opts;
      opts.threads = threads;
      const auto r = verify_properties(p.function, props, opts);
      out << r.to_string();
      return r.pass ? kExitOk : kExitCheckFailed;
    }
    if (*max) {
      const Preset p = resolve_model(model_ref);
      Constraint c = Constraint::cardinality(cardinality);
      if (mk->count()) {
        c = Constraint::knapsack(knapsack, parse_real_list(costs_csv));
      } else if (!mc->count()) {
        err << "error: maximize needs --cardinality or --knapsack\n";
        return kExitUsage;
      }
      const auto r = greedy_max(p.function, c);
      const auto& g = p.function.ground();
      out << "picks";
      for (std::size_t e : r.trace.picks) out << " " << g.label(e);
      out << "\nset " << r.set.to_string() << "\nvalue "
          << format_short(r.value) << "\nevaluations " << r.trace.evaluations
          << "\n";
      return kExitOk;
    }
    if (*learn) {
      const Preset p = resolve_model(model_ref);
      if (!p.model) throw Error("learn: '" + model_ref + "' is not a DSF");
      DsfModel topo = *p.model;
      if (init_seed) topo = initialize_parameters(topo, *init_seed);
      const Dataset d = load_dataset(data_path, topo.ground());
      TrainConfig cfg;
      cfg.epochs = epochs;
      cfg.learning_rate = lr;
      cfg.lambda = lambda;
      cfg.seed = seed;
      cfg.budget = budget_k;
      cfg.batch_size = batch;
      const auto res = mode == "regression" ? fit_regression(topo, d, cfg)
                                            : fit_max_margin(topo, d, cfg);
      out << "initial loss " << format_short(res.loss_history.front())
          << "\nfinal loss " << format_short(res.loss_history.back()) << "\n";
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw Error("cannot open '" + csv_path + "' for writing");
        write_loss_csv(csv, res.loss_history);
      }
      if (!out_path.empty()) {
        save_model(res.model, out_path);
      } else {
        out << model_to_json(res.model).dump(2) << "\n";
      }
      return kExitOk;
    }
    if (*rep) {
      bool ok = true;
      if (case_name == "all") {
        for (const auto& name : repro_case_names()) {
          ok = run_repro(name, out) && ok;
        }
      } else {
        ok = run_repro(case_name, out);
      }
      return ok ? kExitOk : kExitCheckFailed;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace dsfkit

#endif  // DSFKIT_CLI_HPP_
