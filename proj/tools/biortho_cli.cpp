// Command-line front end: build Mexican-hat dictionaries, fit signals, run
// backward reductions and compare naive truncation with adapted removal.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biortho/biortho.hpp"

namespace {

using namespace biortho;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string grid = "-4:4:801";
  std::string centers;
  std::string dict_path;
  std::string signal_path;
  std::string out_path;
  std::string approx_path;
  std::string trace_path;
  std::string strategy = "min-impact";
  std::string remove;
  std::optional<double> delta;
  std::optional<long long> target_count;
  bool pivoting = false;
};

// CLI11 would read "-4:4:801" as a short flag; glue such values to their option.
std::vector<std::string> normalize_args(int argc, char** argv) {
  static const std::set<std::string> valued = {"--grid", "--centers", "--remove", "--delta"};
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (valued.count(a) && i + 1 < argc) {
      args.push_back(a + "=" + argv[++i]);
    } else {
      args.push_back(a);
    }
  }
  return args;
}

DualStated build_state(const Dictionaryd& dict, bool pivoting) {
  ForwardOptions<double> opts;
  opts.pivoting = pivoting;
  return biorthogonalize(dict, opts);
}

struct Loaded {
  Dictionaryd dict;
  Signald signal;
};

Loaded load_inputs(const RunConfig& cfg) {
  Dictionaryd dict = io::load_dictionary_csv(cfg.dict_path);
  Signald signal = io::read_signal_csv(cfg.signal_path);
  require_same_grid(dict.grid(), signal.grid(), "signal vs dictionary");
  return {std::move(dict), std::move(signal)};
}

int cmd_gen_mexhat(const RunConfig& cfg) {
  const Gridd grid = io::parse_grid_spec(cfg.grid);
  const bool custom = !cfg.centers.empty();
  const Dictionaryd dict = custom ? mexican_hat_dictionary(grid, io::parse_number_list(cfg.centers))
                                  : paper_example_dictionary(grid);
  io::save_dictionary_csv(dict, cfg.out_path);
  if (!cfg.signal_path.empty()) {
    if (custom) throw UsageError("--signal is only available for the default 13-atom dictionary");
    io::write_signal_csv(paper_example_signal(dict), cfg.signal_path);
  }
  std::cout << "atoms: " << dict.size() << "\n";
  std::cout << "gram_condition: " << io::format_number(gram_condition(dict)) << "\n";
  return kExitOk;
}

int cmd_fit(const RunConfig& cfg) {
  const Loaded in = load_inputs(cfg);
  const DualStated state = build_state(in.dict, cfg.pivoting);
  const Approximationd approx = fit(state, in.signal);
  io::write_text_file(cfg.out_path, io::coefficients_json(state, approx));
  const Signald fn = approximant(state, approx);
  if (!cfg.approx_path.empty()) {
    io::write_text_file(cfg.approx_path, io::columns_csv(in.signal.grid(), {"f", "f_N"},
                                                         {&in.signal.values(), &fn.values()}));
  }
  std::cout << "residual_norm_sq: " << io::format_number(norm_sq(in.signal - fn)) << "\n";
  return kExitOk;
}

StoppingRule stopping_rule(const RunConfig& cfg) {
  if (cfg.strategy == "explicit") {
    if (cfg.delta || cfg.target_count) throw UsageError("explicit strategy takes --remove only");
    return ExplicitOrder{io::parse_id_list(cfg.remove)};
  }
  if (!cfg.remove.empty()) throw UsageError("--remove requires --strategy explicit");
  if (cfg.delta.has_value() == cfg.target_count.has_value()) {
    throw UsageError("min-impact strategy needs exactly one of --delta or --target-count");
  }
  if (cfg.delta) {
    if (!(*cfg.delta >= 0)) throw UsageError("--delta must be >= 0");
    return ResidualBudget{*cfg.delta};
  }
  if (*cfg.target_count < 1) throw UsageError("--target-count must be >= 1");
  return TargetCount{static_cast<Index>(*cfg.target_count)};
}

int cmd_reduce(const RunConfig& cfg) {
  const StoppingRule rule = stopping_rule(cfg);
  const Loaded in = load_inputs(cfg);
  const DualStated state = build_state(in.dict, cfg.pivoting);
  const Reduction<double> r = reduce(state, fit(state, in.signal), rule);
  io::write_text_file(cfg.trace_path, io::trace_json(r.trace));
  if (!cfg.out_path.empty()) {
    const Signald fk = approximant(r.state, r.approx);
    io::write_text_file(cfg.out_path,
                        io::columns_csv(in.signal.grid(), {"f", "approx"}, {&in.signal.values(), &fk.values()}));
  }
  std::cout << "removed: " << r.trace.steps.size() << "\n";
  std::cout << "remaining: " << r.state.size() << "\n";
  std::cout << "stopped_reason: " << to_string(r.trace.stopped_reason) << "\n";
  std::cout << "cumulative_impact: " << io::format_number(r.trace.cumulative_impact()) << "\n";
  std::cout << "residual_to_signal_sq: " << io::format_number(r.trace.residual_to_signal_sq()) << "\n";
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg) {
  const std::vector<AtomId> ids = io::parse_id_list(cfg.remove);
  const Loaded in = load_inputs(cfg);
  const DualStated state = build_state(in.dict, cfg.pivoting);
  const auto cmp = compare_truncation(state, fit(state, in.signal), ids);
  io::write_text_file(cfg.out_path,
                      io::columns_csv(in.signal.grid(), {"f", "truncated", "adapted"},
                                      {&in.signal.values(), &cmp.truncated.values(), &cmp.adapted.values()}));
  std::cout << "truncated_error_sq: " << io::format_number(cmp.truncated_error_sq)
            << " adapted_error_sq: " << io::format_number(cmp.adapted_error_sq) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive biorthogonalization of atom dictionaries"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("gen-mexhat", "Write a Mexican-hat dictionary CSV");
  gen->add_option("--grid", cfg.grid, "Grid as min:max:points")->capture_default_str();
  gen->add_option("--centers", cfg.centers, "Comma-separated centers (default: 13-atom example set)");
  gen->add_option("--out", cfg.out_path, "Dictionary CSV to write")->required();
  gen->add_option("--signal", cfg.signal_path, "Also write the example signal CSV");

  auto add_inputs = [&cfg](CLI::App* sub) {
    sub->add_option("--dict", cfg.dict_path, "Dictionary CSV")->required();
    sub->add_option("--signal", cfg.signal_path, "Signal CSV")->required();
    sub->add_flag("--pivot", cfg.pivoting, "Build duals with pivoted Gram-Schmidt");
  };

  auto* fit_cmd = app.add_subcommand("fit", "Fit a signal, write coefficients JSON");
  add_inputs(fit_cmd);
  fit_cmd->add_option("--out", cfg.out_path, "Coefficients JSON to write")->required();
  fit_cmd->add_option("--approx", cfg.approx_path, "Also write t,f,f_N CSV");

  auto* red = app.add_subcommand("reduce", "Backward elimination with adapted coefficients");
  add_inputs(red);
  red->add_option("--strategy", cfg.strategy, "min-impact or explicit")
      ->check(CLI::IsMember({"min-impact", "explicit"}))
      ->capture_default_str();
  red->add_option("--remove", cfg.remove, "Comma-separated atom ids (explicit strategy)");
  red->add_option("--delta", cfg.delta, "Residual budget");
  red->add_option("--target-count", cfg.target_count, "Number of atoms to keep");
  red->add_option("--trace", cfg.trace_path, "Trace JSON to write")->required();
  red->add_option("--out", cfg.out_path, "Reduced approximation CSV to write");

  auto* cmp = app.add_subcommand("compare", "Truncated vs adapted approximation after removals");
  add_inputs(cmp);
  cmp->add_option("--remove", cfg.remove, "Comma-separated atom ids to drop");
  cmp->add_option("--out", cfg.out_path, "Comparison CSV to write")->required();

  std::vector<std::string> args = normalize_args(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_mexhat(cfg);
    if (fit_cmd->parsed()) return cmd_fit(cfg);
    if (red->parsed()) return cmd_reduce(cfg);
    if (cmp->parsed()) return cmd_compare(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numerical(e.kind()) ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
