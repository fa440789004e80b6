// Copyright 2026 The sigrules authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line frontend: synth | mine | correct | eval | bench.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sigrules/corrections.hpp"
#include "sigrules/csv.hpp"
#include "sigrules/evaluator.hpp"
#include "sigrules/permutation.hpp"
#include "sigrules/rules.hpp"
#include "sigrules/synth.hpp"

namespace {

using nlohmann::json;
using namespace sigrules;

// Outputs are staged in memory and written together at the end of a command,
// so a failed run leaves no partial files behind.
class OutputSet {
 public:
  void stage(const std::string& path, std::string content) {
    staged_.emplace_back(path, std::move(content));
  }
  void commit() {
    for (const auto& [path, content] : staged_) {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open " + path + " for writing");
      out << content;
      if (!out) throw std::runtime_error("write failed: " + path);
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> staged_;
};

struct SynthCli {
  SynthParams params;
  std::uint64_t seed = 1;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--N", params.n_records, "Number of records")->required();
    cmd->add_option("--A", params.n_attributes, "Number of attributes")->required();
    cmd->add_option("--classes", params.n_classes, "Number of classes")
        ->capture_default_str();
    cmd->add_option("--min-v", params.min_values, "Min values per attribute")
        ->capture_default_str();
    cmd->add_option("--max-v", params.max_values, "Max values per attribute")
        ->capture_default_str();
    cmd->add_option("--rules", params.n_rules, "Number of embedded rules")
        ->capture_default_str();
    cmd->add_option("--min-l", params.min_length, "Min embedded pattern length")
        ->capture_default_str();
    cmd->add_option("--max-l", params.max_length, "Max embedded pattern length")
        ->capture_default_str();
    cmd->add_option("--min-s", params.min_coverage, "Min embedded rule coverage");
    cmd->add_option("--max-s", params.max_coverage, "Max embedded rule coverage");
    cmd->add_option("--min-c", params.min_confidence, "Min embedded rule confidence")
        ->capture_default_str();
    cmd->add_option("--max-c", params.max_confidence, "Max embedded rule confidence")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  }
};

json truth_to_json(const Dataset& data, const std::vector<EmbeddedRule>& truth) {
  json rules = json::array();
  for (const EmbeddedRule& rule : truth) {
    json items = json::array();
    for (ItemId id : rule.pattern) items.push_back(data.item_label(id));
    rules.push_back({{"items", items},
                     {"class", data.class_names[rule.class_index]},
                     {"covered_tids", rule.covered_tids},
                     {"coverage", rule.coverage},
                     {"confidence", rule.confidence}});
  }
  return {{"rules", rules}, {"rng", kRngAlgorithm}};
}

std::string rules_tsv(const Dataset& data, const MiningResult& mining,
                      std::span<const TestedRule> rules) {
  std::ostringstream out;
  write_rules_tsv(out, data, mining, rules);
  return out.str();
}

int cmd_synth(const SynthCli& cli, bool split_pair, const std::string& out_path,
              const std::string& truth_path, char delimiter) {
  const SynthResult result = split_pair ? generate_split_pair(cli.params, cli.seed)
                                        : generate(cli.params, cli.seed);
  OutputSet outputs;
  std::ostringstream csv;
  save_csv(result.dataset, csv, "class", delimiter);
  outputs.stage(out_path, csv.str());
  if (!truth_path.empty()) {
    json truth = truth_to_json(result.dataset, result.truth);
    truth["seed"] = cli.seed;
    if (split_pair) truth["split_point"] = result.split_point;
    outputs.stage(truth_path, truth.dump(2) + "\n");
  }
  outputs.commit();
  return 0;
}

struct MineArgs {
  std::string data_path;
  std::string class_col = "class";
  char delimiter = ',';
  std::size_t min_sup = 1;
  double min_conf = 0.0;
  std::size_t buffer_bytes = 16 * 1024 * 1024;
  std::string out_path = "rules.tsv";
  std::string summary_path;
};

int cmd_mine(const MineArgs& args) {
  CsvOptions csv_opts{args.class_col, args.delimiter};
  const Dataset data = load_csv(std::filesystem::path(args.data_path), csv_opts);
  const MiningResult mining = mine_closed(data, args.min_sup);
  BufferCacheConfig cache_cfg;
  cache_cfg.static_budget_bytes = args.buffer_bytes;
  BufferCache cache(data.record_count(), args.min_sup, data.class_counts, cache_cfg);
  const std::vector<TestedRule> rules = build_rules(data, mining, cache, args.min_conf);

  OutputSet outputs;
  outputs.stage(args.out_path, rules_tsv(data, mining, rules));
  if (!args.summary_path.empty()) {
    json summary;
    summary["n"] = data.record_count();
    summary["classes"] = data.class_names;
    summary["class_counts"] = data.class_counts;
    summary["min_sup"] = args.min_sup;
    summary["min_conf"] = args.min_conf;
    summary["n_closed_patterns"] = mining.closed.size();
    summary["n_tests"] = data.class_count() >= 2
                             ? count_tests(mining.closed.size(), data.class_count())
                             : mining.closed.size();
    summary["n_rules"] = rules.size();
    outputs.stage(args.summary_path, summary.dump(2) + "\n");
  }
  outputs.commit();
  return 0;
}

struct CorrectArgs {
  MineArgs mine;
  std::string method = "bc";
  double alpha = 0.05;
  std::size_t n_perms = 1000;
  std::size_t workers = 1;
  std::uint64_t seed = 1;
};

int cmd_correct(const CorrectArgs& args) {
  const auto method = method_from_name(args.method);
  if (!method) throw std::runtime_error("unknown method: " + args.method);

  CsvOptions csv_opts{args.mine.class_col, args.mine.delimiter};
  const Dataset data = load_csv(std::filesystem::path(args.mine.data_path), csv_opts);
  BufferCacheConfig cache_cfg;
  cache_cfg.static_budget_bytes = args.mine.buffer_bytes;

  json summary;
  summary["method"] = args.method;
  summary["alpha"] = args.alpha;
  summary["min_sup"] = args.mine.min_sup;
  summary["min_conf"] = args.mine.min_conf;
  OutputSet outputs;

  if (*method == Method::HdBc || *method == Method::HdBh || *method == Method::RhBc ||
      *method == Method::RhBh) {
    const bool positional = *method == Method::HdBc || *method == Method::HdBh;
    SplitMix64 rng(args.seed);
    const SplitSpec split =
        make_split(data, positional ? SplitMode::Concatenated : SplitMode::Random, rng);
    HoldoutOptions options;
    options.alpha = args.alpha;
    options.min_sup_whole = args.mine.min_sup;
    options.min_conf = args.mine.min_conf;
    options.target = (*method == Method::HdBc || *method == Method::RhBc)
                         ? ErrorRateTarget::Fwer
                         : ErrorRateTarget::Fdr;
    options.cache = cache_cfg;
    const HoldoutResult hr = holdout_run(data, split, options);
    std::vector<TestedRule> significant;
    for (std::uint32_t idx : hr.outcome.significant) significant.push_back(hr.survivors[idx]);
    outputs.stage(args.mine.out_path,
                  rules_tsv(hr.eval_data, hr.explore_mining, significant));
    summary["n_tests"] = hr.outcome.n_tests;
    summary["cutoff"] = hr.outcome.cutoff;
    summary["n_significant"] = hr.outcome.significant.size();
    if (!positional) {
      summary["seed"] = args.seed;
      summary["rng"] = kRngAlgorithm;
    }
  } else {
    const MiningResult mining = mine_closed(data, args.mine.min_sup);
    BufferCache cache(data.record_count(), args.mine.min_sup, data.class_counts, cache_cfg);
    const std::vector<TestedRule> rules = build_rules(data, mining, cache, args.mine.min_conf);
    const std::size_t n_tests = count_tests(mining.closed.size(), data.class_count());

    CorrectionOutcome outcome;
    switch (*method) {
      case Method::None:
        outcome.method = Method::None;
        outcome.alpha = args.alpha;
        outcome.cutoff = args.alpha;
        outcome.n_tests = n_tests;
        for (std::uint32_t i = 0; i < rules.size(); ++i) {
          if (rules[i].p_value <= args.alpha) outcome.significant.push_back(i);
        }
        break;
      case Method::BC:
        outcome = bonferroni_select(rules, args.alpha, n_tests);
        break;
      case Method::BH:
        outcome = bh_select_rules(rules, args.alpha);
        break;
      default: {  // perm-fwer / perm-fdr
        PermutationOptions popt;
        popt.n_perms = args.n_perms;
        popt.seed = args.seed;
        popt.workers = args.workers;
        popt.cache = cache_cfg;
        const PermutationRun run = run_permutations(data, mining, rules, popt);
        outcome = *method == Method::PermFwer ? perm_fwer_select(rules, run, args.alpha)
                                              : perm_fdr_select(rules, run, args.alpha);
        summary["n_perms"] = args.n_perms;
        summary["seed"] = args.seed;
        summary["rng"] = kRngAlgorithm;
        break;
      }
    }
    std::vector<TestedRule> significant;
    for (std::uint32_t idx : outcome.significant) significant.push_back(rules[idx]);
    outputs.stage(args.mine.out_path, rules_tsv(data, mining, significant));
    summary["n_tests"] = outcome.n_tests;
    summary["cutoff"] = outcome.cutoff;
    summary["n_significant"] = outcome.significant.size();
  }

  if (!args.mine.summary_path.empty()) {
    outputs.stage(args.mine.summary_path, summary.dump(2) + "\n");
  }
  outputs.commit();
  return 0;
}

struct EvalArgs {
  SynthCli synth;
  std::string method = "bc";
  double alpha = 0.05;
  std::size_t trials = 100;
  std::size_t min_sup = 1;
  double min_conf = 0.0;
  std::size_t n_perms = 1000;
  std::size_t workers = 1;
  std::size_t buffer_bytes = 16 * 1024 * 1024;
  std::string out_path = "metrics.json";
};

int cmd_eval(const EvalArgs& args) {
  const auto method = method_from_name(args.method);
  if (!method) throw std::runtime_error("unknown method: " + args.method);
  EvalConfig config;
  config.method = *method;
  config.alpha = args.alpha;
  config.min_sup = args.min_sup;
  config.min_conf = args.min_conf;
  config.n_perms = args.n_perms;
  config.workers = args.workers;
  config.cache.static_budget_bytes = args.buffer_bytes;
  const TrialMetrics metrics = run_trials(args.synth.params, config, args.trials,
                                          args.synth.seed);
  OutputSet outputs;
  outputs.stage(args.out_path, metrics_json(metrics, config, args.synth.params,
                                            args.synth.seed));
  outputs.commit();
  std::cout << "power=" << metrics.power << " fwer=" << metrics.fwer
            << " fdr=" << metrics.fdr << "\n";
  return 0;
}

struct BenchArgs {
  std::string data_path;
  std::string class_col = "class";
  char delimiter = ',';
  std::size_t min_sup = 1;
  double alpha = 0.05;
  std::size_t n_perms = 100;
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  std::string out_path = "bench.json";
};

// Permutation pipeline timed under the four optimization configurations;
// their decisions must agree, only the cost may differ.
int cmd_bench(const BenchArgs& args) {
  struct Config {
    const char* name;
    bool diffsets;
    bool dynamic_buffer;
    bool static_buffer;
  };
  const Config configs[] = {
      {"no_optimization", false, false, false},
      {"dynamic_buffer", false, true, false},
      {"diffsets_dynamic_buffer", true, true, false},
      {"static_diffsets_dynamic_buffer", true, true, true},
  };

  CsvOptions csv_opts{args.class_col, args.delimiter};
  const Dataset data = load_csv(std::filesystem::path(args.data_path), csv_opts);

  json runs = json::array();
  std::optional<std::vector<std::uint32_t>> reference_fwer;
  std::optional<std::vector<std::uint32_t>> reference_fdr;
  using clock = std::chrono::steady_clock;
  const auto seconds = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  for (const Config& cfg : configs) {
    const auto t0 = clock::now();
    MinerOptions miner_opts;
    miner_opts.use_diffsets = cfg.diffsets;
    const MiningResult mining = mine_closed(data, args.min_sup, miner_opts);
    const auto t1 = clock::now();

    BufferCacheConfig cache_cfg;
    cache_cfg.use_static = cfg.static_buffer;
    cache_cfg.use_dynamic = cfg.dynamic_buffer;
    BufferCache cache(data.record_count(), args.min_sup, data.class_counts, cache_cfg);
    const std::vector<TestedRule> rules = build_rules(data, mining, cache, 0.0);
    PermutationOptions popt;
    popt.n_perms = args.n_perms;
    popt.seed = args.seed;
    popt.workers = args.workers;
    popt.cache = cache_cfg;
    const PermutationRun run = run_permutations(data, mining, rules, popt);
    const auto t2 = clock::now();

    const CorrectionOutcome fwer = perm_fwer_select(rules, run, args.alpha);
    const CorrectionOutcome fdr = perm_fdr_select(rules, run, args.alpha);
    const CorrectionOutcome bc =
        bonferroni_select(rules, args.alpha, count_tests(mining.closed.size(),
                                                         data.class_count()));
    const auto t3 = clock::now();

    if (!reference_fwer) {
      reference_fwer = fwer.significant;
      reference_fdr = fdr.significant;
    } else if (*reference_fwer != fwer.significant || *reference_fdr != fdr.significant) {
      throw std::logic_error("optimization configurations disagree on decisions");
    }

    runs.push_back({{"config", cfg.name},
                    {"mine_seconds", seconds(t0, t1)},
                    {"permutation_seconds", seconds(t1, t2)},
                    {"correction_seconds", seconds(t2, t3)},
                    {"n_rules", rules.size()},
                    {"n_significant_perm_fwer", fwer.significant.size()},
                    {"n_significant_perm_fdr", fdr.significant.size()},
                    {"n_significant_bc", bc.significant.size()},
                    {"perm_fwer_cutoff", fwer.cutoff}});
  }

  json out;
  out["data"] = args.data_path;
  out["n"] = data.record_count();
  out["n_perms"] = args.n_perms;
  out["alpha"] = args.alpha;
  out["min_sup"] = args.min_sup;
  out["seed"] = args.seed;
  out["rng"] = kRngAlgorithm;
  out["workers"] = args.workers;
  out["identical_decisions"] = true;
  out["runs"] = std::move(runs);

  OutputSet outputs;
  outputs.stage(args.out_path, out.dump(2) + "\n");
  outputs.commit();
  std::cout << out["runs"].dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class association rule mining with false-positive control"};
  app.require_subcommand(1);

  // synth
  SynthCli synth_cli;
  bool split_pair = false;
  std::string synth_out = "data.csv";
  std::string truth_out;
  char synth_delim = ',';
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cli.add_options(synth_cmd);
  synth_cmd->add_option("--out", synth_out, "Output CSV path")->capture_default_str();
  synth_cmd->add_option("--truth", truth_out, "Ground-truth JSON path");
  synth_cmd->add_flag("--split-pair", split_pair,
                      "Concatenate two half-datasets for fair holdout");
  synth_cmd->add_option("--delimiter", synth_delim, "CSV delimiter");

  // mine
  MineArgs mine_args;
  CLI::App* mine_cmd = app.add_subcommand("mine", "Mine and score all rules");
  mine_cmd->add_option("--data", mine_args.data_path, "Input CSV")->required();
  mine_cmd->add_option("--class-col", mine_args.class_col, "Class column name")
      ->capture_default_str();
  mine_cmd->add_option("--delimiter", mine_args.delimiter, "CSV delimiter");
  mine_cmd->add_option("--min-sup", mine_args.min_sup, "Minimum support")->required();
  mine_cmd->add_option("--min-conf", mine_args.min_conf, "Minimum confidence")
      ->capture_default_str();
  mine_cmd->add_option("--static-buffer-bytes", mine_args.buffer_bytes,
                       "Static p-value buffer budget")->capture_default_str();
  mine_cmd->add_option("--out", mine_args.out_path, "Rule TSV path")->capture_default_str();
  mine_cmd->add_option("--summary", mine_args.summary_path, "Summary JSON path");

  // correct
  CorrectArgs correct_args;
  CLI::App* correct_cmd = app.add_subcommand("correct", "Select significant rules");
  correct_cmd->add_option("--data", correct_args.mine.data_path, "Input CSV")->required();
  correct_cmd->add_option("--class-col", correct_args.mine.class_col, "Class column name")
      ->capture_default_str();
  correct_cmd->add_option("--delimiter", correct_args.mine.delimiter, "CSV delimiter");
  correct_cmd->add_option("--min-sup", correct_args.mine.min_sup, "Minimum support")
      ->required();
  correct_cmd->add_option("--min-conf", correct_args.mine.min_conf, "Minimum confidence")
      ->capture_default_str();
  correct_cmd
      ->add_option("--method", correct_args.method,
                   "none|bc|bh|perm-fwer|perm-fdr|hd-bc|hd-bh|rh-bc|rh-bh")
      ->capture_default_str();
  correct_cmd->add_option("--alpha", correct_args.alpha, "Significance level")
      ->capture_default_str();
  correct_cmd->add_option("--n-perms", correct_args.n_perms, "Number of permutations")
      ->capture_default_str();
  correct_cmd->add_option("--workers", correct_args.workers, "Worker threads")
      ->capture_default_str();
  correct_cmd->add_option("--seed", correct_args.seed, "RNG seed")->capture_default_str();
  correct_cmd->add_option("--static-buffer-bytes", correct_args.mine.buffer_bytes,
                          "Static p-value buffer budget")->capture_default_str();
  correct_cmd->add_option("--out", correct_args.mine.out_path, "Significant rule TSV path")
      ->capture_default_str();
  correct_cmd->add_option("--summary", correct_args.mine.summary_path, "Summary JSON path");

  // eval
  EvalArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Score a correction method on synthetic trials");
  eval_args.synth.add_options(eval_cmd);
  eval_cmd->add_option("--method", eval_args.method, "Correction method")
      ->capture_default_str();
  eval_cmd->add_option("--alpha", eval_args.alpha, "Significance level")
      ->capture_default_str();
  eval_cmd->add_option("--trials", eval_args.trials, "Number of trials")
      ->capture_default_str();
  eval_cmd->add_option("--min-sup", eval_args.min_sup, "Minimum support")->required();
  eval_cmd->add_option("--min-conf", eval_args.min_conf, "Minimum confidence")
      ->capture_default_str();
  eval_cmd->add_option("--n-perms", eval_args.n_perms, "Number of permutations")
      ->capture_default_str();
  eval_cmd->add_option("--workers", eval_args.workers, "Worker threads")
      ->capture_default_str();
  eval_cmd->add_option("--static-buffer-bytes", eval_args.buffer_bytes,
                       "Static p-value buffer budget")->capture_default_str();
  eval_cmd->add_option("--out", eval_args.out_path, "Metrics JSON path")
      ->capture_default_str();

  // bench
  BenchArgs bench_args;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Time the permutation pipeline optimizations");
  bench_cmd->add_option("--data", bench_args.data_path, "Input CSV")->required();
  bench_cmd->add_option("--class-col", bench_args.class_col, "Class column name")
      ->capture_default_str();
  bench_cmd->add_option("--delimiter", bench_args.delimiter, "CSV delimiter");
  bench_cmd->add_option("--min-sup", bench_args.min_sup, "Minimum support")->required();
  bench_cmd->add_option("--alpha", bench_args.alpha, "Significance level")
      ->capture_default_str();
  bench_cmd->add_option("--n-perms", bench_args.n_perms, "Number of permutations")
      ->capture_default_str();
  bench_cmd->add_option("--workers", bench_args.workers, "Worker threads")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.seed, "RNG seed")->capture_default_str();
  bench_cmd->add_option("--out", bench_args.out_path, "Timing JSON path")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      return cmd_synth(synth_cli, split_pair, synth_out, truth_out, synth_delim);
    }
    if (mine_cmd->parsed()) return cmd_mine(mine_args);
    if (correct_cmd->parsed()) return cmd_correct(correct_args);
    if (eval_cmd->parsed()) return cmd_eval(eval_args);
    if (bench_cmd->parsed()) return cmd_bench(bench_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
