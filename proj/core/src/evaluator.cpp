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

#include "sigrules/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace sigrules {

namespace {

// Seed streams hanging off one trial seed.
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kPermStream = 2;

std::pair<std::size_t, std::size_t> overlap_counts(std::span<const Tid> a,
                                                   std::span<const Tid> b,
                                                   std::span<const ClassId> labels,
                                                   ClassId cls) {
  std::size_t both = 0;
  std::size_t both_cls = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++both;
      if (labels[a[i]] == cls) ++both_cls;
      ++i;
      ++j;
    }
  }
  return {both, both_cls};
}

bool is_holdout(Method m) {
  return m == Method::HdBc || m == Method::HdBh || m == Method::RhBc ||
         m == Method::RhBh;
}

}  // namespace

TruthView make_truth_view(const Dataset& universe, std::span<const Tid> covered,
                          ClassId truth_class) {
  TruthView view;
  view.class_index = truth_class;
  view.tids.assign(covered.begin(), covered.end());
  std::sort(view.tids.begin(), view.tids.end());
  if (!view.tids.empty()) view.closure = closure_of_tids(universe, view.tids);
  return view;
}

double adjusted_p(const Dataset& universe, BufferCache& cache, const RuleView& rule,
                  std::span<const Tid> truth_tids, ClassId truth_class) {
  if (rule.coverage == 0) return 1.0;
  const std::size_t n = universe.record_count();
  const std::size_t n_c = universe.class_counts[rule.class_index];
  const std::size_t n_ct = universe.class_counts[truth_class];
  const auto [both, both_cls] =
      overlap_counts(rule.tids, truth_tids, universe.labels, rule.class_index);

  // Expected support if the embedded rule did not exist: the overlap keeps
  // only the background class rate, the rest of the rule's support stays.
  const double expected =
      static_cast<double>(both) * (static_cast<double>(n_ct) / static_cast<double>(n)) +
      (static_cast<double>(rule.support) - static_cast<double>(both_cls));
  const std::size_t lower = n_c + rule.coverage > n ? n_c + rule.coverage - n : 0;
  const std::size_t upper = std::min<std::size_t>(n_c, rule.coverage);
  auto k = static_cast<long long>(std::llround(expected));
  k = std::clamp(k, static_cast<long long>(lower), static_cast<long long>(upper));
  return cache.fisher_p(static_cast<std::size_t>(k), rule.coverage, n_c);
}

bool classify_false_positive(const Dataset& universe, BufferCache& cache,
                             const RuleView& rule, std::span<const TruthView> truths,
                             double cutoff, const PermutationRun* empirical_scale) {
  for (const TruthView& truth : truths) {
    if (!truth.closure.empty() && truth.class_index == rule.class_index &&
        truth.closure.size() == rule.pattern.size() &&
        std::equal(truth.closure.begin(), truth.closure.end(), rule.pattern.begin())) {
      return false;  // this is the embedded rule itself
    }
  }
  for (const TruthView& truth : truths) {
    const auto [both, both_cls] =
        overlap_counts(rule.tids, truth.tids, universe.labels, rule.class_index);
    (void)both_cls;
    if (both == 0) continue;
    double p = adjusted_p(universe, cache, rule, truth.tids, truth.class_index);
    if (empirical_scale != nullptr) p = empirical_p(*empirical_scale, p);
    // Its significance disappears with the embedded rule's effect removed:
    // a by-product of the real rule, not an error.
    if (p > cutoff) return false;
  }
  return true;
}

namespace {

TrialDetail run_one_trial(const SynthParams& params, const EvalConfig& config,
                          std::size_t trial_index, std::uint64_t master_seed) {
  const std::uint64_t trial_seed = derive_seed(master_seed, trial_index);
  TrialDetail detail;
  detail.index = trial_index;

  if (is_holdout(config.method)) {
    const SynthResult synth = generate_split_pair(params, trial_seed);
    const Dataset& data = synth.dataset;
    detail.n_embedded = synth.truth.size();

    const bool positional = config.method == Method::HdBc || config.method == Method::HdBh;
    SplitMix64 split_rng(derive_seed(trial_seed, kSplitStream));
    const SplitSpec split = make_split(
        data, positional ? SplitMode::Concatenated : SplitMode::Random, split_rng);

    HoldoutOptions options;
    options.alpha = config.alpha;
    options.min_sup_whole = config.min_sup;
    options.min_conf = config.min_conf;
    options.target = (config.method == Method::HdBc || config.method == Method::RhBc)
                         ? ErrorRateTarget::Fwer
                         : ErrorRateTarget::Fdr;
    options.cache = config.cache;
    HoldoutResult hr = holdout_run(data, split, options);
    detail.n_rules = hr.outcome.n_tests;
    detail.n_significant = hr.outcome.significant.size();
    detail.cutoff = hr.outcome.cutoff;

    // Ground truth mapped into each half: detection is judged where the rules
    // were mined, false positives where the final decision was made.
    const auto to_local = [](std::span<const Tid> covered, std::span<const Tid> half) {
      std::vector<Tid> local;
      std::size_t i = 0;
      for (std::size_t pos = 0; pos < half.size(); ++pos) {
        while (i < covered.size() && covered[i] < half[pos]) ++i;
        if (i < covered.size() && covered[i] == half[pos]) {
          local.push_back(static_cast<Tid>(pos));
        }
      }
      return local;
    };
    std::vector<TruthView> explore_truth;
    std::vector<TruthView> eval_truth;
    for (const EmbeddedRule& rule : synth.truth) {
      explore_truth.push_back(make_truth_view(
          hr.explore_data, to_local(rule.covered_tids, split.exploratory), rule.class_index));
      eval_truth.push_back(make_truth_view(
          hr.eval_data, to_local(rule.covered_tids, split.evaluation), rule.class_index));
    }

    BufferCache classify_cache(hr.eval_data.record_count(), 1, hr.eval_data.class_counts,
                               config.cache);
    std::vector<bool> detected(synth.truth.size(), false);
    for (std::uint32_t idx : hr.outcome.significant) {
      const TestedRule& rule = hr.survivors[idx];
      const PatternNode& node = hr.explore_mining.nodes[rule.node];
      for (std::size_t t = 0; t < explore_truth.size(); ++t) {
        const TruthView& truth = explore_truth[t];
        if (!truth.closure.empty() && truth.class_index == rule.class_index &&
            truth.closure == node.items) {
          detected[t] = true;
        }
      }
      const std::vector<Tid> eval_tids = hr.eval_data.pattern_tids(node.items);
      RuleView view{node.items, rule.class_index, rule.coverage, rule.support, eval_tids};
      if (classify_false_positive(hr.eval_data, classify_cache, view, eval_truth,
                                  hr.outcome.cutoff)) {
        ++detail.n_false;
      }
    }
    detail.n_detected = static_cast<std::size_t>(
        std::count(detected.begin(), detected.end(), true));
    return detail;
  }

  const SynthResult synth = generate(params, trial_seed);
  const Dataset& data = synth.dataset;
  detail.n_embedded = synth.truth.size();

  const MiningResult mining = mine_closed(data, config.min_sup);
  BufferCache cache(data.record_count(), config.min_sup, data.class_counts, config.cache);
  const std::vector<TestedRule> rules = build_rules(data, mining, cache, config.min_conf);

  CorrectionOutcome outcome;
  PermutationRun run;
  const std::size_t n_tests = count_tests(mining.closed.size(), data.class_count());
  switch (config.method) {
    case Method::None: {
      outcome.method = Method::None;
      outcome.alpha = config.alpha;
      outcome.cutoff = config.alpha;
      outcome.n_tests = n_tests;
      for (std::uint32_t i = 0; i < rules.size(); ++i) {
        if (rules[i].p_value <= config.alpha) outcome.significant.push_back(i);
      }
      break;
    }
    case Method::BC:
      outcome = bonferroni_select(rules, config.alpha, n_tests);
      break;
    case Method::BH:
      outcome = bh_select_rules(rules, config.alpha);
      break;
    case Method::PermFwer:
    case Method::PermFdr: {
      PermutationOptions popt;
      popt.n_perms = config.n_perms;
      popt.seed = derive_seed(trial_seed, kPermStream);
      popt.workers = 1;  // trials parallelize one level up
      popt.cache = config.cache;
      run = run_permutations(data, mining, rules, popt);
      outcome = config.method == Method::PermFwer
                    ? perm_fwer_select(rules, run, config.alpha)
                    : perm_fdr_select(rules, run, config.alpha);
      break;
    }
    default:
      throw std::logic_error("unhandled method");
  }
  detail.n_rules = outcome.n_tests;
  detail.n_significant = outcome.significant.size();
  detail.cutoff = outcome.cutoff;

  std::vector<TruthView> truths;
  for (const EmbeddedRule& rule : synth.truth) {
    truths.push_back(make_truth_view(data, rule.covered_tids, rule.class_index));
  }
  const PermutationRun* scale = config.method == Method::PermFdr ? &run : nullptr;

  std::vector<bool> detected(truths.size(), false);
  for (std::uint32_t idx : outcome.significant) {
    const TestedRule& rule = rules[idx];
    const PatternNode& node = mining.nodes[rule.node];
    for (std::size_t t = 0; t < truths.size(); ++t) {
      if (!truths[t].closure.empty() && truths[t].class_index == rule.class_index &&
          truths[t].closure == node.items) {
        detected[t] = true;
      }
    }
    const std::vector<Tid> tids = reconstruct_tids(mining, rule.node, data);
    RuleView view{node.items, rule.class_index, rule.coverage, rule.support, tids};
    if (classify_false_positive(data, cache, view, truths, outcome.cutoff, scale)) {
      ++detail.n_false;
    }
  }
  detail.n_detected =
      static_cast<std::size_t>(std::count(detected.begin(), detected.end(), true));
  return detail;
}

}  // namespace

TrialMetrics run_trials(const SynthParams& params, const EvalConfig& config,
                        std::size_t n_trials, std::uint64_t master_seed) {
  if (n_trials < 1) throw std::invalid_argument("run_trials: n_trials must be >= 1");
  validate(params, is_holdout(config.method));

  TrialMetrics metrics;
  metrics.n_trials = n_trials;
  metrics.trials.resize(n_trials);

  const std::size_t workers = std::max<std::size_t>(1, config.workers);
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      metrics.trials[t] = run_one_trial(params, config, t, master_seed);
    }
  };
  if (workers == 1 || n_trials == 1) {
    work(0, n_trials);
  } else {
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min(workers, n_trials);
    const std::size_t chunk = (n_trials + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n_trials, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  double power = 0.0;
  double fdr = 0.0;
  std::size_t trials_with_fp = 0;
  double sig = 0.0;
  double fp = 0.0;
  for (const TrialDetail& t : metrics.trials) {
    if (t.n_embedded > 0) {
      power += static_cast<double>(t.n_detected) / static_cast<double>(t.n_embedded);
    }
    if (t.n_significant > 0) {
      fdr += static_cast<double>(t.n_false) / static_cast<double>(t.n_significant);
    }
    if (t.n_false > 0) ++trials_with_fp;
    sig += static_cast<double>(t.n_significant);
    fp += static_cast<double>(t.n_false);
  }
  const auto nt = static_cast<double>(n_trials);
  metrics.power = power / nt;
  metrics.fdr = fdr / nt;
  metrics.fwer = static_cast<double>(trials_with_fp) / nt;
  metrics.mean_n_significant = sig / nt;
  metrics.mean_n_false = fp / nt;
  return metrics;
}

std::string metrics_json(const TrialMetrics& metrics, const EvalConfig& config,
                         const SynthParams& params, std::uint64_t master_seed) {
  nlohmann::json j;
  j["method"] = std::string(method_name(config.method));
  j["alpha"] = config.alpha;
  j["min_sup"] = config.min_sup;
  j["min_conf"] = config.min_conf;
  if (config.method == Method::PermFwer || config.method == Method::PermFdr) {
    j["n_perms"] = config.n_perms;
  }
  j["seed"] = master_seed;
  j["rng"] = kRngAlgorithm;
  j["params"] = {
      {"N", params.n_records},         {"classes", params.n_classes},
      {"A", params.n_attributes},      {"min_v", params.min_values},
      {"max_v", params.max_values},    {"rules", params.n_rules},
      {"min_l", params.min_length},    {"max_l", params.max_length},
      {"min_s", params.min_coverage},  {"max_s", params.max_coverage},
      {"min_c", params.min_confidence}, {"max_c", params.max_confidence},
  };
  j["n_trials"] = metrics.n_trials;
  j["power"] = metrics.power;
  j["fwer"] = metrics.fwer;
  j["fdr"] = metrics.fdr;
  j["mean_n_significant"] = metrics.mean_n_significant;
  j["mean_n_false"] = metrics.mean_n_false;
  nlohmann::json trials = nlohmann::json::array();
  for (const TrialDetail& t : metrics.trials) {
    trials.push_back({{"trial", t.index},
                      {"n_rules", t.n_rules},
                      {"n_significant", t.n_significant},
                      {"n_false", t.n_false},
                      {"n_embedded", t.n_embedded},
                      {"n_detected", t.n_detected},
                      {"cutoff", t.cutoff}});
  }
  j["trials"] = std::move(trials);
  return j.dump(2) + "\n";
}

}  // namespace sigrules
