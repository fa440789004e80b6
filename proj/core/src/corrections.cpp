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

#include "sigrules/corrections.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sigrules {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::None: return "none";
    case Method::BC: return "bc";
    case Method::BH: return "bh";
    case Method::PermFwer: return "perm-fwer";
    case Method::PermFdr: return "perm-fdr";
    case Method::HdBc: return "hd-bc";
    case Method::HdBh: return "hd-bh";
    case Method::RhBc: return "rh-bc";
    case Method::RhBh: return "rh-bh";
  }
  return "unknown";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (Method m : {Method::None, Method::BC, Method::BH, Method::PermFwer,
                   Method::PermFdr, Method::HdBc, Method::HdBh, Method::RhBc,
                   Method::RhBh}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

std::size_t count_tests(std::size_t n_closed_patterns, std::size_t n_classes) {
  if (n_classes < 2) {
    throw std::invalid_argument("count_tests requires at least 2 classes");
  }
  return n_classes == 2 ? n_closed_patterns : n_classes * n_closed_patterns;
}

CorrectionOutcome bonferroni_select(std::span<const TestedRule> rules, double alpha,
                                    std::size_t n_tests) {
  if (n_tests == 0 && !rules.empty()) {
    throw std::invalid_argument("bonferroni_select: n_tests is 0 with non-empty rules");
  }
  CorrectionOutcome out;
  out.method = Method::BC;
  out.alpha = alpha;
  out.n_tests = n_tests;
  out.cutoff = n_tests == 0 ? 0.0 : alpha / static_cast<double>(n_tests);
  for (std::uint32_t i = 0; i < rules.size(); ++i) {
    if (rules[i].p_value <= out.cutoff) out.significant.push_back(i);
  }
  return out;
}

namespace {

// Largest 1-based rank k with p_(k) <= k*alpha/n, or 0 if none.
std::size_t bh_boundary_rank(std::vector<double>& sorted, double alpha) {
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::size_t k = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (sorted[i - 1] <= static_cast<double>(i) * alpha / static_cast<double>(n)) k = i;
  }
  return k;
}

}  // namespace

std::vector<std::uint32_t> bh_select(std::span<const double> p_values, double alpha) {
  for (double p : p_values) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("bh_select: p-value outside [0, 1]");
  }
  std::vector<double> sorted(p_values.begin(), p_values.end());
  const std::size_t k = bh_boundary_rank(sorted, alpha);
  std::vector<std::uint32_t> selected;
  if (k == 0) return selected;
  // Everything tied with the k-th smallest value is included, so the result
  // does not depend on sort stability.
  const double boundary = sorted[k - 1];
  for (std::uint32_t i = 0; i < p_values.size(); ++i) {
    if (p_values[i] <= boundary) selected.push_back(i);
  }
  return selected;
}

double bh_cutoff(std::span<const double> p_values, double alpha) {
  std::vector<double> sorted(p_values.begin(), p_values.end());
  const std::size_t k = bh_boundary_rank(sorted, alpha);
  if (k == 0) return 0.0;
  return static_cast<double>(k) * alpha / static_cast<double>(p_values.size());
}

CorrectionOutcome bh_select_rules(std::span<const TestedRule> rules, double alpha) {
  std::vector<double> p;
  p.reserve(rules.size());
  for (const TestedRule& rule : rules) p.push_back(rule.p_value);
  CorrectionOutcome out;
  out.method = Method::BH;
  out.alpha = alpha;
  out.n_tests = rules.size();
  out.significant = bh_select(p, alpha);
  out.cutoff = bh_cutoff(p, alpha);
  return out;
}

SplitSpec make_split(const Dataset& dataset, SplitMode mode, SplitMix64& rng) {
  const std::size_t n = dataset.record_count();
  if (n < 2) throw std::invalid_argument("make_split needs at least 2 records");
  const std::size_t half = n / 2;  // an odd record lands in the evaluation half
  SplitSpec split;
  if (mode == SplitMode::Concatenated) {
    for (Tid r = 0; r < n; ++r) {
      (r < half ? split.exploratory : split.evaluation).push_back(r);
    }
  } else {
    std::vector<Tid> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    split.exploratory.assign(order.begin(), order.begin() + half);
    split.evaluation.assign(order.begin() + half, order.end());
    std::sort(split.exploratory.begin(), split.exploratory.end());
    std::sort(split.evaluation.begin(), split.evaluation.end());
  }
  return split;
}

HoldoutResult holdout_run(const Dataset& dataset, const SplitSpec& split,
                          const HoldoutOptions& options) {
  if (split.exploratory.empty() || split.evaluation.empty()) {
    throw std::invalid_argument("holdout_run: both halves must be non-empty");
  }
  HoldoutResult result;
  result.split = split;
  result.explore_data = dataset.subset(split.exploratory);
  result.eval_data = dataset.subset(split.evaluation);

  const std::size_t min_sup_explore =
      std::max<std::size_t>(1, (options.min_sup_whole + 1) / 2);
  result.explore_mining = mine_closed(result.explore_data, min_sup_explore);

  const Dataset& ex = result.explore_data;
  const Dataset& ev = result.eval_data;
  BufferCache explore_cache(ex.record_count(), min_sup_explore, ex.class_counts,
                            options.cache);
  const std::vector<TestedRule> explore_rules =
      build_rules(ex, result.explore_mining, explore_cache, options.min_conf);

  // Rules surviving the exploratory screen are re-tested on the evaluation
  // half with its own n and class counts. A pattern with no evaluation
  // coverage cannot be scored there and keeps p = 1.
  BufferCache eval_cache(ev.record_count(), 1, ev.class_counts, options.cache);
  const std::size_t n_classes = ev.class_count();
  for (const TestedRule& rule : explore_rules) {
    if (rule.p_value > options.alpha) continue;
    const PatternNode& node = result.explore_mining.nodes[rule.node];
    std::vector<std::uint32_t> counts(n_classes, 0);
    std::uint32_t coverage = 0;
    for (Tid r = 0; r < ev.record_count(); ++r) {
      if (ev.record_contains(r, node.items)) {
        ++coverage;
        ++counts[ev.labels[r]];
      }
    }
    TestedRule survivor = rule;
    survivor.coverage = coverage;
    survivor.support = counts[rule.class_index];
    survivor.confidence =
        coverage == 0 ? 0.0 : static_cast<double>(survivor.support) / coverage;
    if (coverage == 0) {
      survivor.p_value = 1.0;
    } else {
      const ClassId pc = n_classes == 2 ? 0 : rule.class_index;
      survivor.p_value = eval_cache.fisher_p(counts[pc], coverage, ev.class_counts[pc]);
    }
    result.survivors.push_back(survivor);
    result.exploratory_p.push_back(rule.p_value);
  }

  if (options.target == ErrorRateTarget::Fwer) {
    result.outcome =
        bonferroni_select(result.survivors, options.alpha, result.survivors.size());
  } else {
    result.outcome = bh_select_rules(result.survivors, options.alpha);
  }
  return result;
}

}  // namespace sigrules
