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

#include "sigrules/permutation.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <stdexcept>
#include <thread>

namespace sigrules {

std::uint64_t perm_seed(std::uint64_t master_seed, std::uint64_t perm_index) {
  return derive_seed(master_seed, perm_index);
}

std::vector<ClassId> permute_labels(std::vector<ClassId> labels, SplitMix64& rng) {
  rng.shuffle(labels);
  return labels;
}

namespace {

void parallel_ranges(std::size_t total, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t)>& work) {
  workers = std::max<std::size_t>(1, std::min(workers, total));
  if (workers <= 1) {
    work(0, total);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (total + workers - 1) / workers;
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(total, begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

PermutationRun run_permutations(const Dataset& dataset, const MiningResult& mining,
                                std::span<const TestedRule> rules,
                                const PermutationOptions& options) {
  if (options.n_perms < 1) throw std::invalid_argument("n_perms must be >= 1");
  const std::size_t n_classes = dataset.class_count();
  const std::size_t n_rules = rules.size();
  const std::size_t n_perms = options.n_perms;

  PermutationRun run;
  run.n_perms = n_perms;
  run.n_rules = n_rules;
  run.seed = options.seed;
  run.min_p_per_perm.assign(n_perms, 1.0);
  run.pooled_p.assign(n_perms * n_rules, 1.0);

  // Per-rule lookup constants. With two classes all rules are scored through
  // class 0 (the two-tailed p-value is direction-free), so rules sharing a
  // coverage share one buffer, exactly as the original labels were scored.
  std::vector<ClassId> p_class(n_rules);
  std::vector<std::size_t> p_class_total(n_rules);
  for (std::size_t i = 0; i < n_rules; ++i) {
    p_class[i] = n_classes == 2 ? 0 : rules[i].class_index;
    p_class_total[i] = dataset.class_counts[p_class[i]];
  }

  // Phase 1, permutation-major: shuffle labels and roll the per-class counts
  // down the pattern tree (Diff chains), keeping each rule's support on each
  // permutation. Coverage never changes, so this is all the label work there is.
  std::vector<std::uint32_t> supports(n_perms * n_rules);
  parallel_ranges(n_perms, options.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> counts;
    std::vector<ClassId> shuffled;
    for (std::size_t perm = begin; perm < end; ++perm) {
      SplitMix64 rng(perm_seed(options.seed, perm));
      shuffled = dataset.labels;
      rng.shuffle(shuffled);
      class_supports_under_labels(mining, dataset, shuffled, counts);
      std::uint32_t* row = supports.data() + perm * n_rules;
      for (std::size_t i = 0; i < n_rules; ++i) {
        row[i] = counts[rules[i].node * n_classes + p_class[i]];
      }
    }
  });

  // Phase 2, rule-major: a rule's buffer is built once and serves all N of
  // its permutation supports. Workers keep private minima, merged afterwards
  // (min is order-free, so any worker count gives the same run).
  const std::size_t n_workers =
      std::max<std::size_t>(1, std::min(options.workers, n_rules ? n_rules : 1));
  std::vector<std::vector<double>> worker_min(n_workers);
  std::atomic<std::size_t> next_worker{0};
  parallel_ranges(n_rules, n_workers, [&](std::size_t begin, std::size_t end) {
    const std::size_t slot = next_worker.fetch_add(1);
    std::vector<double>& min_p = worker_min[slot];
    min_p.assign(n_perms, 1.0);
    BufferCache cache(dataset.record_count(), mining.min_sup, dataset.class_counts,
                      options.cache);
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t coverage = rules[i].coverage;
      for (std::size_t perm = 0; perm < n_perms; ++perm) {
        const double p = cache.fisher_p(supports[perm * n_rules + i], coverage,
                                        p_class_total[i]);
        run.pooled_p[perm * n_rules + i] = p;
        min_p[perm] = std::min(min_p[perm], p);
      }
    }
  });
  for (const std::vector<double>& min_p : worker_min) {
    if (min_p.empty()) continue;
    for (std::size_t perm = 0; perm < n_perms; ++perm) {
      run.min_p_per_perm[perm] = std::min(run.min_p_per_perm[perm], min_p[perm]);
    }
  }

  std::sort(run.pooled_p.begin(), run.pooled_p.end());
  return run;
}

double perm_fwer_cutoff(const PermutationRun& run, double alpha) {
  // floor(alpha*N) with a tiny nudge so exact products are not pushed down a
  // rank by floating-point representation.
  const auto rank = static_cast<std::size_t>(
      alpha * static_cast<double>(run.n_perms) + 1e-9);
  if (rank < 1) {
    throw std::invalid_argument("perm_fwer_cutoff: alpha*n_perms < 1, too few permutations");
  }
  std::vector<double> sorted = run.min_p_per_perm;
  std::sort(sorted.begin(), sorted.end());
  return sorted[rank - 1];
}

CorrectionOutcome perm_fwer_select(std::span<const TestedRule> rules,
                                   const PermutationRun& run, double alpha) {
  CorrectionOutcome out;
  out.method = Method::PermFwer;
  out.alpha = alpha;
  out.n_tests = run.n_rules;
  out.cutoff = perm_fwer_cutoff(run, alpha);
  for (std::uint32_t i = 0; i < rules.size(); ++i) {
    if (rules[i].p_value < out.cutoff) out.significant.push_back(i);  // strictly below
  }
  return out;
}

double empirical_p(const PermutationRun& run, double p) {
  const auto count = std::upper_bound(run.pooled_p.begin(), run.pooled_p.end(), p) -
                     run.pooled_p.begin();
  return static_cast<double>(count) / static_cast<double>(run.pooled_p.size());
}

CorrectionOutcome perm_fdr_select(std::span<const TestedRule> rules,
                                  const PermutationRun& run, double alpha) {
  if (rules.size() != run.n_rules) {
    throw std::invalid_argument("perm_fdr_select: rule list does not match the run");
  }
  std::vector<double> emp(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    emp[i] = empirical_p(run, rules[i].p_value);
  }
  CorrectionOutcome out;
  out.method = Method::PermFdr;
  out.alpha = alpha;
  out.n_tests = rules.size();
  out.significant = bh_select(emp, alpha);
  out.cutoff = bh_cutoff(emp, alpha);  // on the empirical scale
  return out;
}

}  // namespace sigrules
