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

// Independent reference implementations used as test oracles. Everything here
// recomputes from first principles (exhaustive enumeration, direct
// definitions) and deliberately avoids the library's optimized code paths.

#ifndef SIGRULES_TESTS_ORACLES_HPP
#define SIGRULES_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "sigrules/dataset.hpp"
#include "sigrules/fisher.hpp"
#include "sigrules/permutation.hpp"
#include "sigrules/rng.hpp"
#include "sigrules/rules.hpp"

namespace oracles {

using sigrules::ClassId;
using sigrules::Dataset;
using sigrules::ItemId;
using sigrules::Tid;

// ln(i!) by a route independent of the incremental table: lgammal.
inline double log_factorial_ref(std::size_t i) {
  return static_cast<double>(std::lgammal(static_cast<long double>(i) + 1.0L));
}

// Hypergeometric pmf over exact binomials in long double (safe for n <= 40).
inline double pmf_ref(std::size_t k, std::size_t n, std::size_t n_c, std::size_t sx) {
  auto choose = [](std::size_t m, std::size_t r) -> long double {
    if (r > m) return 0.0L;
    long double v = 1.0L;
    for (std::size_t i = 0; i < r; ++i) {
      v = v * static_cast<long double>(m - i) / static_cast<long double>(i + 1);
    }
    return v;
  };
  return static_cast<double>(choose(n_c, k) * choose(n - n_c, sx - k) / choose(n, sx));
}

// Two-tailed Fisher p-value straight from its definition: the total pmf of
// every outcome at most as likely as k. Ties are grouped with the same
// log-space tolerance the production sweep declares, since analytically equal
// pmfs may differ by a few ulp.
inline double two_tailed_ref(std::size_t k, std::size_t n, std::size_t n_c,
                             std::size_t sx) {
  const std::size_t lower = n_c + sx > n ? n_c + sx - n : 0;
  const std::size_t upper = std::min(n_c, sx);
  const double pk = pmf_ref(k, n, n_c, sx);
  const double log_pk = std::log(pk);
  double total = 0.0;
  for (std::size_t j = lower; j <= upper; ++j) {
    const double pj = pmf_ref(j, n, n_c, sx);
    const double log_pj = std::log(pj);
    const bool tied = std::abs(log_pj - log_pk) <=
                      1e-12 * std::max(std::abs(log_pj), std::abs(log_pk));
    if (pj <= pk || tied) total += pj;
  }
  return total;
}

struct ClosedPattern {
  std::vector<ItemId> items;
  std::uint32_t support = 0;
  std::vector<std::uint32_t> class_support;

  bool operator<(const ClosedPattern& other) const { return items < other.items; }
  bool operator==(const ClosedPattern& other) const {
    return items == other.items && support == other.support &&
           class_support == other.class_support;
  }
};

// Closed frequent patterns by brute force: enumerate every frequent itemset
// recursively, group them by tid-set, and keep the maximal pattern of each
// group. Throws if a group's maximal pattern is not unique (it must be).
inline std::vector<ClosedPattern> closed_brute_force(const Dataset& d,
                                                     std::size_t min_sup) {
  std::map<std::vector<Tid>, std::vector<std::vector<ItemId>>> groups;
  std::vector<ItemId> current;

  const std::function<void(ItemId, const std::vector<Tid>&)> recurse =
      [&](ItemId first, const std::vector<Tid>& tids) {
        for (ItemId item = first; item < d.item_count(); ++item) {
          std::vector<Tid> next;
          for (Tid r : tids) {
            if (d.cell(r, d.items[item].attribute) == item) next.push_back(r);
          }
          if (next.size() < min_sup) continue;
          current.push_back(item);
          groups[next].push_back(current);
          recurse(item + 1, next);
          current.pop_back();
        }
      };
  std::vector<Tid> all(d.record_count());
  for (Tid r = 0; r < d.record_count(); ++r) all[r] = r;
  recurse(0, all);

  std::vector<ClosedPattern> closed;
  for (const auto& [tids, patterns] : groups) {
    const auto longest = std::max_element(
        patterns.begin(), patterns.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    for (const auto& p : patterns) {
      if (p.size() == longest->size() && p != *longest) {
        throw std::logic_error("tid-set group with two maximal patterns");
      }
    }
    ClosedPattern cp;
    cp.items = *longest;
    cp.support = static_cast<std::uint32_t>(tids.size());
    cp.class_support.assign(d.class_count(), 0);
    for (Tid r : tids) ++cp.class_support[d.labels[r]];
    closed.push_back(std::move(cp));
  }
  std::sort(closed.begin(), closed.end());
  return closed;
}

// Benjamini-Hochberg by exhaustive rank scan over the sorted list.
inline std::vector<std::uint32_t> bh_ref(const std::vector<double>& p, double alpha) {
  const std::size_t n = p.size();
  std::vector<double> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  std::size_t k = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (sorted[i - 1] * static_cast<double>(n) <= static_cast<double>(i) * alpha) k = i;
  }
  std::vector<std::uint32_t> selected;
  if (k == 0) return selected;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (p[i] <= sorted[k - 1]) selected.push_back(i);
  }
  return selected;
}

// The permutation pipeline with every optimization stripped out: each
// permutation re-derives every rule's tid-set by scanning the dataset and
// builds every p-value buffer from scratch. Bit-compatible with the engine by
// construction of the shared seeding and buffer-build routine.
inline sigrules::PermutationRun naive_permutation_run(
    const Dataset& d, const sigrules::MiningResult& mining,
    const std::vector<sigrules::TestedRule>& rules, std::size_t n_perms,
    std::uint64_t seed) {
  sigrules::PermutationRun run;
  run.n_perms = n_perms;
  run.n_rules = rules.size();
  run.seed = seed;
  const sigrules::LogFactorialTable table(d.record_count());

  std::vector<std::vector<Tid>> rule_tids;
  for (const auto& rule : rules) {
    rule_tids.push_back(d.pattern_tids(mining.nodes[rule.node].items));
  }
  for (std::size_t perm = 0; perm < n_perms; ++perm) {
    sigrules::SplitMix64 rng(sigrules::perm_seed(seed, perm));
    std::vector<ClassId> labels = d.labels;
    rng.shuffle(labels);
    double min_p = 1.0;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const ClassId cls = d.class_count() == 2 ? 0 : rules[i].class_index;
      std::size_t k = 0;
      for (Tid r : rule_tids[i]) {
        if (labels[r] == cls) ++k;
      }
      const auto buffer = sigrules::build_pvalue_buffer(
          d.record_count(), d.class_counts[cls], rules[i].coverage, table);
      const double p = buffer.at(k);
      run.pooled_p.push_back(p);
      min_p = std::min(min_p, p);
    }
    run.min_p_per_perm.push_back(min_p);
  }
  std::sort(run.pooled_p.begin(), run.pooled_p.end());
  return run;
}

}  // namespace oracles

#endif  // SIGRULES_TESTS_ORACLES_HPP
