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

#ifndef SIGRULES_PERMUTATION_HPP
#define SIGRULES_PERMUTATION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sigrules/corrections.hpp"
#include "sigrules/dataset.hpp"
#include "sigrules/fisher.hpp"
#include "sigrules/miner.hpp"
#include "sigrules/rng.hpp"
#include "sigrules/rules.hpp"

namespace sigrules {

/// Null distribution from N label shuffles: the per-permutation minimum
/// p-values and the pooled multiset of all N * N_t rule p-values.
struct PermutationRun {
  std::size_t n_perms = 0;
  std::size_t n_rules = 0;  // N_t
  std::uint64_t seed = 0;
  std::vector<double> min_p_per_perm;
  std::vector<double> pooled_p;  // sorted ascending, size n_perms * n_rules
};

/// Sub-seed for one permutation; exposed so independent re-implementations of
/// the pipeline can reproduce the exact label sequences.
std::uint64_t perm_seed(std::uint64_t master_seed, std::uint64_t perm_index);

/// Uniform random permutation of the label vector (class counts preserved).
std::vector<ClassId> permute_labels(std::vector<ClassId> labels, SplitMix64& rng);

struct PermutationOptions {
  std::size_t n_perms = 1000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  BufferCacheConfig cache{};
};

/// Shuffles labels n_perms times and re-scores every rule on each shuffle.
/// Patterns are never re-mined: coverage is permutation-invariant, per-class
/// supports come from the stored tid representations (Diff chains resolved
/// parent-first), and p-values are served from the buffer cache. Each worker
/// owns a private cache; results are identical for any worker count.
PermutationRun run_permutations(const Dataset& dataset, const MiningResult& mining,
                                std::span<const TestedRule> rules,
                                const PermutationOptions& options);

/// The floor(alpha*N)-th smallest per-permutation minimum (1-based). A rule
/// is significant iff its original p-value is strictly below this cutoff.
/// Requires floor(alpha*N) >= 1.
double perm_fwer_cutoff(const PermutationRun& run, double alpha);

CorrectionOutcome perm_fwer_select(std::span<const TestedRule> rules,
                                   const PermutationRun& run, double alpha);

/// Fraction of pooled permutation p-values <= p. May be 0 for a rule more
/// extreme than every permutation outcome.
double empirical_p(const PermutationRun& run, double p);

/// Replaces each rule's p-value by its pooled empirical rank, then applies
/// Benjamini-Hochberg at level alpha. The rule list must be the one the run
/// was computed over. The outcome's cutoff is on the empirical scale.
CorrectionOutcome perm_fdr_select(std::span<const TestedRule> rules,
                                  const PermutationRun& run, double alpha);

}  // namespace sigrules

#endif  // SIGRULES_PERMUTATION_HPP
