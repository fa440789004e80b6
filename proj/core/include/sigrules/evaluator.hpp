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

#ifndef SIGRULES_EVALUATOR_HPP
#define SIGRULES_EVALUATOR_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sigrules/corrections.hpp"
#include "sigrules/dataset.hpp"
#include "sigrules/fisher.hpp"
#include "sigrules/permutation.hpp"
#include "sigrules/rules.hpp"
#include "sigrules/synth.hpp"

namespace sigrules {

/// An embedded rule mapped into the record universe a method was judged in
/// (the whole dataset, or one holdout half): its covered records there, and
/// the closed pattern a miner would emit for them.
struct TruthView {
  std::vector<ItemId> closure;
  ClassId class_index = 0;
  std::vector<Tid> tids;  // ascending
};

TruthView make_truth_view(const Dataset& universe, std::span<const Tid> covered,
                          ClassId truth_class);

/// The fields of a significant rule needed to score it against ground truth.
struct RuleView {
  std::span<const ItemId> pattern;
  ClassId class_index = 0;
  std::uint32_t coverage = 0;  // supp(X)
  std::uint32_t support = 0;   // supp(X => c)
  std::span<const Tid> tids;   // ascending
};

/// The rule's p-value recomputed as if the embedded rule did not exist: the
/// class prevalence inside the overlap with the embedded rule's records is
/// replaced by the background rate, the adjusted support is rounded to the
/// nearest integer and clamped to the valid hypergeometric range, and the
/// p-value is looked up at that support. With no overlap this collapses to
/// the rule's own p-value.
double adjusted_p(const Dataset& universe, BufferCache& cache, const RuleView& rule,
                  std::span<const Tid> truth_tids, ClassId truth_class);

/// Whether a significant rule is a false positive at the method's effective
/// cutoff. A rule matching an embedded rule (pattern equals the embedded
/// closure and class matches) is never one. Otherwise it is one iff, against
/// every embedded rule, it either has no record overlap or keeps an adjusted
/// p-value within the cutoff. With no embedded rules every significant rule
/// is a false positive. When the cutoff lives on the pooled empirical scale
/// (the permutation FDR method), pass the run so adjusted p-values are
/// transformed onto that scale before comparison.
bool classify_false_positive(const Dataset& universe, BufferCache& cache,
                             const RuleView& rule, std::span<const TruthView> truths,
                             double cutoff,
                             const PermutationRun* empirical_scale = nullptr);

struct EvalConfig {
  Method method = Method::BC;
  double alpha = 0.05;
  std::size_t min_sup = 1;  // on the whole dataset; holdout halves it
  double min_conf = 0.0;
  std::size_t n_perms = 1000;  // permutation methods only
  std::size_t workers = 1;     // trial-level parallelism
  BufferCacheConfig cache{};
};

struct TrialDetail {
  std::size_t index = 0;
  std::size_t n_rules = 0;  // tests performed on the mined universe
  std::size_t n_significant = 0;
  std::size_t n_false = 0;
  std::size_t n_embedded = 0;
  std::size_t n_detected = 0;
  double cutoff = 0.0;
};

/// Power / FWER / FDR aggregated over repeated synthetic trials.
struct TrialMetrics {
  std::size_t n_trials = 0;
  double power = 0.0;  // mean fraction of embedded rules detected
  double fwer = 0.0;   // fraction of trials with at least one false positive
  double fdr = 0.0;    // mean per-trial false-positive proportion (0 if none significant)
  double mean_n_significant = 0.0;
  double mean_n_false = 0.0;
  std::vector<TrialDetail> trials;
};

/// One full experiment: per trial, generate a dataset with planted rules
/// (the concatenated split-pair construction for the holdout methods), mine,
/// test, correct, and score every significant rule against the ground truth.
/// Trial t uses the sub-seed derive_seed(master_seed, t), so runs are
/// reproducible and independent of the worker count.
TrialMetrics run_trials(const SynthParams& params, const EvalConfig& config,
                        std::size_t n_trials, std::uint64_t master_seed);

/// Canonical JSON serialization of a metrics report (no timing fields, keys
/// sorted): identical runs produce identical bytes.
std::string metrics_json(const TrialMetrics& metrics, const EvalConfig& config,
                         const SynthParams& params, std::uint64_t master_seed);

}  // namespace sigrules

#endif  // SIGRULES_EVALUATOR_HPP
