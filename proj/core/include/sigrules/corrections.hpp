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

#ifndef SIGRULES_CORRECTIONS_HPP
#define SIGRULES_CORRECTIONS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sigrules/dataset.hpp"
#include "sigrules/fisher.hpp"
#include "sigrules/miner.hpp"
#include "sigrules/rng.hpp"
#include "sigrules/rules.hpp"

namespace sigrules {

enum class Method {
  None,      // uncorrected threshold alpha
  BC,        // Bonferroni
  BH,        // Benjamini-Hochberg step-up
  PermFwer,  // permutation-test FWER cutoff
  PermFdr,   // pooled empirical p-values + BH
  HdBc,      // holdout (positional split) + Bonferroni
  HdBh,      // holdout (positional split) + BH
  RhBc,      // random holdout + Bonferroni
  RhBh,      // random holdout + BH
};

std::string_view method_name(Method method);                   // e.g. "hd-bc"
std::optional<Method> method_from_name(std::string_view name); // inverse

/// Decision of one correction method at level alpha.
struct CorrectionOutcome {
  Method method = Method::None;
  double alpha = 0.0;
  /// Effective p-value threshold: alpha/n_tests for Bonferroni, the step-up
  /// boundary k*alpha/n for BH (on the scale of the p-values it ranked),
  /// the order-statistic cutoff for the permutation test, alpha for None.
  /// 0 when nothing was selected by a threshold-producing method.
  double cutoff = 0.0;
  std::vector<std::uint32_t> significant;  // indices into the evaluated rules
  std::size_t n_tests = 0;
};

/// Number of tests performed: one per closed pattern with two classes, m per
/// pattern with m > 2 classes. Throws std::invalid_argument for n_classes < 2.
std::size_t count_tests(std::size_t n_closed_patterns, std::size_t n_classes);

/// Selects rules with p <= alpha / n_tests. n_tests may be 0 only when the
/// rule list is empty.
CorrectionOutcome bonferroni_select(std::span<const TestedRule> rules, double alpha,
                                    std::size_t n_tests);

/// Benjamini-Hochberg step-up over a p-value list (values in [0, 1]; an
/// empirical p of 0 is allowed). Returns the indices of the selected entries;
/// ties at the boundary p-value are all included, so the result does not
/// depend on sort stability.
std::vector<std::uint32_t> bh_select(std::span<const double> p_values, double alpha);

/// The boundary threshold k*alpha/n of the step-up rule, 0 if nothing passes.
double bh_cutoff(std::span<const double> p_values, double alpha);

CorrectionOutcome bh_select_rules(std::span<const TestedRule> rules, double alpha);

enum class SplitMode { Concatenated, Random };
enum class ErrorRateTarget { Fwer, Fdr };

/// Disjoint exploratory/evaluation halves, as original record ids (ascending).
struct SplitSpec {
  std::vector<Tid> exploratory;
  std::vector<Tid> evaluation;
};

/// Concatenated: first floor(n/2) records vs the rest (the layout produced by
/// generate_split_pair). Random: uniform shuffle, then the same sizes. An odd
/// record goes to the evaluation half.
SplitSpec make_split(const Dataset& dataset, SplitMode mode, SplitMix64& rng);

struct HoldoutOptions {
  double alpha = 0.05;
  std::size_t min_sup_whole = 1;  // halved (rounded up) on the exploratory half
  double min_conf = 0.0;
  ErrorRateTarget target = ErrorRateTarget::Fwer;
  BufferCacheConfig cache{};
};

/// Everything the holdout pipeline produced. `survivors` carry their
/// evaluation-half statistics and reference nodes of `explore_mining`;
/// outcome.significant indexes into `survivors`.
struct HoldoutResult {
  CorrectionOutcome outcome;
  std::vector<TestedRule> survivors;
  std::vector<double> exploratory_p;  // parallel to survivors
  MiningResult explore_mining;
  Dataset explore_data;
  Dataset eval_data;
  SplitSpec split;
};

/// Mines the exploratory half at half min_sup, keeps rules with exploratory
/// p <= alpha, re-tests the survivors on the evaluation half (a pattern that
/// is absent there gets p = 1), and corrects at level alpha with the number
/// of tests equal to the survivor count (Bonferroni for Fwer, BH for Fdr).
HoldoutResult holdout_run(const Dataset& dataset, const SplitSpec& split,
                          const HoldoutOptions& options);

}  // namespace sigrules

#endif  // SIGRULES_CORRECTIONS_HPP
