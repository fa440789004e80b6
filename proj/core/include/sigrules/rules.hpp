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

#ifndef SIGRULES_RULES_HPP
#define SIGRULES_RULES_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sigrules/dataset.hpp"
#include "sigrules/fisher.hpp"
#include "sigrules/miner.hpp"

namespace sigrules {

/// A class association rule pattern => class with its test statistics.
struct TestedRule {
  std::uint32_t closed_rank = 0;  // position in MiningResult::closed
  std::uint32_t node = 0;         // index into MiningResult::nodes
  ClassId class_index = 0;
  std::uint32_t coverage = 0;  // supp(X)
  std::uint32_t support = 0;   // supp(X => c)
  double confidence = 0.0;     // support / coverage
  double p_value = 1.0;        // two-tailed Fisher exact
};

/// Builds the tested rules for every closed pattern. With two classes the two
/// directions are the same test, so one rule is emitted per pattern, reported
/// for the majority class in the pattern's records (ties: lower class index);
/// with m > 2 classes each pattern yields m rules. Rules with confidence
/// below min_conf are dropped before any correction.
std::vector<TestedRule> build_rules(const Dataset& dataset, const MiningResult& mining,
                                    BufferCache& cache, double min_conf = 0.0);

/// The class index whose count determines a rule's p-value lookup. With two
/// classes every rule is evaluated through class 0 (the two-tailed p-value is
/// identical for both directions, and all rules then share one buffer per
/// coverage); otherwise it is the rule's own class.
ClassId p_value_class(const Dataset& dataset, const TestedRule& rule);

/// Rule dump: pattern items (attribute=value, semicolon-joined), class,
/// coverage, support, confidence, p-value, sorted by ascending p-value.
/// P-values are printed with 6 significant digits.
void write_rules_tsv(std::ostream& out, const Dataset& dataset,
                     const MiningResult& mining, std::span<const TestedRule> rules);

}  // namespace sigrules

#endif  // SIGRULES_RULES_HPP
