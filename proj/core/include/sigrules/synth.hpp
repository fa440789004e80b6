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

#ifndef SIGRULES_SYNTH_HPP
#define SIGRULES_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "sigrules/dataset.hpp"

namespace sigrules {

/// Synthetic generator parameters. Bounds are inclusive; a fixed value is
/// expressed as min == max.
struct SynthParams {
  std::size_t n_records = 0;     // N
  std::size_t n_classes = 2;     // #C
  std::size_t n_attributes = 0;  // A
  std::size_t min_values = 2;    // per-attribute cardinality bounds
  std::size_t max_values = 8;
  std::size_t n_rules = 0;       // rules embedded
  std::size_t min_length = 2;    // embedded pattern length bounds
  std::size_t max_length = 16;
  std::size_t min_coverage = 0;  // embedded rule coverage bounds
  std::size_t max_coverage = 0;
  double min_confidence = 0.6;   // embedded rule confidence bounds
  double max_confidence = 0.6;
};

/// Ground truth for one planted rule. covered_tids is the exact set of
/// records containing the pattern in the final dataset (the generator redraws
/// cells of any other record that would match by accident), so the realized
/// coverage and confidence below are what a re-scan measures.
struct EmbeddedRule {
  std::vector<ItemId> pattern;  // ascending item ids, one per attribute
  ClassId class_index = 0;
  std::vector<Tid> covered_tids;  // ascending
  std::uint32_t coverage = 0;
  double confidence = 0.0;  // fraction of covered records labeled class_index
};

struct SynthResult {
  Dataset dataset;
  std::vector<EmbeddedRule> truth;
  /// Boundary of the two concatenated halves (generate_split_pair only, else 0).
  std::size_t split_point = 0;
};

/// Validates parameter feasibility (throws std::invalid_argument). Embedded
/// rules get disjoint covered record sets, so n_rules * max_coverage must fit
/// in n_records; with split_pair the halved bounds must be non-empty too.
void validate(const SynthParams& params, bool split_pair);

/// Draws the class labels evenly, embeds each rule (pattern attributes and
/// values at random, coverage and confidence uniform within bounds, exactly
/// round(conf * coverage) covered records relabeled to the target class, the
/// rest cycling through the other classes), fills every unwritten cell
/// uniformly, and finally breaks any accidental full-pattern match outside
/// the covered sets. Deterministic for a fixed seed.
SynthResult generate(const SynthParams& params, std::uint64_t seed);

/// Generates two halves of n_records/2 records sharing the same schema and
/// embedded patterns, each with half the rule coverage, then concatenates
/// them. The concatenated rules have coverage in [min_coverage, max_coverage]
/// and the half boundary is a fair holdout split point.
SynthResult generate_split_pair(const SynthParams& params, std::uint64_t seed);

}  // namespace sigrules

#endif  // SIGRULES_SYNTH_HPP
