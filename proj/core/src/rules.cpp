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

#include "sigrules/rules.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace sigrules {

ClassId p_value_class(const Dataset& dataset, const TestedRule& rule) {
  return dataset.class_count() == 2 ? 0 : rule.class_index;
}

std::vector<TestedRule> build_rules(const Dataset& dataset, const MiningResult& mining,
                                    BufferCache& cache, double min_conf) {
  const std::size_t n_classes = dataset.class_count();
  std::vector<TestedRule> rules;
  rules.reserve(mining.closed.size());
  for (std::uint32_t rank = 0; rank < mining.closed.size(); ++rank) {
    const std::uint32_t node_index = mining.closed[rank];
    const PatternNode& node = mining.nodes[node_index];
    const auto make_rule = [&](ClassId c) {
      TestedRule rule;
      rule.closed_rank = rank;
      rule.node = node_index;
      rule.class_index = c;
      rule.coverage = node.support;
      rule.support = node.class_support[c];
      rule.confidence = static_cast<double>(rule.support) / rule.coverage;
      const ClassId pc = n_classes == 2 ? 0 : c;
      rule.p_value = cache.fisher_p(node.class_support[pc], node.support,
                                    dataset.class_counts[pc]);
      return rule;
    };
    if (n_classes <= 2) {
      // The two directions of a 2-class rule are the same test; report the
      // majority class (ties toward the lower index).
      ClassId best = 0;
      for (ClassId c = 1; c < n_classes; ++c) {
        if (node.class_support[c] > node.class_support[best]) best = c;
      }
      TestedRule rule = make_rule(best);
      if (rule.confidence >= min_conf) rules.push_back(rule);
    } else {
      for (ClassId c = 0; c < n_classes; ++c) {
        TestedRule rule = make_rule(c);
        if (rule.confidence >= min_conf) rules.push_back(rule);
      }
    }
  }
  return rules;
}

void write_rules_tsv(std::ostream& out, const Dataset& dataset,
                     const MiningResult& mining, std::span<const TestedRule> rules) {
  std::vector<TestedRule> sorted(rules.begin(), rules.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const TestedRule& a, const TestedRule& b) {
    return a.p_value < b.p_value;
  });
  out << "pattern\tclass\tcoverage\tsupport\tconfidence\tp_value\n";
  for (const TestedRule& rule : sorted) {
    const PatternNode& node = mining.nodes[rule.node];
    for (std::size_t i = 0; i < node.items.size(); ++i) {
      if (i > 0) out << ';';
      out << dataset.item_label(node.items[i]);
    }
    std::ostringstream p;
    p.precision(6);
    p << rule.p_value;
    out << '\t' << dataset.class_names[rule.class_index] << '\t' << rule.coverage
        << '\t' << rule.support << '\t' << rule.confidence << '\t' << p.str() << '\n';
  }
}

}  // namespace sigrules
