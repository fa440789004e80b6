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

#include "sigrules/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sigrules/rng.hpp"

namespace sigrules {

namespace {

std::size_t draw_in(SplitMix64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.bounded(hi - lo + 1));
}

// One planted rule before any records are touched: which cells it writes and
// which class it points at.
struct RulePlan {
  std::vector<std::uint32_t> attrs;   // ascending
  std::vector<std::uint32_t> values;  // value index per attr
  ClassId class_index = 0;
  std::size_t coverage = 0;           // records covered (per half when paired)
  double confidence = 0.0;            // drawn target
};

bool items_nested(const RulePlan& a, const RulePlan& b) {
  const auto contains = [](const RulePlan& outer, const RulePlan& inner) {
    for (std::size_t i = 0; i < inner.attrs.size(); ++i) {
      bool found = false;
      for (std::size_t j = 0; j < outer.attrs.size(); ++j) {
        if (outer.attrs[j] == inner.attrs[i]) {
          if (outer.values[j] != inner.values[i]) return false;
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  return contains(a, b) || contains(b, a);
}

class Generator {
 public:
  Generator(const SynthParams& params, std::uint64_t seed)
      : p_(params), rng_(seed) {}

  SynthResult run(bool split_pair) {
    validate(p_, split_pair);
    draw_cardinalities();
    draw_rule_plans(split_pair);

    const std::size_t half = p_.n_records / 2;
    SynthResult result;
    if (split_pair) {
      // Two independently filled halves sharing schema and rule plans; each
      // half realizes the (halved) coverage of every rule.
      Half first = build_half(half);
      Half second = build_half(p_.n_records - half);
      result.dataset = assemble({&first, &second});
      result.split_point = half;
      for (std::size_t j = 0; j < plans_.size(); ++j) {
        EmbeddedRule rule = make_truth(j);
        for (Tid t : first.covered[j]) rule.covered_tids.push_back(t);
        for (Tid t : second.covered[j]) rule.covered_tids.push_back(t + static_cast<Tid>(half));
        rule.coverage = static_cast<std::uint32_t>(rule.covered_tids.size());
        rule.confidence = rule.coverage == 0 ? 0.0
            : static_cast<double>(first.relabeled[j] + second.relabeled[j]) / rule.coverage;
        result.truth.push_back(std::move(rule));
      }
    } else {
      Half whole = build_half(p_.n_records);
      result.dataset = assemble({&whole});
      for (std::size_t j = 0; j < plans_.size(); ++j) {
        EmbeddedRule rule = make_truth(j);
        rule.covered_tids = whole.covered[j];
        rule.coverage = static_cast<std::uint32_t>(rule.covered_tids.size());
        rule.confidence = rule.coverage == 0 ? 0.0
            : static_cast<double>(whole.relabeled[j]) / rule.coverage;
        result.truth.push_back(std::move(rule));
      }
    }
    return result;
  }

 private:
  struct Half {
    std::vector<std::uint32_t> cells;  // value indices, rows x attrs
    std::vector<ClassId> labels;
    std::vector<std::vector<Tid>> covered;    // per rule, ascending local tids
    std::vector<std::size_t> relabeled;       // per rule, records set to the target class
  };

  void draw_cardinalities() {
    cards_.resize(p_.n_attributes);
    for (auto& v : cards_) v = draw_in(rng_, p_.min_values, p_.max_values);
  }

  void draw_rule_plans(bool split_pair) {
    plans_.clear();
    if (p_.n_rules == 0) return;
    std::vector<std::uint32_t> eligible;  // only multi-valued attributes can anchor a pattern
    for (std::uint32_t a = 0; a < cards_.size(); ++a) {
      if (cards_[a] >= 2) eligible.push_back(a);
    }
    const std::size_t cov_lo = split_pair ? (p_.min_coverage + 1) / 2 : p_.min_coverage;
    const std::size_t cov_hi = split_pair ? p_.max_coverage / 2 : p_.max_coverage;
    for (std::size_t j = 0; j < p_.n_rules; ++j) {
      RulePlan plan;
      for (int attempt = 0;; ++attempt) {
        if (attempt > 1000) {
          throw std::invalid_argument("synth: could not draw non-nested rule patterns");
        }
        const std::size_t length = draw_in(rng_, p_.min_length, p_.max_length);
        if (eligible.size() < length) {
          throw std::invalid_argument(
              "synth: only " + std::to_string(eligible.size()) +
              " attributes take >= 2 values, cannot embed a pattern of length " +
              std::to_string(length));
        }
        std::vector<std::uint32_t> pool = eligible;
        rng_.shuffle(pool);
        plan.attrs.assign(pool.begin(), pool.begin() + length);
        std::sort(plan.attrs.begin(), plan.attrs.end());
        plan.values.clear();
        for (std::uint32_t a : plan.attrs) {
          plan.values.push_back(static_cast<std::uint32_t>(rng_.bounded(cards_[a])));
        }
        // Nested patterns would make a covered record of one rule contain the
        // other unavoidably; redraw.
        bool nested = false;
        for (const RulePlan& other : plans_) {
          if (items_nested(plan, other)) {
            nested = true;
            break;
          }
        }
        if (!nested) break;
      }
      plan.class_index = static_cast<ClassId>(rng_.bounded(p_.n_classes));
      plan.coverage = draw_in(rng_, cov_lo, cov_hi);
      plan.confidence =
          p_.min_confidence + rng_.uniform01() * (p_.max_confidence - p_.min_confidence);
      plans_.push_back(std::move(plan));
    }
  }

  Half build_half(std::size_t n) {
    const std::size_t a_count = p_.n_attributes;
    Half half;
    half.cells.assign(n * a_count, 0);
    half.labels.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      half.labels[r] = static_cast<ClassId>(r % p_.n_classes);
    }
    std::vector<bool> written(n * a_count, false);
    std::vector<bool> covered_any(n, false);
    half.covered.resize(plans_.size());
    half.relabeled.assign(plans_.size(), 0);

    for (std::size_t j = 0; j < plans_.size(); ++j) {
      const RulePlan& plan = plans_[j];
      // Covered records: uniform without replacement among the still-free.
      std::vector<Tid> free_tids;
      for (Tid r = 0; r < n; ++r) {
        if (!covered_any[r]) free_tids.push_back(r);
      }
      if (free_tids.size() < plan.coverage) {
        throw std::invalid_argument("synth: not enough uncovered records for rule " +
                                    std::to_string(j));
      }
      for (std::size_t i = 0; i < plan.coverage; ++i) {
        const std::size_t pick = i + static_cast<std::size_t>(rng_.bounded(free_tids.size() - i));
        std::swap(free_tids[i], free_tids[pick]);
      }
      std::vector<Tid> covered(free_tids.begin(), free_tids.begin() + plan.coverage);
      std::sort(covered.begin(), covered.end());
      for (Tid r : covered) {
        covered_any[r] = true;
        for (std::size_t i = 0; i < plan.attrs.size(); ++i) {
          half.cells[r * a_count + plan.attrs[i]] = plan.values[i];
          written[r * a_count + plan.attrs[i]] = true;
        }
      }
      // Exactly round(confidence * coverage) covered records carry the target
      // class; the rest cycle through the other classes. Order is randomized
      // so the class does not correlate with record position.
      const auto n_target = static_cast<std::size_t>(
          std::llround(plan.confidence * static_cast<double>(plan.coverage)));
      std::vector<Tid> order = covered;
      rng_.shuffle(order);
      std::size_t other = 0;
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (i < n_target || p_.n_classes == 1) {
          half.labels[order[i]] = plan.class_index;
        } else {
          ClassId c = static_cast<ClassId>(other % (p_.n_classes - 1));
          if (c >= plan.class_index) ++c;
          half.labels[order[i]] = c;
          ++other;
        }
      }
      half.relabeled[j] = p_.n_classes == 1 ? plan.coverage : std::min(n_target, plan.coverage);
      half.covered[j] = std::move(covered);
    }

    for (std::size_t i = 0; i < half.cells.size(); ++i) {
      if (!written[i]) {
        half.cells[i] = static_cast<std::uint32_t>(rng_.bounded(cards_[i % a_count]));
      }
    }

    // A randomly filled record may complete an embedded pattern by accident,
    // which would silently inflate the rule's coverage past its ground truth.
    // Redraw an unlocked pattern cell until the record matches no rule it is
    // not covered by.
    if (!plans_.empty()) {
      for (Tid r = 0; r < n; ++r) {
        int guard = 0;
        for (;;) {
          std::size_t offending = plans_.size();
          for (std::size_t j = 0; j < plans_.size(); ++j) {
            if (matches(half, r, plans_[j]) &&
                !std::binary_search(half.covered[j].begin(), half.covered[j].end(), r)) {
              offending = j;
              break;
            }
          }
          if (offending == plans_.size()) break;
          if (++guard > 10000) {
            throw std::logic_error("synth: accidental-match repair did not converge");
          }
          const RulePlan& plan = plans_[offending];
          std::vector<std::size_t> unlocked;
          for (std::size_t i = 0; i < plan.attrs.size(); ++i) {
            if (!written[r * a_count + plan.attrs[i]]) unlocked.push_back(i);
          }
          // Non-nested patterns guarantee an unlocked cell exists.
          const std::size_t i = unlocked[rng_.bounded(unlocked.size())];
          const std::uint32_t attr = plan.attrs[i];
          std::uint32_t v = static_cast<std::uint32_t>(rng_.bounded(cards_[attr] - 1));
          if (v >= half.cells[r * a_count + attr]) ++v;  // any value but the current one
          half.cells[r * a_count + attr] = v;
        }
      }
    }
    return half;
  }

  Dataset assemble(std::vector<const Half*> halves) const {
    Dataset d;
    d.schema.resize(p_.n_attributes);
    for (std::size_t a = 0; a < p_.n_attributes; ++a) {
      d.schema[a].name = "A" + std::to_string(a);
      for (std::size_t v = 0; v < cards_[a]; ++v) {
        d.schema[a].values.push_back("v" + std::to_string(v));
      }
    }
    for (std::size_t c = 0; c < p_.n_classes; ++c) {
      d.class_names.push_back("c" + std::to_string(c));
    }
    std::vector<ItemId> offsets(1, 0);
    for (std::size_t a = 0; a < p_.n_attributes; ++a) {
      offsets.push_back(offsets.back() + static_cast<ItemId>(cards_[a]));
    }
    for (const Half* half : halves) {
      for (std::size_t i = 0; i < half->cells.size(); ++i) {
        d.cells.push_back(offsets[i % p_.n_attributes] + half->cells[i]);
      }
      d.labels.insert(d.labels.end(), half->labels.begin(), half->labels.end());
    }
    d.finalize();
    return d;
  }

  EmbeddedRule make_truth(std::size_t j) const {
    const RulePlan& plan = plans_[j];
    EmbeddedRule rule;
    rule.class_index = plan.class_index;
    std::vector<ItemId> offsets(1, 0);
    for (std::size_t a = 0; a < p_.n_attributes; ++a) {
      offsets.push_back(offsets.back() + static_cast<ItemId>(cards_[a]));
    }
    for (std::size_t i = 0; i < plan.attrs.size(); ++i) {
      rule.pattern.push_back(offsets[plan.attrs[i]] + plan.values[i]);
    }
    return rule;
  }

  bool matches(const Half& half, Tid r, const RulePlan& plan) const {
    for (std::size_t i = 0; i < plan.attrs.size(); ++i) {
      if (half.cells[r * p_.n_attributes + plan.attrs[i]] != plan.values[i]) return false;
    }
    return true;
  }

  SynthParams p_;
  SplitMix64 rng_;
  std::vector<std::size_t> cards_;
  std::vector<RulePlan> plans_;
};

}  // namespace

void validate(const SynthParams& p, bool split_pair) {
  if (p.n_records < 1) throw std::invalid_argument("synth: n_records must be >= 1");
  if (p.n_attributes < 1) throw std::invalid_argument("synth: n_attributes must be >= 1");
  if (p.n_classes < 1) throw std::invalid_argument("synth: n_classes must be >= 1");
  if (p.min_values < 1 || p.min_values > p.max_values) {
    throw std::invalid_argument("synth: invalid attribute cardinality bounds");
  }
  if (p.n_rules > 0) {
    if (p.min_length < 1 || p.min_length > p.max_length) {
      throw std::invalid_argument("synth: invalid pattern length bounds");
    }
    if (p.max_length > p.n_attributes) {
      throw std::invalid_argument("synth: max pattern length exceeds attribute count");
    }
    if (p.min_coverage < 1 || p.min_coverage > p.max_coverage) {
      throw std::invalid_argument("synth: invalid coverage bounds");
    }
    if (p.max_coverage > p.n_records) {
      throw std::invalid_argument("synth: max coverage exceeds record count");
    }
    if (p.min_confidence < 0.0 || p.min_confidence > p.max_confidence ||
        p.max_confidence > 1.0) {
      throw std::invalid_argument("synth: invalid confidence bounds");
    }
    // Covered record sets are disjoint, so the worst case must fit.
    if (p.n_rules * p.max_coverage > p.n_records) {
      throw std::invalid_argument("synth: n_rules * max_coverage exceeds n_records");
    }
  }
  if (split_pair) {
    if (p.n_records % 2 != 0) {
      throw std::invalid_argument("synth: split pair needs an even record count");
    }
    if (p.n_rules > 0) {
      const std::size_t lo = (p.min_coverage + 1) / 2;
      const std::size_t hi = p.max_coverage / 2;
      if (lo < 1 || lo > hi) {
        throw std::invalid_argument("synth: halved coverage bounds are empty");
      }
      if (p.n_rules * hi > p.n_records / 2) {
        throw std::invalid_argument("synth: halved coverage does not fit in a half");
      }
    }
  }
}

SynthResult generate(const SynthParams& params, std::uint64_t seed) {
  return Generator(params, seed).run(false);
}

SynthResult generate_split_pair(const SynthParams& params, std::uint64_t seed) {
  return Generator(params, seed).run(true);
}

}  // namespace sigrules
