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

#include "sigrules/miner.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sigrules {

TidKind choose_representation(std::size_t parent_support, std::size_t child_support) {
  // Keep the full list while it is at most half the parent's; past that the
  // difference list is the smaller one.
  return 2 * child_support <= parent_support ? TidKind::Full : TidKind::Diff;
}

namespace {

class Miner {
 public:
  Miner(const Dataset& dataset, std::size_t min_sup, const MinerOptions& options)
      : d_(dataset), min_sup_(min_sup), options_(options),
        n_classes_(dataset.class_count()), attr_in_pattern_(dataset.attribute_count(), false) {}

  MiningResult run() {
    MiningResult out;
    out.min_sup = static_cast<std::uint32_t>(min_sup_);
    result_ = &out;
    std::vector<Tid> all(d_.record_count());
    std::iota(all.begin(), all.end(), 0);
    pattern_.clear();
    extend(-1, all, 0);
    result_ = nullptr;
    return out;
  }

 private:
  // Tries every item with id >= first_item as a child of the node whose tid
  // list is parent_tids. Children are visited depth-first in ascending item
  // order, so each itemset is enumerated exactly once.
  void extend(std::int32_t parent_index, const std::vector<Tid>& parent_tids,
              ItemId first_item) {
    const std::size_t n_items = d_.item_count();
    std::vector<Tid> child_tids;
    std::vector<Tid> diff_tids;
    for (ItemId item = first_item; item < n_items; ++item) {
      const std::uint32_t attr = d_.items[item].attribute;
      if (attr_in_pattern_[attr]) continue;
      child_tids.clear();
      diff_tids.clear();
      for (Tid r : parent_tids) {
        if (d_.cell(r, attr) == item) {
          child_tids.push_back(r);
        } else {
          diff_tids.push_back(r);
        }
      }
      if (child_tids.size() < min_sup_) continue;

      pattern_.push_back(item);
      attr_in_pattern_[attr] = true;

      PatternNode node;
      node.items = pattern_;
      node.parent = parent_index;
      node.support = static_cast<std::uint32_t>(child_tids.size());
      node.kind = options_.use_diffsets
                      ? choose_representation(parent_tids.size(), child_tids.size())
                      : TidKind::Full;
      node.ids = node.kind == TidKind::Full ? child_tids : diff_tids;
      node.class_support.assign(n_classes_, 0);
      for (Tid r : child_tids) ++node.class_support[d_.labels[r]];
      node.closed = is_closed(child_tids);

      const auto index = static_cast<std::int32_t>(result_->nodes.size());
      if (node.closed) result_->closed.push_back(static_cast<std::uint32_t>(index));
      result_->nodes.push_back(std::move(node));

      extend(index, child_tids, item + 1);
      attr_in_pattern_[attr] = false;
      pattern_.pop_back();
    }
  }

  // A pattern is closed iff no attribute outside it takes a single value
  // across all supporting records (such a value would be an item contained
  // in every record, i.e. an equal-support super-pattern).
  bool is_closed(const std::vector<Tid>& tids) const {
    for (std::size_t a = 0; a < d_.attribute_count(); ++a) {
      if (attr_in_pattern_[a]) continue;
      const ItemId first = d_.cell(tids[0], a);
      bool constant = true;
      for (std::size_t i = 1; i < tids.size(); ++i) {
        if (d_.cell(tids[i], a) != first) {
          constant = false;
          break;
        }
      }
      if (constant) return false;
    }
    return true;
  }

  const Dataset& d_;
  std::size_t min_sup_;
  MinerOptions options_;
  std::size_t n_classes_;
  std::vector<bool> attr_in_pattern_;
  std::vector<ItemId> pattern_;
  MiningResult* result_ = nullptr;
};

}  // namespace

MiningResult mine_closed(const Dataset& dataset, std::size_t min_sup,
                         const MinerOptions& options) {
  if (min_sup < 1 || min_sup > dataset.record_count()) {
    throw std::invalid_argument("min_sup must be in [1, n], got " +
                                std::to_string(min_sup) + " with n=" +
                                std::to_string(dataset.record_count()));
  }
  return Miner(dataset, min_sup, options).run();
}

std::vector<Tid> reconstruct_tids(const MiningResult& mining, std::size_t node_index,
                                  const Dataset& dataset) {
  const PatternNode& node = mining.nodes[node_index];
  if (node.kind == TidKind::Full) return node.ids;
  std::vector<Tid> parent_tids;
  if (node.parent < 0) {
    parent_tids.resize(dataset.record_count());
    std::iota(parent_tids.begin(), parent_tids.end(), 0);
  } else {
    parent_tids = reconstruct_tids(mining, static_cast<std::size_t>(node.parent), dataset);
  }
  std::vector<Tid> tids;
  tids.reserve(parent_tids.size() - node.ids.size());
  std::set_difference(parent_tids.begin(), parent_tids.end(), node.ids.begin(),
                      node.ids.end(), std::back_inserter(tids));
  return tids;
}

std::vector<std::uint32_t> node_class_support(const PatternNode& node,
                                              std::span<const ClassId> labels,
                                              std::span<const std::uint32_t> parent_counts,
                                              std::size_t n_classes) {
  std::vector<std::uint32_t> counts(n_classes, 0);
  if (node.kind == TidKind::Full) {
    for (Tid r : node.ids) ++counts[labels[r]];
  } else {
    std::copy(parent_counts.begin(), parent_counts.end(), counts.begin());
    for (Tid r : node.ids) --counts[labels[r]];
  }
  return counts;
}

void class_supports_under_labels(const MiningResult& mining, const Dataset& dataset,
                                 std::span<const ClassId> labels,
                                 std::vector<std::uint32_t>& out) {
  const std::size_t n_classes = dataset.class_count();
  out.assign(mining.nodes.size() * n_classes, 0);
  std::vector<std::uint32_t> root(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    root[c] = static_cast<std::uint32_t>(dataset.class_counts[c]);
  }
  for (std::size_t i = 0; i < mining.nodes.size(); ++i) {
    const PatternNode& node = mining.nodes[i];
    std::uint32_t* counts = out.data() + i * n_classes;
    if (node.kind == TidKind::Full) {
      for (Tid r : node.ids) ++counts[labels[r]];
    } else {
      const std::uint32_t* parent =
          node.parent < 0 ? root.data()
                          : out.data() + static_cast<std::size_t>(node.parent) * n_classes;
      std::copy(parent, parent + n_classes, counts);
      for (Tid r : node.ids) --counts[labels[r]];
    }
    std::uint32_t total = 0;
    for (std::size_t c = 0; c < n_classes; ++c) total += counts[c];
    if (total != node.support) {
      throw std::logic_error("class supports do not sum to the pattern support");
    }
  }
}

std::vector<ItemId> closure_of_tids(const Dataset& dataset, std::span<const Tid> tids) {
  if (tids.empty()) throw std::invalid_argument("closure of an empty record set");
  std::vector<ItemId> closure;
  for (std::size_t a = 0; a < dataset.attribute_count(); ++a) {
    const ItemId first = dataset.cell(tids[0], a);
    bool constant = true;
    for (std::size_t i = 1; i < tids.size(); ++i) {
      if (dataset.cell(tids[i], a) != first) {
        constant = false;
        break;
      }
    }
    if (constant) closure.push_back(first);
  }
  return closure;
}

}  // namespace sigrules
