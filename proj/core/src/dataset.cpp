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

#include "sigrules/dataset.hpp"

#include <stdexcept>

namespace sigrules {

std::string Dataset::item_label(ItemId id) const {
  const ItemInfo& info = items[id];
  return schema[info.attribute].name + "=" + schema[info.attribute].values[info.value];
}

bool Dataset::record_contains(Tid r, std::span<const ItemId> pattern) const {
  for (ItemId id : pattern) {
    if (cell(r, items[id].attribute) != id) return false;
  }
  return true;
}

std::vector<Tid> Dataset::pattern_tids(std::span<const ItemId> pattern) const {
  std::vector<Tid> tids;
  const std::size_t n = record_count();
  for (Tid r = 0; r < n; ++r) {
    if (record_contains(r, pattern)) tids.push_back(r);
  }
  return tids;
}

Dataset Dataset::subset(std::span<const Tid> ids) const {
  Dataset out;
  out.schema = schema;
  out.class_names = class_names;
  out.items = items;
  out.attr_offsets = attr_offsets;
  const std::size_t a = attribute_count();
  out.cells.reserve(ids.size() * a);
  out.labels.reserve(ids.size());
  out.class_counts.assign(class_names.size(), 0);
  for (Tid r : ids) {
    if (r >= record_count()) throw std::invalid_argument("subset: record id out of range");
    auto row = record(r);
    out.cells.insert(out.cells.end(), row.begin(), row.end());
    out.labels.push_back(labels[r]);
    ++out.class_counts[labels[r]];
  }
  return out;
}

void Dataset::finalize() {
  attr_offsets.assign(1, 0);
  items.clear();
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const auto& values = schema[a].values;
    if (values.empty()) throw std::invalid_argument("attribute with no values: " + schema[a].name);
    for (std::size_t v = 0; v < values.size(); ++v) {
      items.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(v)});
    }
    attr_offsets.push_back(static_cast<ItemId>(items.size()));
  }
  if (cells.size() != labels.size() * schema.size()) {
    throw std::invalid_argument("cell matrix does not match record count");
  }
  class_counts.assign(class_names.size(), 0);
  for (ClassId c : labels) {
    if (c >= class_names.size()) throw std::invalid_argument("label index out of range");
    ++class_counts[c];
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t a = i % schema.size();
    const ItemId id = cells[i];
    if (id < attr_offsets[a] || id >= attr_offsets[a + 1]) {
      throw std::invalid_argument("cell holds an item of the wrong attribute");
    }
  }
}

std::vector<std::size_t> class_distribution(const Dataset& dataset) {
  std::vector<std::size_t> counts(dataset.class_count(), 0);
  for (ClassId c : dataset.labels) ++counts[c];
  return counts;
}

}  // namespace sigrules
