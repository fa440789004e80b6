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

#ifndef SIGRULES_DATASET_HPP
#define SIGRULES_DATASET_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sigrules {

using ItemId = std::uint32_t;
using Tid = std::uint32_t;      // record id, 0-based position in the dataset
using ClassId = std::uint32_t;  // class index into Dataset::class_names

/// One categorical attribute: its name and the distinct values it takes,
/// in first-appearance order.
struct AttributeSchema {
  std::string name;
  std::vector<std::string> values;
};

/// Which attribute-value pair an item id stands for.
struct ItemInfo {
  std::uint32_t attribute = 0;
  std::uint32_t value = 0;
};

/// Categorical records with a class label column. Every record holds exactly
/// one item per attribute. Item ids are dense (0..K-1), assigned attribute by
/// attribute, so id = attr_offsets[a] + value_index. Immutable once built;
/// safe to share read-only across threads.
class Dataset {
 public:
  std::vector<AttributeSchema> schema;
  std::vector<std::string> class_names;
  std::vector<ItemId> cells;   // row-major, record_count() x attribute_count()
  std::vector<ClassId> labels;
  std::vector<std::size_t> class_counts;
  std::vector<ItemInfo> items;          // item id -> (attribute, value)
  std::vector<ItemId> attr_offsets;     // size attribute_count()+1

  std::size_t record_count() const { return labels.size(); }
  std::size_t attribute_count() const { return schema.size(); }
  std::size_t item_count() const { return items.size(); }
  std::size_t class_count() const { return class_names.size(); }

  ItemId cell(Tid r, std::size_t a) const {
    return cells[static_cast<std::size_t>(r) * schema.size() + a];
  }
  std::span<const ItemId> record(Tid r) const {
    return {cells.data() + static_cast<std::size_t>(r) * schema.size(),
            schema.size()};
  }

  ItemId item_id(std::size_t attribute, std::size_t value_index) const {
    return attr_offsets[attribute] + static_cast<ItemId>(value_index);
  }

  /// "attribute=value" rendering of an item, as used in the rule TSV dump.
  std::string item_label(ItemId id) const;

  /// True iff record r contains every item of `pattern` (items must belong
  /// to distinct attributes).
  bool record_contains(Tid r, std::span<const ItemId> pattern) const;

  /// All record ids containing `pattern`, ascending. Linear scan.
  std::vector<Tid> pattern_tids(std::span<const ItemId> pattern) const;

  /// Row subset with the same schema and item encoding. `ids` must be valid
  /// record ids; they are taken in the order given.
  Dataset subset(std::span<const Tid> ids) const;

  /// Recomputes attr_offsets/items/class_counts from schema+labels and checks
  /// the structural invariants. Throws std::invalid_argument on violation.
  void finalize();
};

/// Per-class record counts, recounted from the labels.
std::vector<std::size_t> class_distribution(const Dataset& dataset);

}  // namespace sigrules

#endif  // SIGRULES_DATASET_HPP
