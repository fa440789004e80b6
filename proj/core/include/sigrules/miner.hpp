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

#ifndef SIGRULES_MINER_HPP
#define SIGRULES_MINER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sigrules/dataset.hpp"

namespace sigrules {

enum class TidKind : std::uint8_t {
  Full,  // ids are exactly the records containing the pattern
  Diff   // ids are the parent's records that do NOT contain the pattern
};

/// One node of the set-enumeration tree: a frequent pattern, its record-id
/// representation, and its per-class supports on the original labels.
/// parent == -1 means the parent is the empty pattern (all records).
struct PatternNode {
  std::vector<ItemId> items;  // strictly ascending
  std::int32_t parent = -1;
  TidKind kind = TidKind::Full;
  std::vector<Tid> ids;  // ascending; full tid list or diff vs parent
  std::uint32_t support = 0;
  bool closed = false;
  std::vector<std::uint32_t> class_support;
};

/// Depth-first enumeration of all frequent patterns, parents before children,
/// with the closed ones flagged. `closed` lists node indices in emission
/// (pre-order) order; those are the rule candidates.
struct MiningResult {
  std::vector<PatternNode> nodes;
  std::vector<std::uint32_t> closed;
  std::uint32_t min_sup = 1;
};

struct MinerOptions {
  /// When false, every node stores its full tid list regardless of the
  /// parent/child support ratio (baseline configuration for benchmarks).
  bool use_diffsets = true;
};

/// Mines all closed frequent patterns with support >= min_sup. Children
/// extend their parent by items of ascending id; a pattern is closed iff no
/// attribute outside it is constant over its supporting records. Requires
/// 1 <= min_sup <= n.
MiningResult mine_closed(const Dataset& dataset, std::size_t min_sup,
                         const MinerOptions& options = {});

/// Full list when the child keeps at most half of the parent's records,
/// otherwise the (smaller) difference list.
TidKind choose_representation(std::size_t parent_support, std::size_t child_support);

/// Materializes a node's tid list, resolving Diff chains through its
/// ancestors. Ascending order.
std::vector<Tid> reconstruct_tids(const MiningResult& mining,
                                  std::size_t node_index, const Dataset& dataset);

/// Per-class supports of one node under an arbitrary label assignment.
/// For a Diff node the caller supplies the parent's counts under the same
/// labels (pass the dataset's class totals for parent == -1).
std::vector<std::uint32_t> node_class_support(
    const PatternNode& node, std::span<const ClassId> labels,
    std::span<const std::uint32_t> parent_counts, std::size_t n_classes);

/// Per-class supports of every node under `labels`, exploiting the fact that
/// parents precede children. `out` is resized to nodes x n_classes,
/// row-major. Throws std::logic_error if any node's counts fail to add up to
/// its support (a corrupted Diff chain).
void class_supports_under_labels(const MiningResult& mining, const Dataset& dataset,
                                 std::span<const ClassId> labels,
                                 std::vector<std::uint32_t>& out);

/// The unique closed pattern occurring in exactly the given records: one item
/// per attribute that is constant over `tids`. tids must be non-empty.
std::vector<ItemId> closure_of_tids(const Dataset& dataset, std::span<const Tid> tids);

}  // namespace sigrules

#endif  // SIGRULES_MINER_HPP
