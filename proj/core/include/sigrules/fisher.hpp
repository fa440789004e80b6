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

#ifndef SIGRULES_FISHER_HPP
#define SIGRULES_FISHER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace sigrules {

/// values()[i] = ln(i!), built incrementally in O(n). Immutable, shareable.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::size_t n);

  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t max_n() const { return values_.size() - 1; }

 private:
  std::vector<double> values_;
};

/// ln C(n, k) from a table covering at least n.
double log_binomial(const LogFactorialTable& table, std::size_t n, std::size_t k);

/// Hypergeometric pmf: probability that k of the sx covered records carry the
/// class when n_c of the n records do. k must lie in
/// [max(0, n_c+sx-n), min(n_c, sx)].
double hypergeom_pmf(std::size_t k, std::size_t n, std::size_t n_c,
                     std::size_t sx, const LogFactorialTable& table);

/// All two-tailed Fisher p-values a rule with coverage sx can take:
/// pvals[k - lower] is the p-value when the rule's support is k. Entries are
/// the total pmf of every outcome whose pmf does not exceed pmf(k).
struct PValueBuffer {
  std::uint32_t coverage = 0;     // sx
  std::uint32_t class_total = 0;  // n_c the buffer was built for
  std::uint32_t lower = 0;        // L = max(0, n_c + sx - n)
  std::uint32_t upper = 0;        // U = min(n_c, sx)
  std::vector<double> pvals;      // size upper - lower + 1

  double at(std::size_t supp) const { return pvals[supp - lower]; }
};

/// Two-ended sweep: walk from both ends of [L, U] toward the pmf mode,
/// accumulating pmf mass in ascending order. Outcomes whose pmfs are
/// analytically tied (log-space comparison, relative tolerance 1e-12) are
/// folded into one group and all receive the group's running total.
PValueBuffer build_pvalue_buffer(std::size_t n, std::size_t n_c, std::size_t sx,
                                 const LogFactorialTable& table);

struct BufferCacheConfig {
  bool use_static = true;
  bool use_dynamic = true;
  std::size_t static_budget_bytes = 16 * 1024 * 1024;
};

/// Cache of PValueBuffers for one dataset size n. Buffers for coverage in
/// [min_sup, max_sup] live in the static map and are never evicted; max_sup
/// is derived from the byte budget. Anything else goes through the
/// single-slot dynamic buffer, rebuilt whenever the queried (n_c, coverage)
/// changes. With both disabled every query builds a fresh buffer; all
/// configurations return bit-identical values.
///
/// Not thread-safe: use one cache per worker.
class BufferCache {
 public:
  /// `planned_class_counts` are the n_c values expected in queries; they only
  /// inform the byte-budget estimate for max_sup, not correctness.
  BufferCache(std::size_t n, std::size_t min_sup,
              std::vector<std::size_t> planned_class_counts,
              BufferCacheConfig config = {});

  /// Two-tailed Fisher exact p-value for a rule with support supp_r, coverage
  /// sx, class prevalence n_c. Throws std::out_of_range if supp_r is outside
  /// [L, U].
  double fisher_p(std::size_t supp_r, std::size_t sx, std::size_t n_c);

  std::size_t n() const { return n_; }
  std::size_t max_sup() const { return max_sup_; }
  const LogFactorialTable& log_factorials() const { return table_; }

 private:
  const PValueBuffer& buffer_for(std::size_t n_c, std::size_t sx);

  LogFactorialTable table_;
  std::size_t n_;
  std::size_t min_sup_;
  std::size_t max_sup_;
  BufferCacheConfig config_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, PValueBuffer> static_;
  std::optional<PValueBuffer> dynamic_;
  PValueBuffer scratch_;  // used when both cache levels are disabled
};

}  // namespace sigrules

#endif  // SIGRULES_FISHER_HPP
