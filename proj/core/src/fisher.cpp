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

#include "sigrules/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sigrules {

namespace {

// Relative tolerance for deciding that two log-pmf values are the same
// analytic quantity. Tied outcomes must land in the same "equally extreme"
// group or the two-tailed sum comes out wrong on symmetric instances.
constexpr double kLogTieRelTol = 1e-12;

bool log_tied(double a, double b) {
  return std::abs(a - b) <= kLogTieRelTol * std::max(std::abs(a), std::abs(b));
}

void check_bounds(std::size_t k, std::size_t n, std::size_t n_c, std::size_t sx) {
  const std::size_t lower = n_c + sx > n ? n_c + sx - n : 0;
  const std::size_t upper = std::min(n_c, sx);
  if (k < lower || k > upper) {
    throw std::out_of_range("support " + std::to_string(k) + " outside [" +
                            std::to_string(lower) + ", " + std::to_string(upper) +
                            "] for n=" + std::to_string(n) +
                            " n_c=" + std::to_string(n_c) +
                            " coverage=" + std::to_string(sx));
  }
}

}  // namespace

LogFactorialTable::LogFactorialTable(std::size_t n) {
  values_.resize(n + 1);
  values_[0] = 0.0;
  // Accumulate in extended precision so the stored doubles stay within a few
  // ulp of ln(i!) even for large n.
  long double sum = 0.0L;
  for (std::size_t i = 1; i <= n; ++i) {
    sum += std::log(static_cast<long double>(i));
    values_[i] = static_cast<double>(sum);
  }
}

double log_binomial(const LogFactorialTable& table, std::size_t n, std::size_t k) {
  return table[n] - table[k] - table[n - k];
}

double hypergeom_pmf(std::size_t k, std::size_t n, std::size_t n_c, std::size_t sx,
                     const LogFactorialTable& table) {
  check_bounds(k, n, n_c, sx);
  const double logp = log_binomial(table, n_c, k) +
                      log_binomial(table, n - n_c, sx - k) -
                      log_binomial(table, n, sx);
  return std::exp(logp);
}

PValueBuffer build_pvalue_buffer(std::size_t n, std::size_t n_c, std::size_t sx,
                                 const LogFactorialTable& table) {
  if (sx < 1 || sx > n || n_c > n) {
    throw std::invalid_argument("build_pvalue_buffer: invalid bounds (n=" +
                                std::to_string(n) + " n_c=" + std::to_string(n_c) +
                                " coverage=" + std::to_string(sx) + ")");
  }
  PValueBuffer buf;
  buf.coverage = static_cast<std::uint32_t>(sx);
  buf.class_total = static_cast<std::uint32_t>(n_c);
  buf.lower = static_cast<std::uint32_t>(n_c + sx > n ? n_c + sx - n : 0);
  buf.upper = static_cast<std::uint32_t>(std::min(n_c, sx));
  const std::size_t width = buf.upper - buf.lower + 1;

  const double log_denom = log_binomial(table, n, sx);
  std::vector<double> logpmf(width);
  std::vector<double> pmf(width);
  for (std::size_t i = 0; i < width; ++i) {
    const std::size_t k = buf.lower + i;
    logpmf[i] = log_binomial(table, n_c, k) +
                log_binomial(table, n - n_c, sx - k) - log_denom;
    pmf[i] = std::exp(logpmf[i]);
  }

  // Two pointers walk inward from both ends; the pmf is smallest at the ends
  // and grows toward the mode, so this visits outcomes in ascending pmf
  // order. All outcomes tied with the current smallest are absorbed into one
  // group (lower end first) and share the group's cumulative total.
  buf.pvals.resize(width);
  std::size_t lo = 0;
  std::size_t hi = width - 1;
  double total = 0.0;
  while (lo <= hi && hi < width) {
    std::size_t first;  // group leader: the end with the smaller pmf
    if (lo == hi || logpmf[lo] <= logpmf[hi] || log_tied(logpmf[lo], logpmf[hi])) {
      first = lo++;
    } else {
      first = hi--;
    }
    std::vector<std::size_t> group{first};
    while (lo <= hi && hi < width) {
      if (log_tied(logpmf[lo], logpmf[first])) {
        group.push_back(lo++);
      } else if (log_tied(logpmf[hi], logpmf[first])) {
        group.push_back(hi--);
      } else {
        break;
      }
    }
    for (std::size_t idx : group) total += pmf[idx];
    for (std::size_t idx : group) buf.pvals[idx] = total;
  }
  return buf;
}

BufferCache::BufferCache(std::size_t n, std::size_t min_sup,
                         std::vector<std::size_t> planned_class_counts,
                         BufferCacheConfig config)
    : table_(n), n_(n), min_sup_(std::max<std::size_t>(1, min_sup)),
      max_sup_(0), config_(config) {
  if (planned_class_counts.empty()) planned_class_counts.push_back(n / 2);
  // Stretch max_sup until the static buffers for [min_sup, max_sup] would
  // exceed the byte budget.
  std::size_t bytes = 0;
  for (std::size_t sx = min_sup_; sx <= n_; ++sx) {
    std::size_t cost = 0;
    for (std::size_t n_c : planned_class_counts) {
      const std::size_t lower = n_c + sx > n_ ? n_c + sx - n_ : 0;
      const std::size_t upper = std::min(n_c, sx);
      cost += (upper - lower + 1) * sizeof(double);
    }
    if (bytes + cost > config_.static_budget_bytes) break;
    bytes += cost;
    max_sup_ = sx;
  }
}

const PValueBuffer& BufferCache::buffer_for(std::size_t n_c, std::size_t sx) {
  const auto key = std::make_pair(static_cast<std::uint32_t>(n_c),
                                  static_cast<std::uint32_t>(sx));
  if (config_.use_static && sx >= min_sup_ && sx <= max_sup_) {
    auto it = static_.find(key);
    if (it == static_.end()) {
      it = static_.emplace(key, build_pvalue_buffer(n_, n_c, sx, table_)).first;
    }
    return it->second;
  }
  if (config_.use_dynamic) {
    if (!dynamic_ || dynamic_->coverage != key.second || dynamic_->class_total != key.first) {
      dynamic_ = build_pvalue_buffer(n_, n_c, sx, table_);
    }
    return *dynamic_;
  }
  scratch_ = build_pvalue_buffer(n_, n_c, sx, table_);
  return scratch_;
}

double BufferCache::fisher_p(std::size_t supp_r, std::size_t sx, std::size_t n_c) {
  check_bounds(supp_r, n_, n_c, sx);
  return buffer_for(n_c, sx).at(supp_r);
}

}  // namespace sigrules
