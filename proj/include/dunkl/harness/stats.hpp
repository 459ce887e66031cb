#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace dunkl::harness {

struct Extremes {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  bool all_finite = true;
  std::size_t count = 0;

  void add(double v) {
    if (!std::isfinite(v)) {
      all_finite = false;
      return;
    }
    min = std::min(min, v);
    max = std::max(max, v);
    ++count;
  }
  /// max - min for log-space values.
  double spread() const { return count ? max - min : 0.0; }
};

inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const std::size_t j = std::min(i + 1, v.size() - 1);
  return v[i] + (pos - i) * (v[j] - v[i]);
}

struct TrendResult {
  bool pass = true;
  /// Extremal value over the upper half of the top decile of the key.
  double tail = 0.0;
  /// Extremal value over every other row.
  double rest = 0.0;
  std::size_t tail_rows = 0;
};

/**
 * Doubling trend test on log-ratios. Rows are ordered by key; the top
 * decile is halved by key. Fails when the tail extreme beats the rest by
 * more than ln 2 (upper: larger, lower: smaller). Under 20 rows it passes.
 */
inline TrendResult trend_test(const std::vector<double>& key, const std::vector<double>& logv, bool upper) {
  TrendResult r;
  const std::size_t n = key.size();
  if (n < 20) return r;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  const std::size_t top = std::max<std::size_t>(2, n / 10);
  const std::size_t start = n - top / 2;
  const double inf = std::numeric_limits<double>::infinity();
  double tail = upper ? -inf : inf, rest = upper ? -inf : inf;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = logv[idx[i]];
    double& slot = i >= start ? tail : rest;
    slot = upper ? std::max(slot, v) : std::min(slot, v);
  }
  r.tail = tail;
  r.rest = rest;
  r.tail_rows = n - start;
  r.pass = upper ? tail <= rest + std::log(2.0) : tail >= rest - std::log(2.0);
  return r;
}

}  // namespace dunkl::harness
