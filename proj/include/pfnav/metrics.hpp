#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfnav {

using MetricsSeries = std::vector<double>;

/// Sliding-window mean with an expanding start: element k averages
/// entries [max(0, k - window + 1), k].
inline MetricsSeries sliding_window_avg(std::span<const double> series,
                                        std::size_t window = 50) {
  if (series.empty()) {
    throw std::invalid_argument("sliding_window_avg: empty series");
  }
  if (window < 1) {
    throw std::invalid_argument("sliding_window_avg: window must be >= 1");
  }
  MetricsSeries out;
  out.reserve(series.size());
  double running = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    running += series[k];
    if (k >= window) {
      running -= series[k - window];
    }
    const std::size_t count = std::min(k + 1, window);
    out.push_back(running / static_cast<double>(count));
  }
  return out;
}

/// Population statistics of one training phase. The coefficient of
/// variation is NaN when the mean is zero.
struct PhaseStats {
  std::string label;
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double cv = 0.0;
};

inline PhaseStats phase_stats(std::span<const double> series, std::size_t begin,
                              std::size_t end, std::string label) {
  if (begin >= end || end > series.size()) {
    throw std::invalid_argument("phase_stats: range [" + std::to_string(begin) + ", " +
                                std::to_string(end) + ") out of bounds");
  }
  PhaseStats stats;
  stats.label = std::move(label);
  stats.count = end - begin;
  for (std::size_t i = begin; i < end; ++i) stats.mean += series[i];
  stats.mean /= static_cast<double>(stats.count);
  for (std::size_t i = begin; i < end; ++i) {
    const double d = series[i] - stats.mean;
    stats.variance += d * d;
  }
  stats.variance /= static_cast<double>(stats.count);
  stats.cv = stats.mean != 0.0 ? std::sqrt(stats.variance) / stats.mean
                               : std::numeric_limits<double>::quiet_NaN();
  return stats;
}

}  // namespace pfnav
