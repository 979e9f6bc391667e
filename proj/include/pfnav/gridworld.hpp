#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pfnav/particle_filter.hpp"
#include "pfnav/rng.hpp"

namespace pfnav {

// Continuous [0,12]^2 navigation domain discretized into 51x51 cells.
inline constexpr double kGridExtent = 12.0;
inline constexpr int kGridCells = 51;
inline constexpr double kCellSpacing = kGridExtent / (kGridCells - 1);  // 0.24

struct GridState {
  double x = 0.0;
  double y = 0.0;
};

inline StateVec<2> to_vec(const GridState& s) { return {s.x, s.y}; }
inline GridState to_grid_state(const StateVec<2>& v) { return {v[0], v[1]}; }

inline double distance(const GridState& a, const GridState& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool in_bounds(const GridState& s) {
  return s.x >= 0.0 && s.x <= kGridExtent && s.y >= 0.0 && s.y <= kGridExtent;
}

/// Discrete (speed, heading) action. Heading is one of 8 multiples of 45
/// degrees; the speed levels come from configuration.
struct GridAction {
  double speed = 0.0;
  double heading_deg = 0.0;
  int index = 0;
};

/// Enumerates 8 headings x |speeds| actions. Index layout is
/// heading-major: index = heading_index * |speeds| + speed_index.
class GridActionSet {
 public:
  explicit GridActionSet(std::vector<double> speeds) : speeds_(std::move(speeds)) {
    if (speeds_.empty()) {
      throw std::invalid_argument("GridActionSet: need at least one speed level");
    }
  }

  int size() const { return 8 * static_cast<int>(speeds_.size()); }

  GridAction at(int index) const {
    const int per_heading = static_cast<int>(speeds_.size());
    const int heading_index = index / per_heading;
    const int speed_index = index % per_heading;
    return {speeds_[speed_index], 45.0 * heading_index, index};
  }

  const std::vector<double>& speeds() const { return speeds_; }

 private:
  std::vector<double> speeds_;
};

struct CellIndex {
  int x = 0;
  int y = 0;
  bool operator==(const CellIndex&) const = default;
};

/// Nearest of the 51 uniformly spaced points per axis; out-of-range
/// inputs clamp to the boundary cell.
inline CellIndex discretize(const GridState& s) {
  auto snap = [](double v) {
    int c = static_cast<int>(std::lround(v / kCellSpacing));
    if (c < 0) c = 0;
    if (c >= kGridCells) c = kGridCells - 1;
    return c;
  };
  return {snap(s.x), snap(s.y)};
}

inline GridState cell_center(const CellIndex& c) {
  return {c.x * kCellSpacing, c.y * kCellSpacing};
}

/// Deterministic part of the dynamics: s + v (cos th, sin th).
inline GridState grid_kinematics(const GridState& s, const GridAction& a) {
  const double rad = a.heading_deg * std::numbers::pi / 180.0;
  return {s.x + a.speed * std::cos(rad), s.y + a.speed * std::sin(rad)};
}

/// Additive observation model z = s + eta. Never clamped: observations
/// may fall outside the domain.
inline GridState observe(const GridState& s, double sigma_obs, Rng& rng) {
  return {gaussian(rng, s.x, sigma_obs), gaussian(rng, s.y, sigma_obs)};
}

/// Sequence of 0.8 x 0.8 box targets along a sinusoidal curve from
/// (4,4) to (11.4,11.4).
struct WavePath {
  std::vector<GridState> nodes;
  double node_half_extent = 0.4;

  const GridState& final_node() const { return nodes.back(); }
  int final_index() const { return static_cast<int>(nodes.size()) - 1; }

  bool in_node_box(int node_index, const GridState& s) const {
    const GridState& c = nodes[static_cast<std::size_t>(node_index)];
    return std::abs(s.x - c.x) <= node_half_extent &&
           std::abs(s.y - c.y) <= node_half_extent;
  }
};

/// Sinusoid along the diagonal segment with perpendicular amplitude and
/// an integer number of full periods, resampled at (approximately) equal
/// arc-length intervals via fine polyline integration.
inline WavePath generate_wave_path(double amplitude, double frequency, double spacing) {
  if (spacing <= 0.0) {
    throw std::invalid_argument("generate_wave_path: spacing must be > 0");
  }
  if (amplitude < 0.0) {
    throw std::invalid_argument("generate_wave_path: amplitude must be >= 0");
  }
  const GridState start{4.0, 4.0};
  const GridState end{11.4, 11.4};
  const double span_x = end.x - start.x;
  const double span_y = end.y - start.y;
  const double length = std::hypot(span_x, span_y);
  const double ux = span_x / length, uy = span_y / length;
  const double nx = -uy, ny = ux;  // left-hand perpendicular

  auto point_at = [&](double t) {
    const double wave = amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
    // Large amplitudes can push the extreme lobes marginally outside the
    // domain; node centers are clamped back in.
    return GridState{std::clamp(start.x + ux * (length * t) + nx * wave, 0.0, kGridExtent),
                     std::clamp(start.y + uy * (length * t) + ny * wave, 0.0, kGridExtent)};
  };

  // Cumulative arc length over a fine polyline.
  constexpr int kSamples = 20000;
  std::vector<double> arc(kSamples + 1, 0.0);
  GridState prev = point_at(0.0);
  for (int i = 1; i <= kSamples; ++i) {
    const GridState p = point_at(static_cast<double>(i) / kSamples);
    arc[i] = arc[i - 1] + distance(prev, p);
    prev = p;
  }
  const double total = arc.back();

  const int intervals = std::max<int>(1, static_cast<int>(std::llround(total / spacing)));
  WavePath path;
  path.nodes.reserve(intervals + 1);
  path.nodes.push_back(start);
  std::size_t hi = 0;
  for (int k = 1; k < intervals; ++k) {
    const double target = total * k / intervals;
    while (arc[hi] < target) ++hi;
    // Interpolate between polyline samples hi-1 and hi.
    const double seg = arc[hi] - arc[hi - 1];
    const double frac = seg > 0.0 ? (target - arc[hi - 1]) / seg : 0.0;
    const double t = (static_cast<double>(hi) - 1.0 + frac) / kSamples;
    path.nodes.push_back(point_at(t));
  }
  path.nodes.push_back(end);
  return path;
}

struct GridRewardSpec {
  double boundary_penalty = -50000.0;
  double final_reward = 8000.0;
  double guide_scale = 100.0;  // node-hit reward guide_scale / (d_next + eps)
  double idle_kappa = 1.0;     // idle penalty -kappa * distance to final target
};

inline constexpr double kGuideEpsilon = 0.1;
inline constexpr int kIdleWindow = 3;  // steps without a target hit before penalties
inline constexpr GridState kGridStart{2.8, 2.8};

struct GridConfig {
  double sigma_obs = 0.20;
  double sigma_proc = 0.07;
  int episodes = 30000;
  int max_steps = 100;
  double path_amplitude = 1.0;  // half of the 2.0 peak-to-peak wave height
  double path_frequency = 2.0;
  double path_spacing = 1.1;
  GridRewardSpec reward;
  std::vector<double> speeds = {0.4, 0.9, 1.4};
  int particles = 500;
};

enum class TerminationReason : std::uint8_t { none, boundary, final_target, step_limit };

struct StepOutcome {
  GridState next_state;
  GridState observation;
  double reward = 0.0;
  bool terminal = false;
  TerminationReason reason = TerminationReason::none;
  bool node_hit = false;
};

/// Episode state machine for the wave-following task. Holds the target
/// path, the true (hidden) state, and the per-episode counters behind
/// the reward shaping. One instance per rollout; not thread-shared.
class GridEnv {
 public:
  explicit GridEnv(const GridConfig& config)
      : config_(config),
        path_(generate_wave_path(config.path_amplitude, config.path_frequency,
                                 config.path_spacing)) {
    reset();
  }

  void reset() {
    state_ = kGridStart;
    steps_taken_ = 0;
    next_node_ = 0;
    steps_since_hit_ = 0;
  }

  /// True dynamics, reward shaping, and noisy observation emission for
  /// one transition. The out-of-bounds state after a boundary exit is
  /// recorded in the outcome but the episode is over.
  StepOutcome step(const GridAction& action, Rng& rng) {
    GridState next = grid_kinematics(state_, action);
    next.x = gaussian(rng, next.x, config_.sigma_proc);
    next.y = gaussian(rng, next.y, config_.sigma_proc);
    ++steps_taken_;

    StepOutcome out;
    out.next_state = next;
    if (!in_bounds(next)) {
      out.reward = config_.reward.boundary_penalty;
      out.reason = TerminationReason::boundary;
    } else if (next_node_ == path_.final_index() && path_.in_node_box(next_node_, next)) {
      // The final target counts only after the intermediate sequence.
      out.reward = config_.reward.final_reward;
      out.reason = TerminationReason::final_target;
    } else if (next_node_ < path_.final_index() && path_.in_node_box(next_node_, next)) {
      out.node_hit = true;
      ++next_node_;
      steps_since_hit_ = 0;
      const double d_next = distance(next, path_.nodes[static_cast<std::size_t>(next_node_)]);
      out.reward = config_.reward.guide_scale / (d_next + kGuideEpsilon);
    } else {
      ++steps_since_hit_;
      if (steps_since_hit_ >= kIdleWindow) {
        out.reward = -config_.reward.idle_kappa * distance(next, path_.final_node());
      }
    }
    if (out.reason == TerminationReason::none && steps_taken_ >= config_.max_steps) {
      out.reason = TerminationReason::step_limit;
    }
    out.terminal = out.reason != TerminationReason::none;
    out.observation = observe(next, config_.sigma_obs, rng);
    state_ = next;
    return out;
  }

  void set_state(const GridState& s) { state_ = s; }
  void set_progress(int next_node) { next_node_ = next_node; }

  const GridState& state() const { return state_; }
  const WavePath& path() const { return path_; }
  const GridConfig& config() const { return config_; }
  int next_node() const { return next_node_; }
  int steps_taken() const { return steps_taken_; }

 private:
  GridConfig config_;
  WavePath path_;
  GridState state_;
  int steps_taken_ = 0;
  int next_node_ = 0;
  int steps_since_hit_ = 0;
};

}  // namespace pfnav
