#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pfnav/gridworld.hpp"
#include "pfnav/particle_filter.hpp"
#include "pfnav/rng.hpp"

namespace pfnav {

struct LearnConfig {
  double alpha = 0.001;
  double gamma = 0.999;
  double epsilon_start = 1.0;
  double epsilon_end = 1e-5;
  int episodes = 30000;
};

/// Action-value table over (cell_x, cell_y, action). Zero-initialized.
class QTable {
 public:
  QTable(int cells_x, int cells_y, int actions)
      : cells_x_(cells_x), cells_y_(cells_y), actions_(actions),
        values_(static_cast<std::size_t>(cells_x) * cells_y * actions, 0.0) {}

  double& at(const CellIndex& cell, int action) {
    return values_[index(cell, action)];
  }
  double at(const CellIndex& cell, int action) const {
    return values_[index(cell, action)];
  }

  double max_value(const CellIndex& cell) const {
    const std::size_t base = index(cell, 0);
    double best = values_[base];
    for (int a = 1; a < actions_; ++a) {
      best = std::max(best, values_[base + static_cast<std::size_t>(a)]);
    }
    return best;
  }

  /// Greedy action; ties break toward the lowest action index.
  int argmax(const CellIndex& cell) const {
    const std::size_t base = index(cell, 0);
    int best = 0;
    for (int a = 1; a < actions_; ++a) {
      if (values_[base + static_cast<std::size_t>(a)] > values_[base + static_cast<std::size_t>(best)]) {
        best = a;
      }
    }
    return best;
  }

  int actions() const { return actions_; }
  const std::vector<double>& raw() const { return values_; }

 private:
  std::size_t index(const CellIndex& cell, int action) const {
    return (static_cast<std::size_t>(cell.x) * cells_y_ + cell.y) * actions_ + action;
  }

  int cells_x_;
  int cells_y_;
  int actions_;
  std::vector<double> values_;
};

/// Epsilon-greedy selection over the cell's action row.
inline int select_action(const QTable& table, const CellIndex& cell, double epsilon,
                         Rng& rng) {
  if (epsilon > 0.0 && uniform_real(rng, 0.0, 1.0) < epsilon) {
    return uniform_index(rng, table.actions());
  }
  return table.argmax(cell);
}

/// One Bellman update. Terminal transitions use target = r with no
/// bootstrap term.
inline void td_update(QTable& table, const CellIndex& cell, int action, double reward,
                      const CellIndex& next_cell, bool terminal, const LearnConfig& cfg) {
  const double target =
      terminal ? reward : reward + cfg.gamma * table.max_value(next_cell);
  double& q = table.at(cell, action);
  q += cfg.alpha * (target - q);
}

/// Geometric decay hitting both endpoints exactly:
/// eps(i) = eps_start * (eps_end / eps_start)^(i / (episodes - 1)).
inline double epsilon_at(int episode, const LearnConfig& cfg) {
  if (cfg.episodes <= 1) return cfg.epsilon_start;
  const double frac = static_cast<double>(episode) / (cfg.episodes - 1);
  return cfg.epsilon_start * std::pow(cfg.epsilon_end / cfg.epsilon_start, frac);
}

struct EpisodeRecord {
  int episode = 0;
  double total_return = 0.0;
  bool success = false;
  int steps = 0;
  double epsilon = 0.0;
};

/// Fraction of successful episodes over the last `window` records.
inline double success_rate(std::span<const EpisodeRecord> records, std::size_t window) {
  if (records.empty()) {
    throw std::invalid_argument("success_rate: empty record list");
  }
  if (window > records.size()) {
    throw std::invalid_argument("success_rate: window exceeds record count");
  }
  std::size_t hits = 0;
  for (std::size_t i = records.size() - window; i < records.size(); ++i) {
    hits += records[i].success ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(window);
}

struct TrainResult {
  QTable table{kGridCells, kGridCells, 0};
  std::vector<EpisodeRecord> episodes;
};

/// Full training loop over the grid task. With `use_filter` the Q
/// indices come from the particle-filter estimate of the state; without
/// it they come from the raw noisy observation. Per-episode RNG streams
/// are derived from (seed, stream, episode) so runs are reproducible and
/// the two arms never share draws.
inline TrainResult train(const GridConfig& grid_cfg, const LearnConfig& learn_cfg,
                         bool use_filter, std::uint64_t seed) {
  const GridActionSet actions(grid_cfg.speeds);
  GridEnv env(grid_cfg);
  TrainResult result{QTable(kGridCells, kGridCells, actions.size()), {}};
  result.episodes.reserve(static_cast<std::size_t>(std::max(0, learn_cfg.episodes)));

  const auto model = [](const StateVec<2>& s, const GridAction& a) {
    return to_vec(grid_kinematics(to_grid_state(s), a));
  };

  for (int episode = 0; episode < learn_cfg.episodes; ++episode) {
    const auto ep = static_cast<std::uint64_t>(episode);
    Rng env_rng = make_rng({seed, stream::kEnvironment, ep});
    Rng agent_rng = make_rng({seed, stream::kAgent, ep});
    const double epsilon = epsilon_at(episode, learn_cfg);

    env.reset();
    BootstrapFilter<2> filter(static_cast<std::size_t>(grid_cfg.particles),
                              {grid_cfg.sigma_obs, grid_cfg.sigma_proc},
                              mix_seed({seed, stream::kFilter, ep}));
    if (use_filter) {
      filter.init_at(to_vec(kGridStart));
    }

    // The start state is known exactly; both arms begin there.
    GridState believed = kGridStart;
    double total_return = 0.0;
    EpisodeRecord record{episode, 0.0, false, 0, epsilon};

    while (true) {
      const CellIndex cell = discretize(believed);
      const int action_index = select_action(result.table, cell, epsilon, agent_rng);
      const GridAction action = actions.at(action_index);
      const StepOutcome out = env.step(action, env_rng);

      GridState next_believed;
      if (use_filter) {
        next_believed = to_grid_state(filter.step(action, model, to_vec(out.observation)));
      } else {
        next_believed = out.observation;
      }

      td_update(result.table, cell, action_index, out.reward, discretize(next_believed),
                out.terminal, learn_cfg);
      total_return += out.reward;
      believed = next_believed;
      ++record.steps;
      if (out.terminal) {
        record.success = out.reason == TerminationReason::final_target;
        break;
      }
    }
    record.total_return = total_return;
    result.episodes.push_back(record);
  }
  return result;
}

}  // namespace pfnav
