#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "pfnav/gridworld.hpp"

using namespace pfnav;

namespace {

// Independent arc-length oracle: sample the analytic sinusoid densely and
// locate each node's parameter by nearest dense sample.
struct DensePath {
  std::vector<GridState> points;
  std::vector<double> arc;

  DensePath(double amplitude, double frequency, int samples = 200000) {
    const GridState start{4.0, 4.0}, end{11.4, 11.4};
    const double len = std::hypot(end.x - start.x, end.y - start.y);
    const double ux = (end.x - start.x) / len, uy = (end.y - start.y) / len;
    points.reserve(samples + 1);
    arc.assign(samples + 1, 0.0);
    for (int i = 0; i <= samples; ++i) {
      const double t = static_cast<double>(i) / samples;
      const double w = amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
      points.push_back({start.x + ux * len * t - uy * w, start.y + uy * len * t + ux * w});
      if (i > 0) arc[i] = arc[i - 1] + distance(points[i - 1], points[i]);
    }
  }

  std::size_t nearest_index(const GridState& p) const {
    std::size_t best = 0;
    double best_d = distance(points[0], p);
    for (std::size_t i = 1; i < points.size(); ++i) {
      const double d = distance(points[i], p);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }
};

GridConfig noiseless_config() {
  GridConfig cfg;
  cfg.sigma_obs = 0.0;
  cfg.sigma_proc = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("wave path endpoints and spacing") {
  const WavePath path = generate_wave_path(2.0, 2.0, 1.1);
  REQUIRE(path.nodes.size() >= 3);
  CHECK(path.nodes.front().x == Catch::Approx(4.0));
  CHECK(path.nodes.front().y == Catch::Approx(4.0));
  CHECK(path.nodes.back().x == Catch::Approx(11.4));
  CHECK(path.nodes.back().y == Catch::Approx(11.4));

  const DensePath oracle(2.0, 2.0);
  std::size_t prev_index = 0;
  for (std::size_t k = 1; k < path.nodes.size(); ++k) {
    const std::size_t a = oracle.nearest_index(path.nodes[k - 1]);
    const std::size_t b = oracle.nearest_index(path.nodes[k]);
    CHECK(b > a);  // monotone along-curve ordering
    const double along = oracle.arc[b] - oracle.arc[a];
    CHECK(along > 1.0);
    CHECK(along < 1.2);
    prev_index = b;
  }
  (void)prev_index;

  for (const auto& node : path.nodes) {
    CHECK(in_bounds(node));
  }
}

TEST_CASE("zero-amplitude wave path degenerates to the diagonal") {
  const WavePath path = generate_wave_path(0.0, 2.0, 1.1);
  double gap0 = distance(path.nodes[0], path.nodes[1]);
  for (std::size_t k = 1; k < path.nodes.size(); ++k) {
    const auto& node = path.nodes[k];
    CHECK(std::abs(node.x - node.y) < 1e-9);  // on the diagonal
    const double gap = distance(path.nodes[k - 1], node);
    CHECK(gap == Catch::Approx(gap0).margin(1e-6));
    CHECK(gap > 1.0);
    CHECK(gap < 1.2);
  }
}

TEST_CASE("deterministic kinematics") {
  GridEnv env(noiseless_config());
  Rng rng(1);
  env.set_state({2.8, 2.8});
  const StepOutcome out = env.step({1.0, 0.0, 0}, rng);
  CHECK(out.next_state.x == Catch::Approx(3.8));
  CHECK(out.next_state.y == Catch::Approx(2.8));
  CHECK_FALSE(out.terminal);
  CHECK(out.observation.x == out.next_state.x);  // sigma_obs = 0
}

TEST_CASE("kinematic step norm equals the speed") {
  GridEnv env(noiseless_config());
  Rng rng(2);
  const GridActionSet actions({0.4, 0.9, 1.4});
  for (int trial = 0; trial < 200; ++trial) {
    env.reset();
    env.set_state({6.0, 6.0});
    const GridAction a = actions.at(uniform_index(rng, actions.size()));
    const GridState before = env.state();
    const StepOutcome out = env.step(a, rng);
    CHECK(distance(before, out.next_state) == Catch::Approx(a.speed));
  }
}

TEST_CASE("boundary exit terminates with the big penalty") {
  GridEnv env(noiseless_config());
  Rng rng(3);
  env.set_state({11.9, 6.0});
  const StepOutcome out = env.step({1.4, 0.0, 0}, rng);
  CHECK(out.terminal);
  CHECK(out.reason == TerminationReason::boundary);
  CHECK(out.reward == -50000.0);
}

TEST_CASE("reaching the final target box pays the terminal reward") {
  GridEnv env(noiseless_config());
  Rng rng(4);
  env.set_state({11.0, 11.4});
  env.set_progress(env.path().final_index());
  const StepOutcome out = env.step({0.4, 0.0, 0}, rng);
  CHECK(out.terminal);
  CHECK(out.reason == TerminationReason::final_target);
  CHECK(out.reward == 8000.0);
}

TEST_CASE("the final box is inert until the intermediate sequence is done") {
  GridEnv env(noiseless_config());
  Rng rng(4);
  env.set_state({11.0, 11.4});
  const StepOutcome out = env.step({0.4, 0.0, 0}, rng);
  CHECK_FALSE(out.terminal);
  CHECK(env.next_node() == 0);
}

TEST_CASE("node hit pays the distance-scaled guiding reward") {
  GridConfig cfg = noiseless_config();
  cfg.path_amplitude = 0.0;  // straight path keeps the geometry simple
  GridEnv env(cfg);
  Rng rng(5);

  const GridState node1 = env.path().nodes[1];
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const GridState landing{node1.x - 0.9 * inv_sqrt2, node1.y - 0.9 * inv_sqrt2};
  REQUIRE(env.path().in_node_box(0, landing));

  env.set_state({landing.x - 1.0, landing.y});
  const StepOutcome out = env.step({1.0, 0.0, 0}, rng);
  CHECK(out.node_hit);
  CHECK(out.reward == Catch::Approx(100.0).epsilon(1e-9));
  CHECK(env.next_node() == 1);
}

TEST_CASE("idle steps are penalized by distance to the final target") {
  GridEnv env(noiseless_config());
  Rng rng(6);
  env.set_state({1.0, 10.0});  // far from every node box

  const GridAction tiny{0.4, 90.0, 0};
  const StepOutcome s1 = env.step(tiny, rng);
  const StepOutcome s2 = env.step(tiny, rng);
  const StepOutcome s3 = env.step(tiny, rng);
  CHECK(s1.reward == 0.0);
  CHECK(s2.reward == 0.0);
  const double expected = -distance(s3.next_state, env.path().final_node());
  CHECK(s3.reward == Catch::Approx(expected));
}

TEST_CASE("episodes terminate within the step limit with exactly one reason") {
  GridConfig cfg;
  cfg.sigma_obs = 0.05;
  cfg.sigma_proc = 0.07;
  GridEnv env(cfg);
  const GridActionSet actions(cfg.speeds);
  Rng rng(7);
  for (int episode = 0; episode < 50; ++episode) {
    env.reset();
    int steps = 0;
    StepOutcome out;
    do {
      out = env.step(actions.at(uniform_index(rng, actions.size())), rng);
      ++steps;
      if (!out.terminal) CHECK(out.reason == TerminationReason::none);
    } while (!out.terminal && steps <= 200);
    CHECK(steps <= 100);
    CHECK(out.terminal);
    CHECK(out.reason != TerminationReason::none);
  }
}

TEST_CASE("noise-free trajectories are bit-reproducible") {
  GridConfig cfg = noiseless_config();
  const GridActionSet actions(cfg.speeds);
  std::vector<GridState> first, second;
  for (int pass = 0; pass < 2; ++pass) {
    GridEnv env(cfg);
    Rng rng(42);
    auto& sink = pass == 0 ? first : second;
    for (int t = 0; t < 40; ++t) {
      const StepOutcome out = env.step(actions.at(t % actions.size()), rng);
      sink.push_back(out.next_state);
      if (out.terminal) break;
    }
  }
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].x == second[i].x);
    CHECK(first[i].y == second[i].y);
  }
}

TEST_CASE("observation noise statistics and no clamping") {
  Rng rng(8);
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) {
    xs.push_back(observe({6.0, 6.0}, 0.05, rng).x - 6.0);
  }
  CHECK(std::sqrt(oracles::population_variance(xs)) == Catch::Approx(0.05).epsilon(0.05));

  bool exceeded = false;
  for (int i = 0; i < 1000 && !exceeded; ++i) {
    exceeded = observe({12.0, 12.0}, 0.1, rng).x > 12.0;
  }
  CHECK(exceeded);

  const GridState exact = observe({3.3, 4.4}, 0.0, rng);
  CHECK(exact.x == 3.3);
  CHECK(exact.y == 4.4);
}

TEST_CASE("discretize maps the domain onto the 51x51 lattice") {
  CHECK(discretize({0.0, 0.0}) == CellIndex{0, 0});
  CHECK(discretize({12.0, 12.0}) == CellIndex{50, 50});
  CHECK(discretize({6.0, 6.0}) == CellIndex{25, 25});
  CHECK(discretize({-0.5, 13.0}) == CellIndex{0, 50});  // clamped

  for (int cx = 0; cx < kGridCells; ++cx) {
    for (int cy = 0; cy < kGridCells; ++cy) {
      const CellIndex cell{cx, cy};
      REQUIRE(discretize(cell_center(cell)) == cell);
    }
  }
}
