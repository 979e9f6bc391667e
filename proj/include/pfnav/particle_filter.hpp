#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pfnav/rng.hpp"

namespace pfnav {

template <std::size_t Dim>
using StateVec = std::array<double, Dim>;

/// Isotropic diagonal Gaussian noise levels, in environment units.
struct NoiseSpec {
  double observation_sigma = 0.0;
  double process_sigma = 0.0;
};

/// Weighted ensemble approximating the state posterior. A value type:
/// copying it copies the whole ensemble, and no operation changes the
/// particle count.
template <std::size_t Dim>
struct ParticleSet {
  std::vector<StateVec<Dim>> states;
  std::vector<double> weights;

  std::size_t size() const { return states.size(); }
};

template <std::size_t Dim, typename PriorSampler>
ParticleSet<Dim> init_particles(std::size_t count, PriorSampler&& prior, Rng& rng) {
  if (count == 0) {
    throw std::invalid_argument("init_particles: particle count must be >= 1");
  }
  ParticleSet<Dim> set;
  set.states.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    set.states.push_back(prior(rng));
  }
  set.weights.assign(count, 1.0 / static_cast<double>(count));
  return set;
}

/// Propagate every particle through the transition model and add
/// independent per-component process noise. Weights are untouched.
template <std::size_t Dim, typename Action, typename TransitionModel>
void predict(ParticleSet<Dim>& set, const Action& action, TransitionModel&& model,
             const NoiseSpec& noise, Rng& rng) {
  for (auto& state : set.states) {
    state = model(state, action);
    for (double& component : state) {
      component = gaussian(rng, component, noise.process_sigma);
    }
  }
}

/// Unnormalized Gaussian likelihood factor exp(-d^2 / (2 sigma^2)).
inline double gaussian_likelihood(double squared_distance, double sigma) {
  return std::exp(-squared_distance / (2.0 * sigma * sigma));
}

/// Multiply weights by the observation likelihood and renormalize.
/// If every product underflows to zero the weights are reset to uniform;
/// returns true in that case so callers can count the resets.
template <std::size_t Dim>
bool update_weights(ParticleSet<Dim>& set, const StateVec<Dim>& observation,
                    const NoiseSpec& noise) {
  if (!(noise.observation_sigma > 0.0)) {
    throw std::invalid_argument("update_weights: observation_sigma must be > 0");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < Dim; ++k) {
      const double diff = observation[k] - set.states[i][k];
      d2 += diff * diff;
    }
    set.weights[i] *= gaussian_likelihood(d2, noise.observation_sigma);
    total += set.weights[i];
  }
  if (total < 1e-300) {
    const double uniform = 1.0 / static_cast<double>(set.size());
    for (double& w : set.weights) w = uniform;
    return true;
  }
  for (double& w : set.weights) w /= total;
  return false;
}

/// Degeneracy diagnostic 1 / sum(w_i^2), in [1, N] for normalized weights.
template <std::size_t Dim>
double effective_sample_size(const ParticleSet<Dim>& set) {
  double sum_sq = 0.0;
  for (double w : set.weights) sum_sq += w * w;
  return 1.0 / sum_sq;
}

/// Systematic resampling: N offsets spaced 1/N apart from a single
/// uniform draw. Expected copy count of particle i is N * w_i, and with
/// uniform weights every particle is copied exactly once, in order.
template <std::size_t Dim>
void resample_systematic(ParticleSet<Dim>& set, Rng& rng) {
  const std::size_t n = set.size();
  const double step = 1.0 / static_cast<double>(n);
  const double offset = uniform_real(rng, 0.0, step);

  std::vector<StateVec<Dim>> resampled;
  resampled.reserve(n);
  double cumulative = set.weights[0];
  std::size_t i = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double position = offset + static_cast<double>(j) * step;
    while (position > cumulative && i + 1 < n) {
      ++i;
      cumulative += set.weights[i];
    }
    resampled.push_back(set.states[i]);
  }
  set.states = std::move(resampled);
  set.weights.assign(n, step);
}

/// Posterior mean estimate sum(w_i * s_i).
template <std::size_t Dim>
StateVec<Dim> estimate(const ParticleSet<Dim>& set) {
  StateVec<Dim> mean{};
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t k = 0; k < Dim; ++k) {
      mean[k] += set.weights[i] * set.states[i][k];
    }
  }
  return mean;
}

/// Bootstrap filter: owns a particle set, its RNG stream, and the
/// resampling trigger. One instance per tracked quantity; instances are
/// independent and safe to use from distinct threads.
template <std::size_t Dim>
class BootstrapFilter {
 public:
  BootstrapFilter(std::size_t count, NoiseSpec noise, std::uint64_t seed)
      : noise_(noise), rng_(seed), count_(count) {
    if (count == 0) {
      throw std::invalid_argument("BootstrapFilter: particle count must be >= 1");
    }
  }

  template <typename PriorSampler>
  void init(PriorSampler&& prior) {
    set_ = init_particles<Dim>(count_, prior, rng_);
  }

  /// Point-mass prior at a known initial state.
  void init_at(const StateVec<Dim>& state) {
    init([&state](Rng&) { return state; });
  }

  /// One filter cycle: predict through the model, reweight by the
  /// observation, resample if the ESS dropped below the trigger.
  /// Returns the posterior mean.
  template <typename Action, typename TransitionModel>
  StateVec<Dim> step(const Action& action, TransitionModel&& model,
                     const StateVec<Dim>& observation) {
    predict(set_, action, model, noise_, rng_);
    if (update_weights(set_, observation, noise_)) {
      ++underflow_resets_;
    }
    if (effective_sample_size(set_) < resample_trigger_ * static_cast<double>(count_)) {
      resample_systematic(set_, rng_);
    }
    return estimate(set_);
  }

  StateVec<Dim> mean() const { return estimate(set_); }
  const ParticleSet<Dim>& particles() const { return set_; }
  const NoiseSpec& noise() const { return noise_; }
  std::size_t underflow_resets() const { return underflow_resets_; }

  /// Resample when ESS < trigger * N. Default N/2.
  void set_resample_trigger(double fraction) { resample_trigger_ = fraction; }

 private:
  ParticleSet<Dim> set_;
  NoiseSpec noise_;
  Rng rng_;
  std::size_t count_;
  double resample_trigger_ = 0.5;
  std::size_t underflow_resets_ = 0;
};

}  // namespace pfnav
