#ifndef ARCHIPELAGO_CHAIN_HPP
#define ARCHIPELAGO_CHAIN_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "archipelago/archipelago.hpp"
#include "archipelago/errors.hpp"
#include "archipelago/feynman_kac.hpp"
#include "archipelago/operations.hpp"
#include "archipelago/rng.hpp"

namespace archipelago {

enum class ChainMode { standard, fully_adapted_prediction, auxiliary };

/// Configuration of one chain run. tau is the CV threshold triggering island
/// selection: 0 gives the double bootstrap (SIL every step), +infinity gives
/// SISR (islands never interact), anything in between the adaptive scheme.
struct ChainConfig {
  int m1 = 1;
  int m2 = 1;
  double tau = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;
  ChainMode mode = ChainMode::standard;
  std::string auxiliary_fn = "qbar";
  int threads = 1;

  void validate() const {
    if (m1 < 1 || m2 < 1) throw config_error("chain config: m1 and m2 must be positive");
    if (steps < 0) throw config_error("chain config: steps must be nonnegative");
    if (std::isnan(tau) || tau < 0.0)
      throw config_error("chain config: tau must be nonnegative (or +infinity)");
  }
};

/// One row per mutation step.
struct StepTelemetry {
  int step = 0;
  double cv = 0.0;            ///< island-weight CV before the trigger decision
  bool sil_triggered = false;
  std::vector<double> estimates;  ///< weighted estimates after the step, one per test fn
  double scale_factor = 1.0;      ///< island-weight mass divided out this step
};

template <typename State>
struct NamedFunction {
  std::string name;
  std::function<double(const State&)> fn;
};

template <typename State>
struct RunResult {
  Archipelago<State> archipelago;
  std::vector<StepTelemetry> telemetry;
  double normalizing_constant = 1.0;
};

/// gamma_n(1) estimate: the product over steps of the island-weight mass
/// divided out by renormalization. Exactly c^n when every potential is the
/// constant c; the empty product is 1.
inline double normalizing_constant(std::span<const StepTelemetry> telemetry) {
  double nc = 1.0;
  for (const auto& row : telemetry) nc *= row.scale_factor;
  return nc;
}

namespace detail {

template <typename State>
void expect_unit_island_weights(const Archipelago<State>& arch, int step) {
  for (const auto& isl : arch.islands)
    if (isl.weight != 1.0)
      throw std::logic_error("postcondition violated: island weights not one after SIL at step " +
                             std::to_string(step));
}

template <typename State>
void expect_unit_particle_weights(const Archipelago<State>& arch, int step) {
  for (const auto& isl : arch.islands)
    for (double w : isl.particle_weights)
      if (w != 1.0)
        throw std::logic_error(
            "postcondition violated: particle weights not one after SiL at step " +
            std::to_string(step));
}

template <typename State>
std::vector<double> island_weights(const Archipelago<State>& arch) {
  std::vector<double> w;
  w.reserve(arch.num_islands());
  for (const auto& isl : arch.islands) w.push_back(isl.weight);
  return w;
}

template <typename State>
std::vector<double> evaluate_estimates(const Archipelago<State>& arch,
                                       const std::vector<NamedFunction<State>>& fns) {
  std::vector<double> values;
  values.reserve(fns.size());
  for (const auto& named : fns) values.push_back(weighted_estimate(arch, named.fn));
  return values;
}

}  // namespace detail

/// Runs the particle-island chain for config.steps mutation steps.
///
/// Initialization draws m1 x m2 particles from the initial law with unit
/// weights, followed by one mutation (no CV check). Every later step checks
/// CV(island weights) > tau, applies SIL when triggered, then SiL, then the
/// mutation; island weights are renormalized to mean one after every mutation
/// and the divided-out scale factors accumulate into the normalizing-constant
/// estimate. In fully adapted and auxiliary modes each step additionally
/// starts with a Boltzmann weighing (by the potential, respectively the
/// auxiliary weight) whose scale factor joins the same accumulator.
///
/// Deterministic given config.seed for any thread count.
template <typename State>
RunResult<State> run_chain(const FeynmanKacModel<State>& model, const ChainConfig& config,
                           const std::vector<NamedFunction<State>>& test_fns = {}) {
  config.validate();
  if (model.horizon() < config.steps)
    throw config_error("run_chain: model supplies fewer kernels than requested steps");
  const bool fully_adapted = config.mode == ChainMode::fully_adapted_prediction;
  const bool auxiliary = config.mode == ChainMode::auxiliary;
  if ((fully_adapted || auxiliary) && !model.has_decomposition())
    throw config_error("run_chain: mode requires a model with explicit potentials");
  if (auxiliary && !model.has_auxiliary())
    throw config_error("run_chain: model does not support auxiliary weights");

  const auto m1 = static_cast<std::size_t>(config.m1);
  const auto m2 = static_cast<std::size_t>(config.m2);

  // island-keyed streams for one epoch and role, consumed in particle order
  std::vector<RngStream> streams;
  auto make_streams = [&](std::uint64_t epoch, StreamRole role) {
    streams.clear();
    streams.reserve(m1);
    for (std::size_t i = 0; i < m1; ++i)
      streams.emplace_back(config.seed, epoch, static_cast<std::uint64_t>(i), role);
    return [this_streams = &streams](std::size_t i) -> UniformSource& {
      return (*this_streams)[i];
    };
  };

  RunResult<State> result;
  auto& arch = result.archipelago;
  arch.weight_bound = 1.0;
  arch.islands.resize(m1);
  {
    auto at = make_streams(0, StreamRole::init);
    parallel_for(m1, config.threads, [&](std::size_t i) {
      auto& isl = arch.islands[i];
      isl.weight = 1.0;
      isl.states.reserve(m2);
      for (std::size_t j = 0; j < m2; ++j) isl.states.push_back(model.initial_draw(at(i)));
      isl.particle_weights.assign(m2, 1.0);
    });
  }
  if (config.steps == 0) return result;

  auto mutate_step = [&](int p, bool initial) {
    auto at = make_streams(static_cast<std::uint64_t>(p), StreamRole::mutation);
    if (fully_adapted) {
      arch = mutate(
          arch,
          [&](const State& x, UniformSource& rng) { return model.propose_markov(p, x, rng); },
          [](const State&, const State&) { return 1.0; }, 1.0, at, config.threads);
    } else if (auxiliary && !initial) {
      // compensated weight: the auxiliary factor entered at the weighing
      arch = mutate(
          arch,
          [&](const State& x, UniformSource& rng) { return model.propose(p, x, rng); },
          [&](const State& x, const State& y) {
            return model.weight(p, x, y) / model.auxiliary_value(p, x);
          },
          model.auxiliary_weight_sup(p), at, config.threads);
    } else {
      arch = mutate(
          arch,
          [&](const State& x, UniformSource& rng) { return model.propose(p, x, rng); },
          [&](const State& x, const State& y) { return model.weight(p, x, y); },
          model.weight_sup(p), at, config.threads);
    }
  };

  auto run_step = [&](int p, bool initial) {
    double scale = 1.0;
    double cv = 0.0;
    bool sil = false;
    try {
      if (!initial) {
        if (fully_adapted) {
          arch = boltzmann_weigh(
              arch, [&](const State& x) { return model.potential(p - 1, x); },
              model.potential_sup(p - 1), config.threads);
        } else if (auxiliary) {
          arch = boltzmann_weigh(
              arch, [&](const State& x) { return model.auxiliary_value(p, x); },
              model.auxiliary_sup(p), config.threads);
        }
        if (fully_adapted || auxiliary) {
          auto renorm = renormalize_island_weights(arch);
          arch = std::move(renorm.archipelago);
          scale *= renorm.scale;
        }
        const auto weights = detail::island_weights(arch);
        cv = cv_criterion(weights);
        sil = cv > config.tau;
        if (sil) {
          RngStream sil_stream(config.seed, static_cast<std::uint64_t>(p), 0,
                               StreamRole::island_selection);
          arch = select_islands(arch, sil_stream);
          detail::expect_unit_island_weights(arch, p);
        }
        auto at = make_streams(static_cast<std::uint64_t>(p), StreamRole::individual_selection);
        arch = select_individuals(arch, at, config.threads);
        detail::expect_unit_particle_weights(arch, p);
      }
      mutate_step(p);
      auto renorm = renormalize_island_weights(arch);
      arch = std::move(renorm.archipelago);
      scale *= renorm.scale;
    } catch (const degeneracy_error& err) {
      throw degeneracy_error("step " + std::to_string(p) + ": " + err.what());
    }
    StepTelemetry row;
    row.step = p;
    row.cv = cv;
    row.sil_triggered = sil;
    row.estimates = detail::evaluate_estimates(arch, test_fns);
    row.scale_factor = scale;
    result.telemetry.push_back(std::move(row));
  };

  run_step(0, /*initial=*/true);
  for (int p = 1; p < config.steps; ++p) run_step(p, /*initial=*/false);

  result.normalizing_constant = normalizing_constant(result.telemetry);
  return result;
}

}  // namespace archipelago

#endif  // ARCHIPELAGO_CHAIN_HPP
