#ifndef ARCHIPELAGO_OPERATIONS_HPP
#define ARCHIPELAGO_OPERATIONS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "archipelago/archipelago.hpp"
#include "archipelago/errors.hpp"
#include "archipelago/parallel.hpp"
#include "archipelago/rng.hpp"

namespace archipelago {

/// Coefficient of variation of a weight vector:
///   CV(a) = M * sum_i (a_i / sum(a))^2 - 1.
/// Zero iff all weights are equal, at most M - 1, invariant under rescaling.
inline double cv_criterion(std::span<const double> weights) {
  if (weights.empty()) throw std::domain_error("cv_criterion: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::domain_error("cv_criterion: weights must be positive and finite");
    total += w;
  }
  double sq = 0.0;
  for (double w : weights) {
    const double p = w / total;
    sq += p * p;
  }
  return static_cast<double>(weights.size()) * sq - 1.0;
}

/// Effective sample size M / (1 + CV); equals M iff the weights are equal.
inline double ess(std::span<const double> weights) {
  return static_cast<double>(weights.size()) / (1.0 + cv_criterion(weights));
}

/// Doubly self-normalized estimator: island-weighted average of the
/// per-island self-normalized importance sampling means of h.
template <typename State, typename Fn>
double weighted_estimate(const Archipelago<State>& arch, Fn&& h) {
  double island_total = 0.0;
  for (const auto& isl : arch.islands) island_total += isl.weight;
  if (!(island_total > 0.0))
    throw degeneracy_error("weighted_estimate: zero total island weight");

  double value = 0.0;
  for (std::size_t i = 0; i < arch.islands.size(); ++i) {
    const auto& isl = arch.islands[i];
    double wsum = 0.0;
    double hsum = 0.0;
    for (std::size_t j = 0; j < isl.size(); ++j) {
      const double hx = h(isl.states[j]);
      if (!std::isfinite(hx))
        throw evaluation_error("weighted_estimate: non-finite test function value");
      wsum += isl.particle_weights[j];
      hsum += isl.particle_weights[j] * hx;
    }
    if (!(wsum > 0.0))
      throw degeneracy_error("weighted_estimate: island " + std::to_string(i) +
                             " has zero particle-weight sum");
    value += (isl.weight / island_total) * (hsum / wsum);
  }
  return value;
}

/// `count` independent draws from the categorical distribution proportional
/// to `weights` (entries may be zero, the total must be positive). Draw k is
/// the inverse CDF of the k-th uniform pulled from the source, evaluated via
/// a single sorted sweep, so the output matches a per-draw inverse-CDF rule
/// exactly.
inline std::vector<std::size_t> multinomial_draw(std::span<const double> weights,
                                                 std::size_t count,
                                                 UniformSource& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::domain_error("multinomial_draw: weights must be nonnegative and finite");
    total += w;
  }
  if (!(total > 0.0)) throw std::domain_error("multinomial_draw: zero total weight");

  std::vector<std::pair<double, std::size_t>> uniforms(count);
  for (std::size_t k = 0; k < count; ++k) uniforms[k] = {rng.next_uniform(), k};
  std::sort(uniforms.begin(), uniforms.end());

  std::vector<std::size_t> out(count);
  std::size_t category = 0;
  double cumulative = weights[0] / total;
  for (const auto& [u, slot] : uniforms) {
    while (u >= cumulative && category + 1 < weights.size()) {
      ++category;
      cumulative += weights[category] / total;
    }
    out[slot] = category;
  }
  return out;
}

/// Multinomial selection on the island level: islands are redrawn i.i.d.
/// proportionally to their weights and copied verbatim; all output island
/// weights are one. Global synchronization point; weight_bound unchanged.
template <typename State>
Archipelago<State> select_islands(const Archipelago<State>& arch, UniformSource& rng) {
  std::vector<double> island_weights;
  island_weights.reserve(arch.num_islands());
  for (const auto& isl : arch.islands) island_weights.push_back(isl.weight);

  const auto picks = multinomial_draw(island_weights, arch.num_islands(), rng);
  Archipelago<State> out;
  out.weight_bound = arch.weight_bound;
  out.islands.reserve(arch.num_islands());
  for (std::size_t pick : picks) {
    Island<State> isl = arch.islands[pick];
    isl.weight = 1.0;
    out.islands.push_back(std::move(isl));
  }
  return out;
}

/// Multinomial resampling on the individual level, independently per island:
/// particles are redrawn i.i.d. within each island proportionally to their
/// weights and all particle weights reset to one. Island weights are kept;
/// weight_bound becomes one. `stream_for_island(i)` must yield a source
/// dedicated to island i so the result is schedule independent.
template <typename State, typename Streams>
Archipelago<State> select_individuals(const Archipelago<State>& arch,
                                      Streams&& stream_for_island, int threads = 1) {
  Archipelago<State> out;
  out.weight_bound = 1.0;
  out.islands.resize(arch.num_islands());
  parallel_for(arch.num_islands(), threads, [&](std::size_t i) {
    const auto& src = arch.islands[i];
    double wsum = 0.0;
    for (double w : src.particle_weights) wsum += w;
    if (!(wsum > 0.0))
      throw degeneracy_error("select_individuals: island " + std::to_string(i) +
                             " has zero particle-weight sum");
    UniformSource& rng = stream_for_island(i);
    const auto picks = multinomial_draw(src.particle_weights, src.size(), rng);
    auto& dst = out.islands[i];
    dst.weight = src.weight;
    dst.states.reserve(src.size());
    for (std::size_t pick : picks) dst.states.push_back(src.states[pick]);
    dst.particle_weights.assign(src.size(), 1.0);
  });
  return out;
}

/// Mutation: every particle is moved through the proposal kernel and its
/// weight multiplied by the importance weight w(x, x'); each island weight is
/// scaled by the ratio of its new to old particle-weight sum. weight_sup must
/// bound w so the tracked particle-weight bound stays valid.
///
/// propose(x, rng) -> new state; weight_fn(x, x') -> w. Draws for island i
/// come from stream_for_island(i), consumed in particle order.
template <typename State, typename Proposal, typename WeightFn, typename Streams>
Archipelago<State> mutate(const Archipelago<State>& arch, Proposal&& propose,
                          WeightFn&& weight_fn, double weight_sup,
                          Streams&& stream_for_island, int threads = 1) {
  if (!(weight_sup > 0.0) || !std::isfinite(weight_sup))
    throw std::domain_error("mutate: weight_sup must be positive and finite");
  Archipelago<State> out;
  out.weight_bound = arch.weight_bound * weight_sup;
  out.islands.resize(arch.num_islands());
  parallel_for(arch.num_islands(), threads, [&](std::size_t i) {
    const auto& src = arch.islands[i];
    auto& dst = out.islands[i];
    UniformSource& rng = stream_for_island(i);
    dst.states.reserve(src.size());
    dst.particle_weights.reserve(src.size());
    double old_sum = 0.0;
    double new_sum = 0.0;
    for (std::size_t j = 0; j < src.size(); ++j) {
      State moved = propose(src.states[j], rng);
      const double w = weight_fn(src.states[j], moved);
      if (!std::isfinite(w) || w < 0.0)
        throw evaluation_error("mutate: non-finite or negative importance weight on island " +
                               std::to_string(i));
      const double pw = w * src.particle_weights[j];
      old_sum += src.particle_weights[j];
      new_sum += pw;
      dst.states.push_back(std::move(moved));
      dst.particle_weights.push_back(pw);
    }
    if (!(new_sum > 0.0))
      throw degeneracy_error("mutate: island " + std::to_string(i) +
                             " lost all weight mass");
    dst.weight = src.weight * (new_sum / old_sum);
  });
  return out;
}

/// Boltzmann weighing: mutation with the identity proposal and w(x, x') =
/// g(x'). States are untouched; particle weights are multiplied by g and each
/// island weight scaled by the induced mass ratio. No randomness consumed.
template <typename State, typename Potential>
Archipelago<State> boltzmann_weigh(const Archipelago<State>& arch, Potential&& g,
                                   double g_sup, int threads = 1) {
  if (!(g_sup > 0.0) || !std::isfinite(g_sup))
    throw std::domain_error("boltzmann_weigh: potential bound must be positive and finite");
  Archipelago<State> out;
  out.weight_bound = arch.weight_bound * g_sup;
  out.islands.resize(arch.num_islands());
  parallel_for(arch.num_islands(), threads, [&](std::size_t i) {
    const auto& src = arch.islands[i];
    auto& dst = out.islands[i];
    dst.states = src.states;
    dst.particle_weights.resize(src.size());
    double old_sum = 0.0;
    double new_sum = 0.0;
    for (std::size_t j = 0; j < src.size(); ++j) {
      const double gx = g(src.states[j]);
      if (!std::isfinite(gx) || gx < 0.0)
        throw evaluation_error("boltzmann_weigh: non-finite or negative potential on island " +
                               std::to_string(i));
      dst.particle_weights[j] = gx * src.particle_weights[j];
      old_sum += src.particle_weights[j];
      new_sum += dst.particle_weights[j];
    }
    if (!(new_sum > 0.0))
      throw degeneracy_error("boltzmann_weigh: island " + std::to_string(i) +
                             " lost all weight mass");
    dst.weight = src.weight * (new_sum / old_sum);
  });
  return out;
}

template <typename State>
struct Renormalized {
  Archipelago<State> archipelago;
  double scale = 1.0;  ///< discarded mean island weight, for constant tracking
};

/// Divides all island weights by their arithmetic mean and reports the mean.
/// Every normalized quantity (estimates, CV, selection probabilities) is
/// unchanged; only the absolute scale moves into the returned factor.
template <typename State>
Renormalized<State> renormalize_island_weights(const Archipelago<State>& arch) {
  double total = 0.0;
  for (const auto& isl : arch.islands) total += isl.weight;
  const double mean = total / static_cast<double>(arch.num_islands());
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw degeneracy_error("renormalize_island_weights: island-weight mean not positive");
  Renormalized<State> out{arch, mean};
  for (auto& isl : out.archipelago.islands) isl.weight /= mean;
  return out;
}

}  // namespace archipelago

#endif  // ARCHIPELAGO_OPERATIONS_HPP
