#ifndef ARCHIPELAGO_ARCHIPELAGO_HPP
#define ARCHIPELAGO_ARCHIPELAGO_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "archipelago/errors.hpp"

namespace archipelago {

/// One island: a weight and M2 particles with individual weights.
template <typename State>
struct Island {
  double weight = 1.0;
  std::vector<State> states;
  std::vector<double> particle_weights;

  std::size_t size() const { return states.size(); }
};

/// A weighted archipelago: M1 islands of M2 weighted particles each, plus the
/// tracked uniform bound on the particle weights.
template <typename State>
struct Archipelago {
  std::vector<Island<State>> islands;
  double weight_bound = 1.0;

  std::size_t num_islands() const { return islands.size(); }
  std::size_t island_size() const { return islands.empty() ? 0 : islands.front().size(); }

  /// Checks the structural invariants; throws on violation. Used by tests and
  /// by the chain driver after every operation in debug-checked runs.
  void validate() const {
    if (islands.empty()) throw std::domain_error("archipelago: no islands");
    if (!(weight_bound > 0.0) || !std::isfinite(weight_bound))
      throw std::domain_error("archipelago: weight_bound must be positive and finite");
    const std::size_t m2 = islands.front().size();
    for (std::size_t i = 0; i < islands.size(); ++i) {
      const auto& isl = islands[i];
      if (!(isl.weight > 0.0) || !std::isfinite(isl.weight))
        throw std::domain_error("archipelago: island " + std::to_string(i) +
                                " has nonpositive weight");
      if (isl.size() != m2 || isl.particle_weights.size() != m2)
        throw std::domain_error("archipelago: island " + std::to_string(i) +
                                " has inconsistent particle count");
      double sum = 0.0;
      for (double w : isl.particle_weights) {
        if (w < 0.0 || !std::isfinite(w))
          throw std::domain_error("archipelago: island " + std::to_string(i) +
                                  " has negative or non-finite particle weight");
        if (w > weight_bound * (1.0 + 1e-12))
          throw std::domain_error("archipelago: island " + std::to_string(i) +
                                  " has particle weight above weight_bound");
        sum += w;
      }
      if (!(sum > 0.0))
        throw degeneracy_error("archipelago: island " + std::to_string(i) +
                               " has zero particle-weight sum");
    }
  }
};

/// Uniform archipelago of m1 x m2 copies of a default state, all weights one.
template <typename State>
Archipelago<State> make_uniform_archipelago(std::size_t m1, std::size_t m2,
                                            const State& init = State{}) {
  Archipelago<State> arch;
  arch.islands.resize(m1);
  for (auto& isl : arch.islands) {
    isl.weight = 1.0;
    isl.states.assign(m2, init);
    isl.particle_weights.assign(m2, 1.0);
  }
  arch.weight_bound = 1.0;
  return arch;
}

}  // namespace archipelago

#endif  // ARCHIPELAGO_ARCHIPELAGO_HPP
