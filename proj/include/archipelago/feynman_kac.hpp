#ifndef ARCHIPELAGO_FEYNMAN_KAC_HPP
#define ARCHIPELAGO_FEYNMAN_KAC_HPP

#include <string>

#include "archipelago/errors.hpp"
#include "archipelago/rng.hpp"

namespace archipelago {

/// A Feynman-Kac model as consumed by the chain drivers: an initial law, and
/// for each step p a proposal kernel R_p together with the bounded importance
/// weight w_p = dQ_p(x,.)/dR_p(x,.), where Q_p generates the unnormalized
/// flow. Models that additionally expose the decomposition Q_p = M_p(g_{p+1}.)
/// (potential + Markov kernel) unlock the fully adapted and auxiliary modes.
template <typename State>
class FeynmanKacModel {
 public:
  virtual ~FeynmanKacModel() = default;

  /// Number of mutation steps the model can serve.
  virtual int horizon() const = 0;

  virtual State initial_draw(UniformSource& rng) const = 0;

  /// Draw from the proposal R_p(x, .).
  virtual State propose(int p, const State& x, UniformSource& rng) const = 0;

  /// Importance weight w_p(x, x').
  virtual double weight(int p, const State& x, const State& x_new) const = 0;

  /// A finite upper bound on w_p, used to advance the particle-weight bound.
  virtual double weight_sup(int p) const = 0;

  /// True when g_p and M_p are individually available.
  virtual bool has_decomposition() const { return false; }

  /// Potential g_{p+1}(x), i.e. the multiplier attached to mutation step p.
  virtual double potential(int p, const State& x) const {
    (void)p;
    (void)x;
    throw config_error("model does not expose potentials");
  }

  virtual double potential_sup(int p) const {
    (void)p;
    throw config_error("model does not expose potentials");
  }

  /// Draw from the Markov kernel M_p(x, .) of the decomposition.
  virtual State propose_markov(int p, const State& x, UniformSource& rng) const {
    (void)p;
    (void)x;
    (void)rng;
    throw config_error("model does not expose a Markov kernel");
  }

  /// True when bounded auxiliary weights t_p are available, enabling the
  /// auxiliary chain mode.
  virtual bool has_auxiliary() const { return false; }

  /// Auxiliary weight t_p(x) used by the prefatory weighing of step p.
  virtual double auxiliary_value(int p, const State& x) const {
    (void)p;
    (void)x;
    throw config_error("model does not supply auxiliary weights");
  }

  virtual double auxiliary_sup(int p) const {
    (void)p;
    throw config_error("model does not supply auxiliary weights");
  }

  /// Finite bound on the compensated mutation weight w_p(x, x') / t_p(x).
  virtual double auxiliary_weight_sup(int p) const {
    (void)p;
    throw config_error("model does not supply auxiliary weights");
  }
};

}  // namespace archipelago

#endif  // ARCHIPELAGO_FEYNMAN_KAC_HPP
