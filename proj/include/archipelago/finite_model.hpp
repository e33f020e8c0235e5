#ifndef ARCHIPELAGO_FINITE_MODEL_HPP
#define ARCHIPELAGO_FINITE_MODEL_HPP

#include <optional>
#include <vector>

#include "archipelago/feynman_kac.hpp"
#include "archipelago/matrix.hpp"
#include "archipelago/rng.hpp"

namespace archipelago {

/// Finite-state Feynman-Kac model: initial simplex chi, row-stochastic
/// transitions M_p and positive potentials g_{p+1}, generating
/// Q_p h = M_p(g_{p+1} h). The default proposal is the model dynamics
/// (bootstrap, w_p(x, x') = g_{p+1}(x')); an explicit proposal matrix per
/// step is supported with entrywise weight ratios.
///
/// Everything about this model is exactly computable, which is what the
/// variance oracles and the exact flow rely on.
class FiniteModel final : public FeynmanKacModel<int> {
 public:
  FiniteModel(std::vector<double> chi, std::vector<Matrix> transitions,
              std::vector<std::vector<double>> potentials,
              std::optional<std::vector<Matrix>> proposals = std::nullopt);

  /// Time-homogeneous model: the same kernel and potential at every step.
  static FiniteModel homogeneous(std::vector<double> chi, Matrix transition,
                                 std::vector<double> potential, int steps);

  int dimension() const { return static_cast<int>(chi_.size()); }
  const std::vector<double>& initial_law() const { return chi_; }
  const Matrix& transition(int p) const { return transitions_.at(p); }
  const std::vector<double>& potential_values(int p) const { return potentials_.at(p); }
  const Matrix& proposal_matrix(int p) const {
    return proposals_ ? proposals_->at(p) : transitions_.at(p);
  }

  /// Entrywise importance weights W_p(x, y) = g_{p+1}(y) M_p(x, y) / R_p(x, y).
  Matrix weight_matrix(int p) const;

  /// Q_p as a matrix: Q_p(x, y) = M_p(x, y) g_{p+1}(y).
  Matrix q_matrix(int p) const;

  /// x -> sum_y M_p(x, y) g_{p+1}(y) h(y).
  std::vector<double> apply_q(int p, const std::vector<double>& h) const;

  // FeynmanKacModel interface
  int horizon() const override { return static_cast<int>(transitions_.size()); }
  int initial_draw(UniformSource& rng) const override;
  int propose(int p, const int& x, UniformSource& rng) const override;
  double weight(int p, const int& x, const int& x_new) const override;
  double weight_sup(int p) const override;
  bool has_decomposition() const override { return true; }
  double potential(int p, const int& x) const override { return potentials_.at(p).at(x); }
  double potential_sup(int p) const override;
  int propose_markov(int p, const int& x, UniformSource& rng) const override;

  /// Auxiliary weights: defaults to the exact one-step predictive mass
  /// t_p(x) = (Q_p 1)(x); user tables (one positive length-d vector per step)
  /// override it.
  bool has_auxiliary() const override { return true; }
  double auxiliary_value(int p, const int& x) const override;
  double auxiliary_sup(int p) const override;
  double auxiliary_weight_sup(int p) const override;
  void set_auxiliary_tables(std::vector<std::vector<double>> tables);

 private:
  std::vector<double> chi_;
  std::vector<Matrix> transitions_;
  std::vector<std::vector<double>> potentials_;
  std::optional<std::vector<Matrix>> proposals_;
  std::vector<std::vector<double>> auxiliary_tables_;  // empty -> Q_p 1
};

/// Exact normalized flow eta_0..eta_n plus the per-step masses
/// eta_p(Q_p 1); the product of the masses is the normalizing constant
/// gamma_n(1).
struct FlowResult {
  std::vector<std::vector<double>> eta;
  std::vector<double> step_mass;
};

FlowResult exact_flow(const FiniteModel& model, int n);

/// Exact prediction flow: eta~_0 = chi, eta~_1 = chi M_0 and thereafter
/// eta~_{p+1} proportional to (eta~_p . g_p) M_p. step_mass[p] holds
/// eta~_p(g_p) for p >= 1 (and the neutral factor 1 at p = 0).
FlowResult exact_prediction_flow(const FiniteModel& model, int n);

/// Latent chain drawn from (chi, M_p). The potentials are data likelihoods
/// already evaluated at the recorded observations, so no observation path is
/// generated for finite models.
std::vector<int> simulate_latent_path(const FiniteModel& model, int n, UniformSource& rng);

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace archipelago

#endif  // ARCHIPELAGO_FINITE_MODEL_HPP
