#ifndef ARCHIPELAGO_LGSSM_HPP
#define ARCHIPELAGO_LGSSM_HPP

#include <vector>

#include "archipelago/feynman_kac.hpp"
#include "archipelago/rng.hpp"

namespace archipelago {

/// Linear Gaussian state space model
///   X_{p+1} = a X_p + sigma_x V_p,   Y_p = X_{p+1} + sigma_y W_p,
/// with X_0 ~ N(prior_mean, prior_var). The bootstrap proposal is the state
/// dynamics and the importance weight at step p is the Gaussian likelihood of
/// observations[p] at the moved particle, so after n mutations the archipelago
/// targets the filter distribution of X_n given the first n observations.
class LgssmModel final : public FeynmanKacModel<double> {
 public:
  LgssmModel(double a, double sigma_x, double sigma_y, double prior_mean,
             double prior_var, std::vector<double> observations);

  double a() const { return a_; }
  double sigma_x() const { return sigma_x_; }
  double sigma_y() const { return sigma_y_; }
  double prior_mean() const { return prior_mean_; }
  double prior_var() const { return prior_var_; }
  const std::vector<double>& observations() const { return observations_; }

  // FeynmanKacModel interface
  int horizon() const override { return static_cast<int>(observations_.size()); }
  double initial_draw(UniformSource& rng) const override;
  double propose(int p, const double& x, UniformSource& rng) const override;
  double weight(int p, const double& x, const double& x_new) const override;
  double weight_sup(int p) const override;
  bool has_decomposition() const override { return true; }
  double potential(int p, const double& x) const override { return weight(p, 0.0, x); }
  double potential_sup(int p) const override { return weight_sup(p); }
  double propose_markov(int p, const double& x, UniformSource& rng) const override {
    return propose(p, x, rng);
  }

 private:
  double a_;
  double sigma_x_;
  double sigma_y_;
  double prior_mean_;
  double prior_var_;
  std::vector<double> observations_;
};

struct GaussianPosterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact conjugate filter: entry k is the posterior of X_k given the first k
/// observations (entry 0 is the prior), matching the flow targeted by the
/// particle systems step for step.
std::vector<GaussianPosterior> kalman_filter(const LgssmModel& model, int n);

struct LgssmPath {
  std::vector<double> latent;        ///< X_0..X_n
  std::vector<double> observations;  ///< Y_0..Y_{n-1}, emitted from X_1..X_n
};

LgssmPath simulate_lgssm_path(const LgssmModel& model, int n, UniformSource& rng);

}  // namespace archipelago

#endif  // ARCHIPELAGO_LGSSM_HPP
