#include "archipelago/lgssm.hpp"

#include <cmath>
#include <utility>

#include "archipelago/errors.hpp"

namespace archipelago {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kDensityFloor = 1e-300;  // guards the positivity check against underflow

double gaussian_density(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  const double value = kInvSqrt2Pi / sd * std::exp(-0.5 * z * z);
  return value > kDensityFloor ? value : kDensityFloor;
}

}  // namespace

LgssmModel::LgssmModel(double a, double sigma_x, double sigma_y, double prior_mean,
                       double prior_var, std::vector<double> observations)
    : a_(a),
      sigma_x_(sigma_x),
      sigma_y_(sigma_y),
      prior_mean_(prior_mean),
      prior_var_(prior_var),
      observations_(std::move(observations)) {
  if (sigma_x_ < 0.0) throw config_error("lgssm: sigma_x must be nonnegative");
  if (!(sigma_y_ > 0.0)) throw config_error("lgssm: sigma_y must be positive");
  if (prior_var_ < 0.0) throw config_error("lgssm: prior variance must be nonnegative");
}

double LgssmModel::initial_draw(UniformSource& rng) const {
  return prior_mean_ + std::sqrt(prior_var_) * standard_gaussian(rng);
}

double LgssmModel::propose(int p, const double& x, UniformSource& rng) const {
  (void)p;
  return a_ * x + sigma_x_ * standard_gaussian(rng);
}

double LgssmModel::weight(int p, const double& x, const double& x_new) const {
  (void)x;
  return gaussian_density(observations_.at(p), x_new, sigma_y_);
}

double LgssmModel::weight_sup(int p) const {
  (void)p;
  return kInvSqrt2Pi / sigma_y_;
}

std::vector<GaussianPosterior> kalman_filter(const LgssmModel& model, int n) {
  if (n > model.horizon()) throw config_error("kalman_filter: horizon exceeds observations");
  std::vector<GaussianPosterior> out;
  out.reserve(n + 1);
  double mean = model.prior_mean();
  double var = model.prior_var();
  out.push_back({mean, var});
  const double sy2 = model.sigma_y() * model.sigma_y();
  for (int p = 0; p < n; ++p) {
    // predict
    mean = model.a() * mean;
    var = model.a() * model.a() * var + model.sigma_x() * model.sigma_x();
    // update
    const double gain = var / (var + sy2);
    mean += gain * (model.observations()[p] - mean);
    var *= 1.0 - gain;
    out.push_back({mean, var});
  }
  return out;
}

LgssmPath simulate_lgssm_path(const LgssmModel& model, int n, UniformSource& rng) {
  LgssmPath path;
  path.latent.reserve(n + 1);
  path.observations.reserve(n);
  path.latent.push_back(model.prior_mean() +
                        std::sqrt(model.prior_var()) * standard_gaussian(rng));
  for (int p = 0; p < n; ++p) {
    const double next = model.a() * path.latent.back() +
                        model.sigma_x() * standard_gaussian(rng);
    path.latent.push_back(next);
    path.observations.push_back(next + model.sigma_y() * standard_gaussian(rng));
  }
  return path;
}

}  // namespace archipelago
