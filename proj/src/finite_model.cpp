#include "archipelago/finite_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "archipelago/errors.hpp"

namespace archipelago {

namespace {

constexpr double kSimplexTol = 1e-12;

void check_simplex(const std::vector<double>& v, const std::string& what) {
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0 || !std::isfinite(x))
      throw config_error(what + ": entries must be nonnegative and finite");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw config_error(what + ": entries must sum to one");
}

void check_row_stochastic(const Matrix& m, const std::string& what) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m(r, c) < 0.0 || !std::isfinite(m(r, c)))
        throw config_error(what + ": entries must be nonnegative and finite");
      sum += m(r, c);
    }
    if (std::abs(sum - 1.0) > kSimplexTol)
      throw config_error(what + ": row " + std::to_string(r) + " must sum to one");
  }
}

/// One categorical draw by inverse CDF over a probability row.
int draw_index(const double* probs, int d, UniformSource& rng) {
  const double u = rng.next_uniform();
  double cumulative = 0.0;
  for (int k = 0; k < d; ++k) {
    cumulative += probs[k];
    if (u < cumulative) return k;
  }
  return d - 1;
}

}  // namespace

FiniteModel::FiniteModel(std::vector<double> chi, std::vector<Matrix> transitions,
                         std::vector<std::vector<double>> potentials,
                         std::optional<std::vector<Matrix>> proposals)
    : chi_(std::move(chi)),
      transitions_(std::move(transitions)),
      potentials_(std::move(potentials)),
      proposals_(std::move(proposals)) {
  const auto d = chi_.size();
  if (d == 0) throw config_error("finite model: empty state space");
  check_simplex(chi_, "finite model chi");
  if (transitions_.size() != potentials_.size())
    throw config_error("finite model: need one potential per transition");
  for (std::size_t p = 0; p < transitions_.size(); ++p) {
    const auto& m = transitions_[p];
    if (m.rows() != d || m.cols() != d)
      throw config_error("finite model: transition " + std::to_string(p) +
                         " has wrong dimensions");
    check_row_stochastic(m, "finite model transition " + std::to_string(p));
    if (potentials_[p].size() != d)
      throw config_error("finite model: potential " + std::to_string(p) +
                         " has wrong dimension");
    for (double g : potentials_[p])
      if (!(g > 0.0) || !std::isfinite(g))
        throw config_error("finite model: potentials must be positive and finite");
  }
  if (proposals_) {
    if (proposals_->size() != transitions_.size())
      throw config_error("finite model: need one proposal per transition");
    for (std::size_t p = 0; p < proposals_->size(); ++p) {
      const auto& r = (*proposals_)[p];
      if (r.rows() != d || r.cols() != d)
        throw config_error("finite model: proposal " + std::to_string(p) +
                           " has wrong dimensions");
      check_row_stochastic(r, "finite model proposal " + std::to_string(p));
      for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y)
          if (transitions_[p](x, y) > 0.0 && r(x, y) == 0.0)
            throw config_error("finite model: proposal " + std::to_string(p) +
                               " not absolutely continuous w.r.t. the dynamics");
    }
  }
}

FiniteModel FiniteModel::homogeneous(std::vector<double> chi, Matrix transition,
                                     std::vector<double> potential, int steps) {
  std::vector<Matrix> ms(steps, transition);
  std::vector<std::vector<double>> gs(steps, potential);
  return FiniteModel(std::move(chi), std::move(ms), std::move(gs));
}

Matrix FiniteModel::weight_matrix(int p) const {
  const int d = dimension();
  const auto& m = transitions_.at(p);
  const auto& g = potentials_.at(p);
  const auto& r = proposal_matrix(p);
  Matrix w(d, d, 0.0);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      if (r(x, y) > 0.0) w(x, y) = g[y] * m(x, y) / r(x, y);
  return w;
}

Matrix FiniteModel::q_matrix(int p) const {
  const int d = dimension();
  const auto& m = transitions_.at(p);
  const auto& g = potentials_.at(p);
  Matrix q(d, d, 0.0);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) q(x, y) = m(x, y) * g[y];
  return q;
}

std::vector<double> FiniteModel::apply_q(int p, const std::vector<double>& h) const {
  if (h.size() != chi_.size())
    throw std::invalid_argument("apply_q: test function has wrong dimension");
  const auto& m = transitions_.at(p);
  const auto& g = potentials_.at(p);
  std::vector<double> gh(h.size());
  for (std::size_t y = 0; y < h.size(); ++y) gh[y] = g[y] * h[y];
  return m.apply(gh);
}

int FiniteModel::initial_draw(UniformSource& rng) const {
  return draw_index(chi_.data(), dimension(), rng);
}

int FiniteModel::propose(int p, const int& x, UniformSource& rng) const {
  const auto& r = proposal_matrix(p);
  return draw_index(r.row(x), dimension(), rng);
}

double FiniteModel::weight(int p, const int& x, const int& x_new) const {
  const auto& g = potentials_.at(p);
  if (!proposals_) return g[x_new];
  const auto& m = transitions_.at(p);
  const auto& r = (*proposals_)[p];
  return r(x, x_new) > 0.0 ? g[x_new] * m(x, x_new) / r(x, x_new) : 0.0;
}

double FiniteModel::weight_sup(int p) const {
  if (!proposals_) return potential_sup(p);
  const Matrix w = weight_matrix(p);
  double sup = 0.0;
  for (std::size_t x = 0; x < w.rows(); ++x)
    for (std::size_t y = 0; y < w.cols(); ++y) sup = std::max(sup, w(x, y));
  return sup;
}

double FiniteModel::potential_sup(int p) const {
  double sup = 0.0;
  for (double g : potentials_.at(p)) sup = std::max(sup, g);
  return sup;
}

int FiniteModel::propose_markov(int p, const int& x, UniformSource& rng) const {
  const auto& m = transitions_.at(p);
  return draw_index(m.row(x), dimension(), rng);
}

double FiniteModel::auxiliary_value(int p, const int& x) const {
  if (!auxiliary_tables_.empty()) return auxiliary_tables_.at(p).at(x);
  const auto& m = transitions_.at(p);
  const auto& g = potentials_.at(p);
  double mass = 0.0;
  for (int y = 0; y < dimension(); ++y) mass += m(x, y) * g[y];
  return mass;
}

double FiniteModel::auxiliary_sup(int p) const {
  double sup = 0.0;
  for (int x = 0; x < dimension(); ++x) sup = std::max(sup, auxiliary_value(p, x));
  return sup;
}

double FiniteModel::auxiliary_weight_sup(int p) const {
  const Matrix w = weight_matrix(p);
  const auto& r = proposal_matrix(p);
  double sup = 0.0;
  for (int x = 0; x < dimension(); ++x) {
    const double t = auxiliary_value(p, x);
    for (int y = 0; y < dimension(); ++y)
      if (r(x, y) > 0.0) sup = std::max(sup, w(x, y) / t);
  }
  return sup;
}

void FiniteModel::set_auxiliary_tables(std::vector<std::vector<double>> tables) {
  if (tables.size() != transitions_.size())
    throw config_error("finite model: need one auxiliary table per step");
  for (const auto& t : tables) {
    if (t.size() != chi_.size())
      throw config_error("finite model: auxiliary table has wrong dimension");
    for (double v : t)
      if (!(v > 0.0) || !std::isfinite(v))
        throw config_error("finite model: auxiliary weights must be positive and finite");
  }
  auxiliary_tables_ = std::move(tables);
}

FlowResult exact_flow(const FiniteModel& model, int n) {
  if (n < 0) throw std::invalid_argument("exact_flow: negative horizon");
  if (n > model.horizon()) throw config_error("exact_flow: horizon exceeds model steps");
  FlowResult out;
  out.eta.push_back(model.initial_law());
  for (int p = 0; p < n; ++p) {
    const auto unnorm = model.q_matrix(p).apply_left(out.eta.back());
    double mass = 0.0;
    for (double v : unnorm) mass += v;
    if (!(mass > 0.0))
      throw degeneracy_error("exact_flow: flow annihilated at step " + std::to_string(p));
    std::vector<double> next(unnorm);
    for (double& v : next) v /= mass;
    out.eta.push_back(std::move(next));
    out.step_mass.push_back(mass);
  }
  return out;
}

FlowResult exact_prediction_flow(const FiniteModel& model, int n) {
  if (n < 0) throw std::invalid_argument("exact_prediction_flow: negative horizon");
  if (n > model.horizon())
    throw config_error("exact_prediction_flow: horizon exceeds model steps");
  FlowResult out;
  out.eta.push_back(model.initial_law());
  for (int p = 0; p < n; ++p) {
    std::vector<double> weighed = out.eta.back();
    double mass = 1.0;
    if (p > 0) {  // the first prediction step carries no potential
      const auto& g = model.potential_values(p - 1);
      mass = 0.0;
      for (std::size_t x = 0; x < weighed.size(); ++x) {
        weighed[x] *= g[x];
        mass += weighed[x];
      }
      if (!(mass > 0.0))
        throw degeneracy_error("exact_prediction_flow: flow annihilated at step " +
                               std::to_string(p));
      for (double& v : weighed) v /= mass;
    }
    out.eta.push_back(model.transition(p).apply_left(weighed));
    out.step_mass.push_back(mass);
  }
  return out;
}

std::vector<int> simulate_latent_path(const FiniteModel& model, int n, UniformSource& rng) {
  if (n > model.horizon())
    throw config_error("simulate_latent_path: horizon exceeds model steps");
  std::vector<int> path;
  path.reserve(n + 1);
  path.push_back(model.initial_draw(rng));
  for (int p = 0; p < n; ++p) path.push_back(model.propose_markov(p, path.back(), rng));
  return path;
}

}  // namespace archipelago
