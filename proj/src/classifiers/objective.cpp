#include "classim/classifiers/objective.hpp"

#include <algorithm>
#include <cmath>

#include "classim/classifiers/linear_model.hpp"

namespace classim::classifiers {

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double total_weight(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}

// Adds the L2 term for every non-bias parameter.
double add_penalty(std::span<const double> params, std::span<double> grad, std::size_t dim,
                   double l2) {
  const std::size_t stride = dim + 1;
  double penalty = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i % stride == dim) continue;
    penalty += params[i] * params[i];
    grad[i] += l2 * params[i];
  }
  return 0.5 * l2 * penalty;
}

}  // namespace

double binary_objective(const BinaryProblem& problem, std::span<const double> params,
                        std::span<double> grad) {
  const std::size_t dim = problem.dim;
  const std::size_t n = problem.targets.size();
  std::fill(grad.begin(), grad.end(), 0.0);
  const double norm = total_weight(problem.sample_weights);

  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double* z = problem.features.data() + r * dim;
    double t = params[dim];
    for (std::size_t d = 0; d < dim; ++d) t += params[d] * z[d];
    const double y = problem.targets[r];
    const double w = problem.sample_weights[r] / norm;
    loss += w * (softplus(t) - y * t);
    const double residual = w * (sigmoid(t) - y);
    for (std::size_t d = 0; d < dim; ++d) grad[d] += residual * z[d];
    grad[dim] += residual;
  }
  return loss + add_penalty(params, grad, dim, problem.l2);
}

double multinomial_objective(const MultinomialProblem& problem, std::span<const double> params,
                             std::span<double> grad) {
  const std::size_t dim = problem.dim;
  const std::size_t k_classes = problem.classes;
  const std::size_t stride = dim + 1;
  const std::size_t n = problem.labels.size();
  std::fill(grad.begin(), grad.end(), 0.0);
  const double norm = total_weight(problem.sample_weights);

  std::vector<double> t(k_classes);
  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double* z = problem.features.data() + r * dim;
    for (std::size_t k = 0; k < k_classes; ++k) {
      const double* w = params.data() + k * stride;
      double v = w[dim];
      for (std::size_t d = 0; d < dim; ++d) v += w[d] * z[d];
      t[k] = v;
    }
    const double top = *std::max_element(t.begin(), t.end());
    double sum = 0.0;
    for (double v : t) sum += std::exp(v - top);
    const double lse = top + std::log(sum);
    const std::size_t y = problem.labels[r];
    const double w = problem.sample_weights[r] / norm;
    loss += w * (lse - t[y]);
    for (std::size_t k = 0; k < k_classes; ++k) {
      const double residual = w * (std::exp(t[k] - lse) - (k == y ? 1.0 : 0.0));
      double* g = grad.data() + k * stride;
      for (std::size_t d = 0; d < dim; ++d) g[d] += residual * z[d];
      g[dim] += residual;
    }
  }
  return loss + add_penalty(params, grad, dim, problem.l2);
}

}  // namespace classim::classifiers
