#include "classim/oracle/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "classim/core/errors.hpp"

namespace classim::oracle {

std::size_t dimension(const Density& density) {
  if (const auto* g = std::get_if<GaussianDensity>(&density)) {
    return g->mean.size();
  }
  const auto& d = std::get<DiscreteDensity>(density);
  return d.support.empty() ? 0 : d.support.front().size();
}

double log_density(const Density& density, std::span<const double> x) {
  if (const auto* g = std::get_if<GaussianDensity>(&density)) {
    double acc = 0.0;
    for (std::size_t d = 0; d < g->mean.size(); ++d) {
      const double diff = x[d] - g->mean[d];
      acc += diff * diff / g->variance[d] + std::log(2.0 * std::numbers::pi * g->variance[d]);
    }
    return -0.5 * acc;
  }
  const auto& disc = std::get<DiscreteDensity>(density);
  for (std::size_t k = 0; k < disc.support.size(); ++k) {
    if (std::equal(disc.support[k].begin(), disc.support[k].end(), x.begin(), x.end())) {
      return std::log(disc.probabilities[k]);
    }
  }
  return -std::numeric_limits<double>::infinity();
}

std::vector<double> posterior(const Scenario& scenario, std::span<const double> x) {
  const std::size_t n = scenario.classes.size();
  std::vector<double> logp(n);
  for (std::size_t c = 0; c < n; ++c) {
    logp[c] = log_density(scenario.densities[c], x) + std::log(scenario.priors[c]);
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  if (!std::isfinite(top)) {
    throw DataError("point has zero density under every class");
  }
  double sum = 0.0;
  for (double& v : logp) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : logp) v /= sum;
  return logp;
}

Scenario Scenario::create(std::map<ClassLabel, Density> components,
                          std::map<ClassLabel, double> priors, std::uint64_t seed,
                          std::size_t samples_per_class) {
  std::vector<ClassLabel> labels;
  for (const auto& [label, density] : components) labels.push_back(label);
  Scenario s;
  s.classes = ClassSet(labels);
  for (const ClassLabel& label : s.classes.labels()) {
    s.densities.push_back(components.at(label));
    if (priors.empty()) {
      s.priors.push_back(1.0 / static_cast<double>(labels.size()));
    } else {
      auto it = priors.find(label);
      if (it == priors.end()) {
        throw DataError("no prior given for class '" + label + "'");
      }
      s.priors.push_back(it->second);
    }
  }
  for (const auto& [label, p] : priors) {
    if (!s.classes.contains(label)) {
      throw DataError("prior given for unknown class '" + label + "'");
    }
  }
  s.seed = seed;
  s.samples_per_class = samples_per_class;
  s.validate();
  return s;
}

void Scenario::validate() const {
  const std::size_t n = classes.size();
  if (n < 2) {
    throw DataError("a scenario needs at least two classes");
  }
  if (densities.size() != n || priors.size() != n) {
    throw DataError("scenario densities and priors must cover every class");
  }
  if (samples_per_class == 0) {
    throw DataError("samples_per_class must be positive");
  }
  if (!(annotation_noise >= 0.0 && annotation_noise <= 1.0)) {
    throw DataError("annotation_noise must lie in [0,1]");
  }
  double prior_sum = 0.0;
  for (double p : priors) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw DataError("class priors must be positive");
    }
    prior_sum += p;
  }
  if (std::abs(prior_sum - 1.0) > kMassTolerance) {
    throw DataError("class priors must sum to 1");
  }

  const std::size_t dim0 = dimension(densities.front());
  for (std::size_t c = 0; c < n; ++c) {
    const std::string& label = classes.label(c);
    if (densities[c].index() != densities.front().index()) {
      throw DataError("class '" + label + "': Gaussian and discrete classes cannot be mixed");
    }
    if (dimension(densities[c]) != dim0 || dim0 == 0) {
      throw DataError("density of class '" + label + "' has an inconsistent dimension");
    }
    if (const auto* g = std::get_if<GaussianDensity>(&densities[c])) {
      if (g->variance.size() != g->mean.size()) {
        throw DataError("class '" + label + "': mean and variance lengths differ");
      }
      if (g->mean.size() > 2) {
        throw DataError("class '" + label + "': Gaussian densities are limited to 1 or 2 dimensions");
      }
      for (double v : g->variance) {
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw DataError("class '" + label + "': variances must be positive");
        }
      }
      for (double m : g->mean) {
        if (!std::isfinite(m)) throw DataError("class '" + label + "': non-finite mean");
      }
    } else {
      const auto& d = std::get<DiscreteDensity>(densities[c]);
      if (d.support.size() != d.probabilities.size() || d.support.empty()) {
        throw DataError("class '" + label + "': support and probabilities must match in length");
      }
      std::set<std::vector<double>> seen;
      double mass = 0.0;
      for (std::size_t k = 0; k < d.support.size(); ++k) {
        if (d.support[k].size() != dim0) {
          throw DataError("class '" + label + "': support points have inconsistent dimension");
        }
        if (!seen.insert(d.support[k]).second) {
          throw DataError("class '" + label + "': duplicate support point");
        }
        if (!(d.probabilities[k] >= 0.0)) {
          throw DataError("class '" + label + "': negative probability");
        }
        mass += d.probabilities[k];
      }
      if (std::abs(mass - 1.0) > kMassTolerance) {
        throw DataError("class '" + label + "': discrete probabilities must sum to 1");
      }
    }
  }
}

std::size_t Scenario::dim() const {
  return densities.empty() ? 0 : dimension(densities.front());
}

const Density& Scenario::density(std::string_view label) const {
  return densities.at(classes.index_of(label));
}

}  // namespace classim::oracle
