#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "classim/core/class_set.hpp"

namespace classim::oracle {

/// Axis-aligned Gaussian in 1 or 2 dimensions.
struct GaussianDensity {
  std::vector<double> mean;
  std::vector<double> variance;
};

/// Probability mass on a finite set of points.
struct DiscreteDensity {
  std::vector<std::vector<double>> support;
  std::vector<double> probabilities;
};

using Density = std::variant<GaussianDensity, DiscreteDensity>;

enum class SamplingScheme { per_class, prior_proportional };

/// A generative model with known class-conditional densities p(x|c) and priors p(c).
struct Scenario {
  ClassSet classes;
  std::vector<Density> densities;  // canonical class order
  std::vector<double> priors;      // canonical class order
  std::uint64_t seed = 0;
  std::size_t samples_per_class = 1000;
  SamplingScheme sampling = SamplingScheme::per_class;
  /// Probability that an annotated label is redrawn from p(c|x).
  double annotation_noise = 0.0;

  /// Builds a scenario; empty `priors` means uniform. Validates the result.
  static Scenario create(std::map<ClassLabel, Density> components,
                         std::map<ClassLabel, double> priors, std::uint64_t seed,
                         std::size_t samples_per_class);

  /// Throws DataError unless priors and discrete masses sum to 1 within 1e-12,
  /// variances are positive and every density has the same dimension.
  void validate() const;

  std::size_t dim() const;
  const Density& density(std::string_view label) const;
  bool equal_priors(std::size_t i, std::size_t j) const { return priors.at(i) == priors.at(j); }
};

inline constexpr double kMassTolerance = 1e-12;

std::size_t dimension(const Density& density);

/// log p(x|c); -infinity outside a discrete support.
double log_density(const Density& density, std::span<const double> x);

/// p(c|x) over all classes by Bayes' rule, canonical order.
std::vector<double> posterior(const Scenario& scenario, std::span<const double> x);

}  // namespace classim::oracle
