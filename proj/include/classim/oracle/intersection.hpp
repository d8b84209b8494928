#pragma once

#include <string_view>

#include "classim/oracle/scenario.hpp"

namespace classim::oracle {

/// Absolute accuracy targeted by the numerical integration path.
inline constexpr double kQuadratureTolerance = 1e-8;

/// Standard normal CDF.
double normal_cdf(double z);

/// Integral of min(p_a, p_b) for 1-D Gaussians of equal variance:
/// 2 * Phi(-|mu_a - mu_b| / (2 sigma)). Throws DataError for other shapes.
double intersection_closed_form(const GaussianDensity& a, const GaussianDensity& b);

/// Integral of min(p_a, p_b) by adaptive Gauss-Kronrod quadrature, split at the
/// points where the densities cross. Works for 1-D and axis-aligned 2-D; in 2-D
/// the inner integral over the second axis is evaluated analytically.
double intersection_quadrature(const GaussianDensity& a, const GaussianDensity& b);

/// Sum over the joint support of min(p_a(x), p_b(x)).
double intersection_discrete(const DiscreteDensity& a, const DiscreteDensity& b);

/// Exact overlap area of two class-conditional densities. Uses the closed form
/// whenever it applies, otherwise quadrature; discrete pairs are summed.
/// Throws DataError for a Gaussian paired with a discrete density.
double exact_intersection(const Density& a, const Density& b);
double exact_intersection(const Scenario& scenario, std::string_view ci, std::string_view cj);

}  // namespace classim::oracle
