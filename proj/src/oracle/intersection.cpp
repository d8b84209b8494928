#include "classim/oracle/intersection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "classim/core/errors.hpp"

namespace classim::oracle {

namespace {

constexpr double kRangeSigmas = 12.0;
constexpr unsigned kMaxDepth = 15;
constexpr double kRelativeTolerance = 1e-11;

double log_normal_1d(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (d * d / var + std::log(2.0 * std::numbers::pi * var));
}

// Roots in (lo, hi) of log N(y; ma, va) + shift = log N(y; mb, vb).
std::vector<double> crossings(double ma, double va, double mb, double vb, double shift,
                              double lo, double hi) {
  // (y-ma)^2/va - (y-mb)^2/vb + log(va/vb) - 2 shift = 0
  const double a = 1.0 / va - 1.0 / vb;
  const double b = -2.0 * (ma / va - mb / vb);
  const double c = ma * ma / va - mb * mb / vb + std::log(va / vb) - 2.0 * shift;
  std::vector<double> roots;
  if (std::abs(a) <= 1e-14 * std::max(1.0 / va, 1.0 / vb)) {
    if (b != 0.0) roots.push_back(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc > 0.0) {
      // Numerically stable pair of roots.
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      roots.push_back(q / a);
      if (q != 0.0) roots.push_back(c / q);
    }
  }
  std::erase_if(roots, [&](double r) { return !(r > lo && r < hi); });
  std::sort(roots.begin(), roots.end());
  return roots;
}

template <class F>
double integrate_pieces(F f, double lo, double hi, const std::vector<double>& cuts) {
  double total = 0.0;
  double left = lo;
  auto piece = [&](double a, double b) {
    if (b <= a) return;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, kMaxDepth, kRelativeTolerance, &err);
  };
  for (double cut : cuts) {
    piece(left, cut);
    left = cut;
  }
  piece(left, hi);
  return total;
}

std::pair<double, double> span_of(const GaussianDensity& a, const GaussianDensity& b,
                                  std::size_t d) {
  const double sa = std::sqrt(a.variance[d]);
  const double sb = std::sqrt(b.variance[d]);
  return {std::min(a.mean[d] - kRangeSigmas * sa, b.mean[d] - kRangeSigmas * sb),
          std::max(a.mean[d] + kRangeSigmas * sa, b.mean[d] + kRangeSigmas * sb)};
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

namespace {

// P(lo < Y < hi) for Y ~ N(mean, var), using whichever tail keeps precision.
double normal_mass(double lo, double hi, double mean, double var) {
  const double s = std::sqrt(var);
  const double zl = (lo - mean) / s, zh = (hi - mean) / s;
  if (zl > 0.0) return normal_cdf(-zl) - normal_cdf(-zh);
  return normal_cdf(zh) - normal_cdf(zl);
}

}  // namespace

double intersection_closed_form(const GaussianDensity& a, const GaussianDensity& b) {
  if (a.mean.size() != 1 || b.mean.size() != 1 || a.variance[0] != b.variance[0]) {
    throw DataError("closed-form overlap needs 1-D Gaussians of equal variance");
  }
  const double sigma = std::sqrt(a.variance[0]);
  return 2.0 * normal_cdf(-std::abs(a.mean[0] - b.mean[0]) / (2.0 * sigma));
}

double intersection_quadrature(const GaussianDensity& a, const GaussianDensity& b) {
  if (a.mean.size() != b.mean.size() || a.mean.empty() || a.mean.size() > 2) {
    throw DataError("quadrature overlap needs two Gaussians of the same dimension (1 or 2)");
  }
  const auto [xlo, xhi] = span_of(a, b, 0);
  const double ma0 = a.mean[0], va0 = a.variance[0], mb0 = b.mean[0], vb0 = b.variance[0];

  if (a.mean.size() == 1) {
    auto f = [&](double x) {
      return std::exp(std::min(log_normal_1d(x, ma0, va0), log_normal_1d(x, mb0, vb0)));
    };
    return integrate_pieces(f, xlo, xhi, crossings(ma0, va0, mb0, vb0, 0.0, xlo, xhi));
  }

  const double ma1 = a.mean[1], va1 = a.variance[1], mb1 = b.mean[1], vb1 = b.variance[1];
  // For fixed x both densities are scaled normals in y, so the inner integral of
  // their minimum is a sum of normal CDF differences between crossing points.
  auto outer = [&](double x) {
    const double la = log_normal_1d(x, ma0, va0);
    const double lb = log_normal_1d(x, mb0, vb0);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cuts{-inf};
    for (double r : crossings(ma1, va1, mb1, vb1, la - lb, -inf, inf)) cuts.push_back(r);
    cuts.push_back(inf);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double lo = cuts[k], hi = cuts[k + 1];
      const double probe = std::isinf(lo) ? (std::isinf(hi) ? 0.0 : hi - 1.0)
                                          : (std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi));
      const bool a_lower = la + log_normal_1d(probe, ma1, va1) <= lb + log_normal_1d(probe, mb1, vb1);
      total += a_lower ? std::exp(la) * normal_mass(lo, hi, ma1, va1)
                       : std::exp(lb) * normal_mass(lo, hi, mb1, vb1);
    }
    return total;
  };
  return integrate_pieces(outer, xlo, xhi, crossings(ma0, va0, mb0, vb0, 0.0, xlo, xhi));
}

double intersection_discrete(const DiscreteDensity& a, const DiscreteDensity& b) {
  std::map<std::vector<double>, double> mass_b;
  for (std::size_t k = 0; k < b.support.size(); ++k) mass_b[b.support[k]] = b.probabilities[k];
  double total = 0.0;
  for (std::size_t k = 0; k < a.support.size(); ++k) {
    auto it = mass_b.find(a.support[k]);
    if (it != mass_b.end()) total += std::min(a.probabilities[k], it->second);
  }
  return total;
}

double exact_intersection(const Density& a, const Density& b) {
  const auto* ga = std::get_if<GaussianDensity>(&a);
  const auto* gb = std::get_if<GaussianDensity>(&b);
  if (ga && gb) {
    if (ga->mean.size() == 1 && gb->mean.size() == 1 && ga->variance[0] == gb->variance[0]) {
      return intersection_closed_form(*ga, *gb);
    }
    return intersection_quadrature(*ga, *gb);
  }
  const auto* da = std::get_if<DiscreteDensity>(&a);
  const auto* db = std::get_if<DiscreteDensity>(&b);
  if (da && db) {
    return intersection_discrete(*da, *db);
  }
  throw DataError("overlap between a Gaussian and a discrete density is not defined");
}

double exact_intersection(const Scenario& scenario, std::string_view ci, std::string_view cj) {
  return exact_intersection(scenario.density(ci), scenario.density(cj));
}

}  // namespace classim::oracle
