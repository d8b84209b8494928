#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "classim/classifiers/linear_model.hpp"
#include "classim/core/class_set.hpp"
#include "classim/oracle/scenario.hpp"

namespace classim::oracle {

enum class ValidationMode { ideal, ovr, multi };

std::string_view to_string(ValidationMode mode) noexcept;
ValidationMode parse_validation_mode(std::string_view text);

struct PairValidation {
  ClassLabel first;
  ClassLabel second;
  std::uint64_t n_first = 0;
  std::uint64_t n_second = 0;
  std::uint64_t second_given_first = 0;  // N_{c_j|c_i}
  std::uint64_t first_given_second = 0;  // N_{c_i|c_j}
  double class_sim = 0.0;
  double empirical = 0.0;  // 2 * ClassSim, comparable with the overlap area
  double exact = 0.0;
  double deviation = 0.0;  // empirical - exact
  /// 3 * sqrt(p1(1-p1)/N_i + p2(1-p2)/N_j) with p1, p2 the two observed ratios.
  double se_bound = 0.0;
  bool equal_priors = true;
  /// |deviation| <= se_bound plus the area's numerical tolerance. Only meaningful
  /// with equal priors; no bound is claimed otherwise.
  bool within_bound = false;
};

struct ValidationReport {
  ValidationMode mode = ValidationMode::ideal;
  std::size_t evaluated_samples = 0;
  std::vector<PairValidation> pairs;  // canonical (i < j) order

  const PairValidation& pair(std::string_view a, std::string_view b) const;
};

/// Samples the scenario, classifies with the ideal Bayes rule (all samples) or
/// with trained linear models (train split for fitting, validation split for
/// counting), and compares 2 * ClassSim with the exact overlap for every pair.
/// In ideal mode each pair is scored by one shared Bayes classifier, so both
/// directions of a pair use the same decision boundary.
ValidationReport validate_classim(const Scenario& scenario, ValidationMode mode,
                                  const classifiers::TrainConfig& config = {},
                                  unsigned threads = 1);

/// Absolute slack added to the statistical bound for the area's numerical error.
inline constexpr double kAreaSlack = 1e-6;

}  // namespace classim::oracle
