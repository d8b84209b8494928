#include "classim/classifiers/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "classim/core/errors.hpp"

namespace classim::classifiers {

std::string_view to_string(ModelKind kind) noexcept {
  return kind == ModelKind::binary ? "binary" : "multinomial";
}

std::string_view to_string(ClassWeighting weighting) noexcept {
  return weighting == ClassWeighting::none ? "none" : "balanced";
}

ClassWeighting parse_class_weighting(std::string_view text) {
  if (text == "none") return ClassWeighting::none;
  if (text == "balanced") return ClassWeighting::balanced;
  throw DataError("unknown class weighting '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw DataError("learning_rate must be positive");
  }
  if (epochs < 1) {
    throw DataError("epochs must be at least 1");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) {
    throw DataError("l2 must be non-negative");
  }
}

Standardization Standardization::fit(std::span<const double> rows, std::size_t dim) {
  if (dim == 0 || rows.empty() || rows.size() % dim != 0) {
    throw DataError("cannot fit standardization on an empty or ragged feature block");
  }
  const std::size_t n = rows.size() / dim;
  Standardization st{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double v = rows[r * dim + d];
      if (!std::isfinite(v)) {
        throw DataError("non-finite feature value in training data");
      }
      st.mean[d] += v;
    }
  }
  for (double& m : st.mean) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = rows[r * dim + d] - st.mean[d];
      st.scale[d] += diff * diff;
    }
  }
  for (double& s : st.scale) {
    s = std::sqrt(s / static_cast<double>(n));
    if (!(s > 0.0)) s = 1.0;
  }
  return st;
}

Standardization Standardization::identity(std::size_t dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

void Standardization::apply(std::span<const double> x, std::span<double> out) const {
  for (std::size_t d = 0; d < mean.size(); ++d) {
    out[d] = (x[d] - mean[d]) / scale[d];
  }
}

double sigmoid(double t) noexcept {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void softmax(std::span<double> logits) noexcept {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& v : logits) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : logits) v /= sum;
}

namespace {

void check_shape(std::size_t dim, std::size_t outputs, const Standardization& st,
                 const std::vector<double>& weights) {
  if (dim == 0) {
    throw DataError("model feature dimension must be at least 1");
  }
  if (st.mean.size() != dim || st.scale.size() != dim) {
    throw DataError("standardization statistics do not match the feature dimension");
  }
  for (double s : st.scale) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw DataError("standardization scale must be positive");
    }
  }
  if (weights.size() != outputs * (dim + 1)) {
    throw DataError("model has " + std::to_string(weights.size()) + " weights, expected " +
                    std::to_string(outputs * (dim + 1)));
  }
}

}  // namespace

LinearModel LinearModel::binary(ClassLabel target, std::vector<ClassLabel> negatives,
                                Standardization standardization, std::vector<double> weights,
                                TrainConfig config) {
  LinearModel m;
  m.kind_ = ModelKind::binary;
  m.dim_ = standardization.mean.size();
  check_shape(m.dim_, 1, standardization, weights);
  if (std::find(negatives.begin(), negatives.end(), target) != negatives.end()) {
    throw DataError("target class '" + target + "' is also listed as a negative");
  }
  std::sort(negatives.begin(), negatives.end());
  m.target_ = std::move(target);
  m.negatives_ = std::move(negatives);
  m.standardization_ = std::move(standardization);
  m.weights_ = std::move(weights);
  m.config_ = config;
  return m;
}

LinearModel LinearModel::multinomial(ClassSet classes, Standardization standardization,
                                     std::vector<double> weights, TrainConfig config) {
  LinearModel m;
  m.kind_ = ModelKind::multinomial;
  m.dim_ = standardization.mean.size();
  if (classes.size() < 2) {
    throw DataError("a multinomial model needs at least two classes");
  }
  check_shape(m.dim_, classes.size(), standardization, weights);
  m.classes_ = std::move(classes);
  m.standardization_ = std::move(standardization);
  m.weights_ = std::move(weights);
  m.config_ = config;
  return m;
}

void LinearModel::check_dim(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw DataError("feature vector has dimension " + std::to_string(x.size()) +
                    ", model expects " + std::to_string(dim_));
  }
}

void LinearModel::logits(std::span<const double> x, std::span<double> out) const {
  std::vector<double> z(dim_);
  standardization_.apply(x, z);
  const std::size_t stride = dim_ + 1;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double* w = weights_.data() + k * stride;
    double t = w[dim_];
    for (std::size_t d = 0; d < dim_; ++d) t += w[d] * z[d];
    out[k] = t;
  }
}

double LinearModel::score(std::span<const double> x) const {
  if (kind_ != ModelKind::binary) {
    throw DataError("score() needs a binary model");
  }
  check_dim(x);
  double t = 0.0;
  logits(x, std::span<double>(&t, 1));
  // Keep the output in the open interval even when the logit saturates.
  constexpr double lo = std::numeric_limits<double>::min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(sigmoid(t), lo, hi);
}

std::vector<double> LinearModel::probabilities(std::span<const double> x) const {
  if (kind_ != ModelKind::multinomial) {
    throw DataError("probabilities() needs a multinomial model");
  }
  check_dim(x);
  std::vector<double> out(classes_.size());
  logits(x, out);
  softmax(out);
  return out;
}

bool LinearModel::operator==(const LinearModel& other) const {
  return kind_ == other.kind_ && target_ == other.target_ && negatives_ == other.negatives_ &&
         classes_ == other.classes_ && dim_ == other.dim_ &&
         standardization_ == other.standardization_ && weights_ == other.weights_ &&
         config_ == other.config_;
}

}  // namespace classim::classifiers
