#include "classim/oracle/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "classim/core/parallel.hpp"

namespace classim::oracle {

namespace {

constexpr std::uint32_t kNoiseStream = 0x6e6f6973;

std::mt19937_64 class_engine(std::uint64_t seed, std::size_t cls, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(cls), stream};
  return std::mt19937_64(seq);
}

std::vector<double> draw(const Density& density, std::mt19937_64& rng) {
  if (const auto* g = std::get_if<GaussianDensity>(&density)) {
    std::vector<double> x(g->mean.size());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t d = 0; d < x.size(); ++d) {
      x[d] = g->mean[d] + std::sqrt(g->variance[d]) * normal(rng);
    }
    return x;
  }
  const auto& disc = std::get<DiscreteDensity>(density);
  std::discrete_distribution<std::size_t> pick(disc.probabilities.begin(),
                                               disc.probabilities.end());
  return disc.support[pick(rng)];
}

}  // namespace

double ideal_binary_score(const Scenario& scenario, std::size_t i, std::size_t j,
                          std::span<const double> x) {
  const double li = log_density(scenario.densities.at(i), x) + std::log(scenario.priors[i]);
  const double lj = log_density(scenario.densities.at(j), x) + std::log(scenario.priors[j]);
  return lj > li ? 1.0 : 0.0;
}

std::vector<std::size_t> sample_counts(const Scenario& scenario) {
  const std::size_t n = scenario.classes.size();
  if (scenario.sampling == SamplingScheme::per_class) {
    return std::vector<std::size_t>(n, scenario.samples_per_class);
  }
  const std::size_t total = scenario.samples_per_class * n;
  std::vector<std::size_t> counts(n);
  std::vector<double> remainder(n);
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const double exact = scenario.priors[c] * static_cast<double>(total);
    counts[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - static_cast<double>(counts[c]);
    assigned += counts[c];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) {
    ++counts[order[k % n]];
  }
  return counts;
}

LabeledFeatureSet sample(const Scenario& scenario, unsigned threads) {
  scenario.validate();
  const std::size_t n = scenario.classes.size();
  const auto counts = sample_counts(scenario);
  std::vector<std::vector<Sample>> per_class(n);

  parallel_for(n, threads, [&](std::size_t c) {
    auto rng = class_engine(scenario.seed, c, 0);
    auto noise_rng = class_engine(scenario.seed, c, kNoiseStream);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::string& latent = scenario.classes.label(c);
    auto& out = per_class[c];
    out.reserve(counts[c]);
    for (std::size_t k = 0; k < counts[c]; ++k) {
      Sample s{latent + "#" + std::to_string(k), latent, draw(scenario.densities[c], rng)};
      if (scenario.annotation_noise > 0.0 && unit(noise_rng) < scenario.annotation_noise) {
        const auto post = posterior(scenario, s.features);
        std::discrete_distribution<std::size_t> relabel(post.begin(), post.end());
        s.label = scenario.classes.label(relabel(noise_rng));
      }
      out.push_back(std::move(s));
    }
  });

  std::vector<Sample> all;
  for (auto& part : per_class) {
    std::move(part.begin(), part.end(), std::back_inserter(all));
  }
  return LabeledFeatureSet(scenario.classes, Split::train, std::move(all));
}

SplitDataset sample_split(const Scenario& scenario, unsigned threads) {
  LabeledFeatureSet drawn = sample(scenario, threads);
  return stratified_split(scenario.classes, drawn.samples(), scenario.seed);
}

}  // namespace classim::oracle
