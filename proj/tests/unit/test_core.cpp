#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "classim/core/counting.hpp"
#include "classim/core/errors.hpp"
#include "classim/core/similarity.hpp"

using namespace classim;

namespace {

LabeledFeatureSet make_set(const ClassSet& classes,
                           const std::vector<std::pair<std::string, std::string>>& id_label) {
  std::vector<Sample> samples;
  for (const auto& [id, label] : id_label) samples.push_back({id, label, {0.0}});
  return LabeledFeatureSet(classes, Split::validation, std::move(samples));
}

}  // namespace

TEST_CASE("ClassSet orders labels lexicographically and rejects bad labels") {
  ClassSet classes({"sunset", "bay", "f-16", "Beach"});
  CHECK(classes.labels() == std::vector<std::string>{"Beach", "bay", "f-16", "sunset"});
  CHECK(classes.index_of("f-16") == 2);
  CHECK_FALSE(classes.find("ocean").has_value());
  CHECK_THROWS_AS(classes.index_of("ocean"), DataError);
  CHECK_THROWS_AS(ClassSet({"a", "b", "a"}), DataError);
  CHECK_THROWS_AS(ClassSet({"a", ""}), DataError);
}

TEST_CASE("LabeledFeatureSet validates dimensions, labels and ids") {
  ClassSet classes({"a", "b"});
  CHECK_THROWS_AS(LabeledFeatureSet(classes, Split::train, {{"1", "a", {1.0}}, {"2", "b", {1.0, 2.0}}}),
                  DataError);
  CHECK_THROWS_AS(LabeledFeatureSet(classes, Split::train, {{"1", "c", {1.0}}}), DataError);
  CHECK_THROWS_AS(LabeledFeatureSet(classes, Split::train, {{"1", "a", {1.0}}, {"1", "b", {2.0}}}),
                  DataError);
  CHECK_THROWS_AS(LabeledFeatureSet(classes, Split::train, {{"1", "a", {}}}), DataError);
  LabeledFeatureSet ok(classes, Split::train, {{"1", "b", {1.0, 2.0}}, {"2", "a", {3.0, 4.0}}});
  CHECK(ok.dim() == 2);
  CHECK(ok.class_counts() == std::vector<std::size_t>{1, 1});
}

TEST_CASE("stratified split reproduces the 0.64/0.16/0.20 ratios") {
  SUBCASE("five balanced classes of 20") {
    std::vector<std::string> labels{"a", "b", "c", "d", "e"};
    std::vector<Sample> samples;
    for (int i = 0; i < 100; ++i) {
      samples.push_back({"s" + std::to_string(i), labels[i % 5], {double(i)}});
    }
    auto split = stratified_split(ClassSet(labels), samples, 7);
    CHECK(split.train.size() == 64);
    CHECK(split.validation.size() == 16);
    CHECK(split.test.size() == 20);
    for (auto n : split.test.class_counts()) CHECK(n == 4);

    auto again = stratified_split(ClassSet(labels), samples, 7);
    CHECK(again.validation.samples().front().id == split.validation.samples().front().id);
  }
  SUBCASE("single class") {
    std::vector<Sample> samples;
    for (int i = 0; i < 100; ++i) samples.push_back({std::to_string(i), "x", {0.0}});
    auto split = stratified_split(ClassSet({"x"}), samples, 1);
    CHECK(split.train.size() == 64);
    CHECK(split.validation.size() == 16);
    CHECK(split.test.size() == 20);
  }
  SUBCASE("uneven classes still hit rounded totals") {
    std::vector<Sample> samples;
    for (int i = 0; i < 37; ++i) samples.push_back({"a" + std::to_string(i), "a", {0.0}});
    for (int i = 0; i < 11; ++i) samples.push_back({"b" + std::to_string(i), "b", {0.0}});
    for (int i = 0; i < 3; ++i) samples.push_back({"c" + std::to_string(i), "c", {0.0}});
    auto split = stratified_split(ClassSet({"a", "b", "c"}), samples, 3);
    CHECK(split.test.size() == 10);        // round(51 * 0.2) = 10
    CHECK(split.validation.size() == 8);   // round(51 * 0.16) = 8
    CHECK(split.train.size() == 33);
  }
}

TEST_CASE("count_misclass_ovr follows the strict > 0.5 rule") {
  ClassSet classes({"ci", "cj"});
  auto eval = make_set(classes, {{"x1", "ci"}, {"x2", "ci"}, {"x3", "ci"}, {"y1", "cj"}});
  PredictionTable preds(classes, PredictionMode::ovr);
  const std::size_t ci = 0, cj = 1;

  SUBCASE("scores 0.7, 0.4, 0.51 count twice") {
    preds.set_ovr("x1", cj, 0.7);
    preds.set_ovr("x2", cj, 0.4);
    preds.set_ovr("x3", cj, 0.51);
    preds.set_ovr("y1", ci, 0.0);
    auto counts = count_misclass_ovr(eval, preds);
    CHECK(counts.misclassified(ci, cj) == 2);
    CHECK(counts.total(ci) == 3);
    CHECK(counts.total(cj) == 1);
  }
  SUBCASE("exactly 0.5 is not counted") {
    preds.set_ovr("x1", cj, 0.5);
    preds.set_ovr("x2", cj, 0.5);
    preds.set_ovr("x3", cj, 0.5);
    preds.set_ovr("y1", ci, 0.5);
    auto counts = count_misclass_ovr(eval, preds);
    CHECK(counts.misclassified(ci, cj) == 0);
    CHECK(counts.misclassified(cj, ci) == 0);
  }
  SUBCASE("missing score names the pair") {
    preds.set_ovr("x1", cj, 0.1);
    preds.set_ovr("x2", cj, 0.1);
    preds.set_ovr("y1", ci, 0.1);
    try {
      count_misclass_ovr(eval, preds);
      FAIL("expected an error");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("'x3', target 'cj'") != std::string::npos);
    }
  }
}

TEST_CASE("count_misclass_ovr: all-zero scores and empty classes") {
  ClassSet classes({"a", "b", "c"});
  auto eval = make_set(classes, {{"1", "a"}, {"2", "b"}, {"3", "c"}, {"4", "a"}});
  PredictionTable preds(classes, PredictionMode::ovr);
  for (const char* id : {"1", "2", "3", "4"}) {
    for (std::size_t t = 0; t < 3; ++t) preds.set_ovr(id, t, 0.0);
  }
  auto counts = count_misclass_ovr(eval, preds);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) CHECK(counts.misclassified(i, j) == 0);
    }
  }
  auto missing_c = make_set(classes, {{"1", "a"}, {"2", "b"}});
  CHECK_THROWS_AS(count_misclass_ovr(missing_c, preds), DataError);
}

TEST_CASE("count_misclass_multi uses argmax with canonical tie-breaking") {
  ClassSet classes({"ca", "cb", "ci", "cj", "ck"});
  auto eval = make_set(classes, {{"1", "ci"}, {"2", "ca"}, {"3", "cb"}, {"4", "cj"}, {"5", "ck"}});
  PredictionTable preds(classes, PredictionMode::multi);
  preds.set_multi("1", {0.0, 0.0, 0.2, 0.5, 0.3});  // ci sample -> cj
  preds.set_multi("2", {0.5, 0.5, 0.0, 0.0, 0.0});  // ca/cb tie -> ca (correct)
  preds.set_multi("3", {0.5, 0.5, 0.0, 0.0, 0.0});  // cb sample, tie -> ca
  preds.set_multi("4", {0.0, 0.0, 0.0, 1.0, 0.0});
  preds.set_multi("5", {0.0, 0.0, 0.0, 0.0, 1.0});
  auto counts = count_misclass_multi(eval, preds);
  CHECK(counts.misclassified(2, 3) == 1);
  CHECK(counts.correct(0) == 1);
  CHECK(counts.misclassified(1, 0) == 1);
  CHECK(counts.correct(3) == 1);

  CHECK_THROWS_AS(preds.set_multi("6", {0.2, 0.2, 0.2, 0.2, 0.1}), DataError);
  CHECK_THROWS_AS(preds.set_multi("7", {0.9}), DataError);
}

TEST_CASE("count_misclass_multi: identity confusion has no off-diagonal counts") {
  ClassSet classes({"a", "b", "c"});
  auto eval = make_set(classes, {{"1", "a"}, {"2", "b"}, {"3", "c"}, {"4", "c"}});
  PredictionTable preds(classes, PredictionMode::multi);
  preds.set_multi("1", {0.8, 0.1, 0.1});
  preds.set_multi("2", {0.1, 0.8, 0.1});
  preds.set_multi("3", {0.1, 0.1, 0.8});
  preds.set_multi("4", {0.0, 0.4, 0.6});
  auto counts = count_misclass_multi(eval, preds);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(counts.correct(i) == counts.total(i));
  }
}

TEST_CASE("count_misclass_pairwise shares one classifier per unordered pair") {
  ClassSet classes({"ci", "cj"});
  auto eval = make_set(classes, {{"i1", "ci"}, {"i2", "ci"}, {"j1", "cj"}, {"j2", "cj"}});
  auto table = [&](double i1, double i2, double j1, double j2) {
    PredictionTable preds(classes, PredictionMode::pairwise);
    preds.set_pairwise("i1", 0, 1, i1);
    preds.set_pairwise("i2", 0, 1, i2);
    preds.set_pairwise("j1", 0, 1, j1);
    preds.set_pairwise("j2", 0, 1, j2);
    return preds;
  };
  auto pc = count_misclass_pairwise(eval, table(0.9, 0.1, 0.6, 0.4), "ci", "cj");
  CHECK(pc.second_given_first == 1);
  CHECK(pc.first_given_second == 1);

  pc = count_misclass_pairwise(eval, table(0.0, 0.0, 1.0, 1.0), "ci", "cj");
  CHECK(pc.second_given_first == 0);
  CHECK(pc.first_given_second == 0);

  pc = count_misclass_pairwise(eval, table(1.0, 1.0, 0.0, 0.0), "ci", "cj");
  CHECK(pc.second_given_first == 2);
  CHECK(pc.first_given_second == 2);

  // Asking for the reversed pair swaps the directions.
  pc = count_misclass_pairwise(eval, table(0.9, 0.8, 0.6, 0.4), "cj", "ci");
  CHECK(pc.second_given_first == 1);
  CHECK(pc.first_given_second == 2);

  CHECK_THROWS_AS(count_misclass_pairwise(eval, table(0, 0, 1, 1), "ci", "ci"), DataError);
}

TEST_CASE("class_sim arithmetic") {
  ClassSet classes({"ci", "cj"});
  ConfusionCounts counts(classes, PredictionMode::ovr);
  counts.set_total(0, 10);
  counts.set_total(1, 20);

  counts.set_misclassified(0, 1, 2);
  counts.set_misclassified(1, 0, 4);
  CHECK(class_sim(counts, "ci", "cj") == doctest::Approx(0.2).epsilon(1e-15));

  counts.set_misclassified(0, 1, 0);
  counts.set_misclassified(1, 0, 0);
  CHECK(class_sim(counts, 0, 1) == 0.0);

  counts.set_misclassified(0, 1, 10);
  counts.set_misclassified(1, 0, 20);
  CHECK(class_sim(counts, 0, 1) == 1.0);

  ConfusionCounts empty(classes, PredictionMode::ovr);
  empty.set_total(0, 3);
  CHECK_THROWS_AS(class_sim(empty, 0, 1), DataError);
}

TEST_CASE("similarity_matrix mirrors pairs and fixes the diagonal") {
  ClassSet classes({"ci", "cj"});
  ConfusionCounts counts(classes, PredictionMode::ovr);
  counts.set_total(0, 10);
  counts.set_total(1, 20);
  counts.set_misclassified(0, 1, 2);
  counts.set_misclassified(1, 0, 4);
  auto m = similarity_matrix(counts);
  CHECK(m.at(0, 1) == doctest::Approx(0.2));
  CHECK(m.at(0, 1) == m.at(1, 0));
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(1, 1) == 1.0);
}

TEST_CASE("a 16-class matrix has 120 distinct off-diagonal entries") {
  std::vector<std::string> labels;
  for (int c = 0; c < 16; ++c) labels.push_back("class" + std::to_string(100 + c));
  ClassSet classes(labels);
  ConfusionCounts counts(classes, PredictionMode::ovr);
  std::mt19937_64 rng(16);
  for (std::size_t i = 0; i < 16; ++i) counts.set_total(i, 100000);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      if (i != j) counts.set_misclassified(i, j, rng() % 100000);
    }
  }
  auto m = similarity_matrix(counts);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::set<double> values;
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = i + 1; j < 16; ++j) {
      pairs.insert({i, j});
      values.insert(m.at(i, j));
    }
  }
  CHECK(pairs.size() == 120);
  CHECK(values.size() == 120);
}

TEST_CASE("top_k ordering, ties and formatting") {
  ClassSet classes({"bay", "beach", "city", "mountain", "ocean"});
  const std::size_t n = classes.size();
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto set = [&](std::size_t i, std::size_t j, double s) { v[i * n + j] = v[j * n + i] = s; };
  set(0, 1, 0.626);
  set(0, 4, 0.320);
  set(0, 2, 0.301);
  set(0, 3, 0.188);
  SimilarityMatrix m(classes, v);

  auto top = top_k(m, "bay", 3);
  REQUIRE(top.size() == 3);
  CHECK(format_ranked(top[0]) == "beach:0.626");
  CHECK(format_ranked(top[1]) == "ocean:0.320");
  CHECK(format_ranked(top[2]) == "city:0.301");

  // beach's row is zero apart from bay; zeros come out in lexicographic order.
  auto zeros = top_k(m, "city", 2);
  CHECK(format_ranked(zeros[0]) == "bay:0.301");
  CHECK(format_ranked(zeros[1]) == "beach:0.000");
  auto all_zero_row = top_k(SimilarityMatrix(ClassSet({"x", "y", "z"}),
                                             {1, 0, 0, 0, 1, 0, 0, 0, 1}),
                            "y", 2);
  CHECK(format_ranked(all_zero_row[0]) == "x:0.000");
  CHECK(format_ranked(all_zero_row[1]) == "z:0.000");

  auto tied = top_k(SimilarityMatrix(ClassSet({"p", "q", "r"}), {1, .5, .5, .5, 1, 0, .5, 0, 1}),
                    "p", 2);
  CHECK(tied[0].label == "q");
  CHECK(tied[1].label == "r");

  CHECK_THROWS_AS(top_k(m, "sky", 1), DataError);
  CHECK_THROWS_AS(top_k(m, "bay", 0), DataError);
  CHECK_THROWS_AS(top_k(m, "bay", 5), DataError);
}

TEST_CASE("format_score3 rounds half to even on exact binary values") {
  CHECK(format_score3(0.0625) == "0.062");
  CHECK(format_score3(0.1875) == "0.188");
  CHECK(format_score3(0.3125) == "0.312");
  CHECK(format_score3(0.6875) == "0.688");
  CHECK(format_score3(1.0) == "1.000");
  CHECK(format_score3(0.0) == "0.000");
}

TEST_CASE("SimilarityMatrix rejects asymmetric, out-of-range or bad-diagonal input") {
  ClassSet classes({"a", "b"});
  CHECK_THROWS_AS(SimilarityMatrix(classes, {1, 0.2, 0.3, 1}), DataError);
  CHECK_THROWS_AS(SimilarityMatrix(classes, {1, 1.2, 1.2, 1}), DataError);
  CHECK_THROWS_AS(SimilarityMatrix(classes, {0.9, 0.2, 0.2, 1}), DataError);
  CHECK_THROWS_AS(SimilarityMatrix(classes, {1, 0.2, 0.2}), DataError);
}

// Property suite over random count tables.

namespace {

ConfusionCounts random_counts(std::mt19937_64& rng, std::size_t n_classes) {
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < n_classes; ++c) labels.push_back("c" + std::to_string(c));
  ConfusionCounts counts(ClassSet(labels), PredictionMode::ovr);
  for (std::size_t i = 0; i < n_classes; ++i) {
    const std::uint64_t total = 1 + rng() % 5000;
    counts.set_total(i, total);
    for (std::size_t j = 0; j < n_classes; ++j) {
      if (i != j) counts.set_misclassified(i, j, rng() % (total + 1));
    }
  }
  counts.validate();
  return counts;
}

}  // namespace

TEST_CASE("property: ClassSim is bit-symmetric, bounded and monotone") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    auto counts = random_counts(rng, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double s = class_sim(counts, i, j);
        CHECK(s == class_sim(counts, j, i));
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        // Raising either count (denominators fixed) never lowers the value.
        ConfusionCounts bumped = counts;
        const auto cur = counts.misclassified(i, j);
        if (cur < counts.total(i)) {
          bumped.set_misclassified(i, j, cur + 1 + rng() % (counts.total(i) - cur));
          CHECK(class_sim(bumped, i, j) >= s);
          CHECK(class_sim(bumped, j, i) >= s);
        }
      }
    }
  }
}

TEST_CASE("property: multi-mode counts partition every class") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    std::vector<std::string> labels;
    for (std::size_t c = 0; c < n; ++c) labels.push_back("k" + std::to_string(c));
    ClassSet classes(labels);
    std::vector<Sample> samples;
    PredictionTable preds(classes, PredictionMode::multi);
    const std::size_t n_samples = n * (3 + rng() % 30);
    for (std::size_t s = 0; s < n_samples; ++s) {
      const std::string id = "s" + std::to_string(s);
      samples.push_back({id, labels[s % n], {0.0}});
      std::vector<double> p(n);
      double sum = 0.0;
      for (double& v : p) {
        v = double(rng() % 4);  // small integers produce frequent ties
        sum += v;
      }
      if (sum == 0.0) {
        p.assign(n, 1.0);
        sum = double(n);
      }
      for (double& v : p) v /= sum;
      double total = 0.0;
      for (double v : p) total += v;
      p.back() += 1.0 - total;  // exact renormalization stays within tolerance
      if (p.back() < 0.0) p.back() = 0.0;
      preds.set_multi(id, p);
    }
    LabeledFeatureSet eval(classes, Split::validation, samples);
    auto counts = count_misclass_multi(eval, preds);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t row = counts.correct(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) row += counts.misclassified(i, j);
      }
      CHECK(row == counts.total(i));
    }
  }
}

TEST_CASE("property: relabeling permutes the matrix and sample order is irrelevant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng() % 4;
    std::vector<std::string> labels, renamed;
    for (std::size_t c = 0; c < n; ++c) {
      labels.push_back("a" + std::to_string(c));
      // Reversed lexicographic order after renaming.
      renamed.push_back("z" + std::to_string(n - c));
    }
    std::vector<Sample> samples;
    std::vector<std::vector<double>> scores;
    for (std::size_t s = 0; s < 40 * n; ++s) {
      samples.push_back({"s" + std::to_string(s), labels[s % n], {0.0}});
      std::vector<double> row(n);
      for (double& v : row) v = double(rng() % 1001) / 1000.0;
      scores.push_back(row);
    }
    auto build = [&](const std::vector<std::string>& names, std::vector<std::size_t> order) {
      ClassSet classes(names);
      std::vector<Sample> reordered;
      PredictionTable preds(classes, PredictionMode::ovr);
      for (std::size_t k : order) {
        Sample s = samples[k];
        const std::size_t original = std::stoul(s.label.substr(1));
        s.label = names[original];
        reordered.push_back(s);
        for (std::size_t c = 0; c < n; ++c) {
          preds.set_ovr(s.id, classes.index_of(names[c]), scores[k][c]);
        }
      }
      LabeledFeatureSet eval(classes, Split::validation, reordered);
      return similarity_matrix(count_misclass_ovr(eval, preds));
    };
    std::vector<std::size_t> order(samples.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    auto base = build(labels, order);
    std::shuffle(order.begin(), order.end(), rng);
    auto shuffled = build(labels, order);
    CHECK(base.values() == shuffled.values());
    for (std::size_t c = 0; c < n; ++c) {
      auto a = top_k(base, labels[c], n - 1);
      auto b = top_k(shuffled, labels[c], n - 1);
      for (std::size_t r = 0; r < a.size(); ++r) CHECK(format_ranked(a[r]) == format_ranked(b[r]));
    }
    auto relabeled = build(renamed, order);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(relabeled.at(renamed[i], renamed[j]) == base.at(labels[i], labels[j]));
      }
    }
  }
}
