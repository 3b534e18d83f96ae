#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "relcomp/analysis.hpp"
#include "relcomp/errors.hpp"
#include "relcomp/random.hpp"
#include "test_util.hpp"

using namespace relcomp;

namespace {

EvalOptions raw_options() {
  EvalOptions opt;
  opt.normalize_inputs = false;
  return opt;
}

}  // namespace

TEST_CASE("sparsity counts entries at or below epsilon") {
  CHECK(sparsity(Vec{0.0, 0.005, 0.5, -0.001}, 0.01) == 0.75);
  CHECK(sparsity(Vec{0.0, 0.0, 0.0}, 0.0) == 1.0);
  CHECK(sparsity(Vec{0.0, 0.0, 0.0}, 123.0) == 1.0);
  CHECK(sparsity(Vec{0.3, -0.2, 1.0}, 0.0) == 0.0);
  CHECK_THROWS_AS(sparsity(Vec{}, 0.1), DataError);
  CHECK_THROWS_AS(sparsity(Vec{1.0}, -0.1), DataError);
}

TEST_CASE("sparsity is monotone in epsilon") {
  Rng rng(64);
  Vec v(50);
  for (double& x : v) x = standard_normal(rng);
  v[3] = 0.0;
  double prev = -1.0;
  for (double eps : {0.0, 0.01, 0.1, 0.5, 1.0, 3.0}) {
    const double s = sparsity(v, eps);
    CHECK(s >= prev);
    prev = s;
  }
}

TEST_CASE("average_sparsity on a single constructed pair") {
  // PairDiff of (1,0) and (1,1) is (0,1): one exact zero of two entries.
  const EmbeddingStore store = testutil::make_store({"a", "b"}, {{1, 0}, {1, 1}});
  const SparsityCurve curve =
      average_sparsity({{"a", "b"}}, store, RelationOperator::PairDiff, {0.0},
                       raw_options());
  REQUIRE(curve.values.size() == 1);
  CHECK(curve.values[0] == 0.5);

  const SparsityCurve doubled = average_sparsity(
      {{"a", "b"}, {"a", "b"}, {"a", "b"}}, store, RelationOperator::PairDiff,
      {0.0}, raw_options());
  CHECK(doubled.values[0] == 0.5);  // duplicates do not move the mean

  CHECK_THROWS_AS(average_sparsity({{"x", "y"}}, store,
                                   RelationOperator::PairDiff, {0.0},
                                   raw_options()),
                  DataError);
}

TEST_CASE("mult dominates the sparsity curves on sparse random pairs") {
  Rng rng(140);
  const std::size_t dim = 300;
  std::vector<std::string> vocab;
  std::vector<std::vector<double>> rows;
  TokenPairList pairs;
  for (int i = 0; i < 140; ++i) {
    for (const char* side : {"l", "r"}) {
      std::vector<double> v(dim);
      for (double& x : v) {
        x = uniform01(rng) < 0.3 ? 0.0 : uniform_range(rng, -1.0, 1.0);
      }
      vocab.push_back(std::string(side) + std::to_string(i));
      rows.push_back(std::move(v));
    }
    pairs.emplace_back("l" + std::to_string(i), "r" + std::to_string(i));
  }
  const EmbeddingStore store = testutil::make_store(vocab, rows);

  std::map<RelationOperator, SparsityCurve> curves;
  for (RelationOperator op : kAllOperators) {
    curves[op] = average_sparsity(pairs, store, op, default_epsilon_grid(),
                                  raw_options());
  }
  const auto& mult = curves.at(RelationOperator::Mult);
  for (RelationOperator other : {RelationOperator::PairDiff,
                                 RelationOperator::Concat,
                                 RelationOperator::Add}) {
    for (std::size_t e = 0; e < mult.values.size(); ++e) {
      CHECK(mult.values[e] > curves.at(other).values[e]);
    }
  }

  // At eps 0, Mult's zero set contains each input's zero set.
  const auto a = store.lookup("l0");
  const auto b = store.lookup("r0");
  const Vec ab = compose(RelationOperator::Mult, a, b);
  CHECK(sparsity(ab, 0.0) >= std::max(sparsity(a, 0.0), sparsity(b, 0.0)));

  const std::string csv = sparsity_curves_csv(curves);
  CHECK(csv.rfind("operator,epsilon,mean_sparsity\n", 0) == 0);
  CHECK(csv.find("mult,0.2,") != std::string::npos);
}

TEST_CASE("average_norm worked examples and oracle equality") {
  const EmbeddingStore store = testutil::make_store(
      {"w", "x", "y"}, {{0.4, -0.3}, {1, 0}, {0, 1}});
  CHECK(average_norm({{"w", "w"}}, store, RelationOperator::PairDiff,
                     raw_options()) == 0.0);
  CHECK(average_norm({{"x", "y"}}, store, RelationOperator::Mult,
                     raw_options()) == 0.0);

  Rng rng(1000);
  const std::size_t dim = 16;
  std::vector<std::string> vocab;
  std::vector<std::vector<double>> rows;
  TokenPairList pairs;
  for (int i = 0; i < 100; ++i) {
    for (const char* side : {"p", "q"}) {
      std::vector<double> v(dim);
      for (double& x : v) x = standard_normal(rng);
      double n = 0.0;
      for (double x : v) n += x * x;
      for (double& x : v) x /= std::sqrt(n);
      vocab.push_back(std::string(side) + std::to_string(i));
      rows.push_back(std::move(v));
    }
    pairs.emplace_back("p" + std::to_string(i), "q" + std::to_string(i));
  }
  const EmbeddingStore store2 = testutil::make_store(vocab, rows);
  for (RelationOperator op : kAllOperators) {
    const double mine = average_norm(pairs, store2, op, raw_options());
    double expected = 0.0;
    for (const auto& [w1, w2] : pairs) {
      expected += oracle::norm(oracle::compose(op, oracle::fetch(store2, w1, false),
                                               oracle::fetch(store2, w2, false)));
    }
    expected /= static_cast<double>(pairs.size());
    CHECK(mine == doctest::Approx(expected).epsilon(1e-12));
  }

  // PairDiff norms are swap-invariant.
  TokenPairList swapped;
  for (const auto& [w1, w2] : pairs) swapped.emplace_back(w2, w1);
  CHECK(average_norm(pairs, store2, RelationOperator::PairDiff, raw_options()) ==
        doctest::Approx(average_norm(swapped, store2, RelationOperator::PairDiff,
                                     raw_options()))
            .epsilon(1e-12));
}

TEST_CASE("linear classifier separates the 1-D spec case") {
  const std::vector<Vec> xs = {{2.0}, {-2.0}};
  const std::vector<int> ys = {1, -1};
  const LinearClassifier clf = train_linear_classifier(xs, ys);
  CHECK(clf.predict(xs[0]) == 1);
  CHECK(clf.predict(xs[1]) == -1);
}

TEST_CASE("linear classifier reaches 100% on separable blobs with margin") {
  Rng rng(29);
  std::vector<Vec> xs;
  std::vector<int> ys;
  for (int i = 0; i < 80; ++i) {
    const int label = i % 2 == 0 ? 1 : -1;
    const double along = 1.0 + uniform_range(rng, 0.0, 1.5);
    const double across = standard_normal(rng);
    xs.push_back(Vec{label * along, across});
    ys.push_back(label);
  }
  // Margin >= 1 against the constructing hyperplane w* = (1, 0), b* = 0.
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(ys[i] * xs[i][0] >= 1.0);
  }
  TrainOptions options;
  options.epochs = 400;
  const LinearClassifier clf = train_linear_classifier(xs, ys, options);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (clf.predict(xs[i]) == ys[i]) ++correct;
  }
  CHECK(correct == xs.size());
}

TEST_CASE("classifier objective trace is non-increasing") {
  Rng rng(17);
  std::vector<Vec> xs;
  std::vector<int> ys;
  for (int i = 0; i < 60; ++i) {
    Vec v(4);
    for (double& x : v) x = standard_normal(rng);
    ys.push_back(i % 2 == 0 ? 1 : -1);
    xs.push_back(std::move(v));
  }
  std::vector<double> trace;
  TrainOptions options;
  options.epochs = 150;
  train_linear_classifier(xs, ys, options, &trace);
  REQUIRE(trace.size() >= 2);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i] <= trace[i - 1] + 1e-12);
  }
}

TEST_CASE("flipping every label negates the weights exactly") {
  Rng rng(23);
  std::vector<Vec> xs;
  std::vector<int> ys;
  for (int i = 0; i < 40; ++i) {
    Vec v(5);
    for (double& x : v) x = standard_normal(rng);
    ys.push_back(uniform01(rng) < 0.5 ? 1 : -1);
    xs.push_back(std::move(v));
  }
  if (std::count(ys.begin(), ys.end(), 1) == 0) ys[0] = 1;
  if (std::count(ys.begin(), ys.end(), -1) == 0) ys[0] = -1;
  std::vector<int> flipped = ys;
  for (int& y : flipped) y = -y;
  const LinearClassifier a = train_linear_classifier(xs, ys);
  const LinearClassifier b = train_linear_classifier(xs, flipped);
  REQUIRE(a.weights.size() == b.weights.size());
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    CHECK(a.weights[i] == -b.weights[i]);
  }
  CHECK(a.bias == -b.bias);
}

TEST_CASE("classifier input validation") {
  CHECK_THROWS_AS(train_linear_classifier({{1.0}}, {1}), DataError);
  CHECK_THROWS_AS(train_linear_classifier({{1.0}, {2.0}}, {1, 1}), DataError);
  CHECK_THROWS_AS(train_linear_classifier({{1.0}, {2.0}}, {1, 0}), DataError);
  CHECK_THROWS_AS(train_linear_classifier({{1.0}, {2.0, 3.0}}, {1, -1}),
                  DataError);
}

TEST_CASE("asymmetry_cv: separable direction scores 1.0, commutative 0.5") {
  Rng rng(3);
  const std::size_t dim = 6;
  std::vector<std::string> vocab;
  std::vector<std::vector<double>> rows;
  TokenPairList pairs;
  // First coordinate of the PairDiff vector is +1 for originals by
  // construction: b = a + e0 (plus noise elsewhere).
  for (int i = 0; i < 30; ++i) {
    std::vector<double> a(dim);
    for (double& x : a) x = 0.2 * standard_normal(rng);
    std::vector<double> b = a;
    b[0] += 1.0;
    vocab.push_back("s" + std::to_string(i));
    rows.push_back(a);
    vocab.push_back("t" + std::to_string(i));
    rows.push_back(b);
    pairs.emplace_back("s" + std::to_string(i), "t" + std::to_string(i));
  }
  const EmbeddingStore store = testutil::make_store(vocab, rows);
  const DirectionDataset dataset{"made-up", pairs};

  const AsymmetryResult sep = asymmetry_cv(dataset, store,
                                           RelationOperator::PairDiff, 5, 1.0,
                                           11, raw_options());
  CHECK(sep.mean_accuracy == 1.0);
  CHECK(sep.usable_pairs == 30);

  for (RelationOperator commutative :
       {RelationOperator::Add, RelationOperator::Mult}) {
    const AsymmetryResult chance = asymmetry_cv(dataset, store, commutative, 5,
                                                1.0, 11, raw_options());
    CHECK(chance.mean_accuracy == doctest::Approx(0.5).epsilon(1e-12));
  }

  CHECK_THROWS_AS(asymmetry_cv(dataset, store, RelationOperator::PairDiff, 1,
                               1.0, 11, raw_options()),
                  DataError);
  CHECK_THROWS_AS(asymmetry_cv(dataset, store, RelationOperator::PairDiff, 31,
                               1.0, 11, raw_options()),
                  DataError);
}

TEST_CASE("direction dataset loader groups by label") {
  testutil::TempDir dir("direction");
  testutil::write_file(dir.file("d.tsv"),
                       "cat animal hyper\ndog animal hyper\nwheel car mero\n");
  const auto groups = load_direction_datasets(dir.file("d.tsv"));
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].relation == "hyper");
  CHECK(groups[0].pairs.size() == 2);
  CHECK(groups[1].relation == "mero");

  testutil::write_file(dir.file("syn.txt"), "big large\nsmall little\n");
  const auto syn = load_direction_datasets(dir.file("syn.txt"), "synonym");
  REQUIRE(syn.size() == 1);
  CHECK(syn[0].relation == "synonym");
  CHECK(syn[0].pairs.size() == 2);
}
