#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "relcomp/errors.hpp"
#include "relcomp/operators.hpp"
#include "relcomp/random.hpp"
#include "test_util.hpp"

using namespace relcomp;

TEST_CASE("compose matches the worked examples") {
  CHECK(compose(RelationOperator::PairDiff, Vec{1, 2}, Vec{4, 6}) == Vec{3, 4});
  CHECK(compose(RelationOperator::Mult, Vec{1, 2}, Vec{3, 4}) == Vec{3, 8});
  CHECK(compose(RelationOperator::Concat, Vec{1, 2}, Vec{3, 4}) ==
        Vec{1, 2, 3, 4});
  CHECK(compose(RelationOperator::Add, Vec{1, 2}, Vec{3, 4}) == Vec{4, 6});
  CHECK(compose(RelationOperator::PairDiff, Vec{0.3, -0.7}, Vec{0.3, -0.7}) ==
        Vec{0, 0});
  CHECK_THROWS_AS(compose(RelationOperator::Add, Vec{1}, Vec{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("operator names round-trip and reject junk") {
  for (RelationOperator op : kAllOperators) {
    CHECK(parse_operator(operator_name(op)) == op);
  }
  CHECK(composed_dim(RelationOperator::Concat, 3) == 6);
  CHECK(composed_dim(RelationOperator::PairDiff, 3) == 3);
  CHECK_THROWS_AS(parse_operator("PairDiff"), ConfigError);  // lowercase only
}

TEST_CASE("operator algebra over seeded random pairs") {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(uniform_index(rng, 16));
    Vec a(n), b(n);
    for (double& v : a) v = standard_normal(rng);
    for (double& v : b) v = standard_normal(rng);
    if (trial % 3 == 0) {
      a[uniform_index(rng, n)] = 0.0;  // plant exact zeros
      b[uniform_index(rng, n)] = 0.0;
    }

    // Antisymmetry, exactly.
    const Vec d_ab = compose(RelationOperator::PairDiff, a, b);
    const Vec d_ba = compose(RelationOperator::PairDiff, b, a);
    for (std::size_t i = 0; i < n; ++i) CHECK(d_ab[i] == -d_ba[i]);

    // Commutativity, exactly.
    CHECK(compose(RelationOperator::Add, a, b) ==
          compose(RelationOperator::Add, b, a));
    CHECK(compose(RelationOperator::Mult, a, b) ==
          compose(RelationOperator::Mult, b, a));

    // Concat swap: halves exchanged.
    const Vec c_ab = compose(RelationOperator::Concat, a, b);
    const Vec c_ba = compose(RelationOperator::Concat, b, a);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(c_ab[i] == c_ba[n + i]);
      CHECK(c_ab[n + i] == c_ba[i]);
    }

    // Exact-zero propagation for Mult.
    const Vec m = compose(RelationOperator::Mult, a, b);
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0.0 || b[i] == 0.0) CHECK(m[i] == 0.0);
    }

    // Homogeneity: alpha for PairDiff/Add/Concat, alpha^2 for Mult.
    const double alpha = uniform_range(rng, 0.1, 4.0);
    Vec sa = a, sb = b;
    for (double& v : sa) v *= alpha;
    for (double& v : sb) v *= alpha;
    for (RelationOperator op : kAllOperators) {
      const Vec base = compose(op, a, b);
      const Vec scaled = compose(op, sa, sb);
      const double factor = op == RelationOperator::Mult ? alpha * alpha : alpha;
      for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(scaled[i] == doctest::Approx(factor * base[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("compose_pair normalizes inputs only when asked") {
  const EmbeddingStore store = testutil::make_store({"p", "q"}, {{3, 0}, {0, 4}});
  CHECK(compose_pair(store, RelationOperator::Add, "p", "q", false) == Vec{3, 4});
  CHECK(compose_pair(store, RelationOperator::Add, "p", "q", true) == Vec{1, 1});
}

TEST_CASE("dimension_correlation handles exact and degenerate columns") {
  // Two identical columns, one anticorrelated, one constant.
  const EmbeddingStore store = testutil::make_store(
      {"w1", "w2", "w3", "w4"},
      {{1, 1, -1, 5}, {2, 2, -2, 5}, {-1, -1, 1, 5}, {0.5, 0.5, -0.5, 5}});
  const CorrelationMatrix c = dimension_correlation(store);
  CHECK(c.values(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.values(0, 2) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(c.values(3, 3) == 1.0);
  CHECK(c.values(0, 3) == 0.0);
  CHECK(c.zero_variance_cols == std::vector<std::size_t>{3});

  const EmbeddingStore tiny = testutil::make_store({"only"}, {{1, 2}});
  CHECK_THROWS_AS(dimension_correlation(tiny), DataError);
}

TEST_CASE("independent random columns are near-uncorrelated") {
  Rng rng(2024);
  const std::size_t rows = 1000, cols = 6;
  std::vector<std::vector<double>> data(rows, std::vector<double>(cols));
  for (auto& row : data) {
    for (double& v : row) v = standard_normal(rng);
  }
  std::vector<std::string> vocab;
  for (std::size_t i = 0; i < rows; ++i) vocab.push_back("r" + std::to_string(i));
  const EmbeddingStore store = testutil::make_store(vocab, data);
  const CorrelationMatrix c = dimension_correlation(store);

  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (i == j) {
        CHECK(c.values(i, i) == 1.0);
        continue;
      }
      CHECK(std::abs(c.values(i, j)) < 0.1);
      // Cross-check against the independently coded correlation.
      std::vector<double> x(rows), y(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        x[r] = data[r][i];
        y[r] = data[r][j];
      }
      CHECK(c.values(i, j) == doctest::Approx(oracle::pearson(x, y)).epsilon(1e-10));
    }
  }
}
