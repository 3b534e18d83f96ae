#include <doctest.h>

#include <cmath>

#include "relcomp/embedding_store.hpp"
#include "relcomp/errors.hpp"
#include "relcomp/random.hpp"
#include "test_util.hpp"

using namespace relcomp;
using testutil::TempDir;

TEST_CASE("load parses a plain two-line file") {
  TempDir dir("store");
  testutil::write_file(dir.file("ab.vec"), "a 1 0\nb 0 1\n");
  const EmbeddingStore store = EmbeddingStore::load(dir.file("ab.vec"));
  CHECK(store.vocab() == std::vector<std::string>{"a", "b"});
  CHECK(store.dim() == 2);
  CHECK(store.lookup("a")[0] == 1.0);
  CHECK(store.lookup("a")[1] == 0.0);
  CHECK_FALSE(store.is_normalized());
}

TEST_CASE("load reports dimension mismatches with the line number") {
  TempDir dir("store");
  testutil::write_file(dir.file("bad.vec"), "a 1 0\nb 0 1\nc 1 2 3\n");
  CHECK_THROWS_WITH_AS(EmbeddingStore::load(dir.file("bad.vec")),
                       doctest::Contains("line 3"), DataError);
}

TEST_CASE("load rejects unreadable, empty and non-numeric files") {
  TempDir dir("store");
  CHECK_THROWS_AS(EmbeddingStore::load(dir.file("missing.vec")), DataError);
  testutil::write_file(dir.file("empty.vec"), "");
  CHECK_THROWS_AS(EmbeddingStore::load(dir.file("empty.vec")), DataError);
  testutil::write_file(dir.file("nan.vec"), "a 1 0\nb zero 1\n");
  CHECK_THROWS_WITH_AS(EmbeddingStore::load(dir.file("nan.vec")),
                       doctest::Contains("line 2"), DataError);
}

TEST_CASE("count-dim header is auto-detected and validated") {
  TempDir dir("store");
  testutil::write_file(dir.file("hdr.vec"), "2 3\na 1 0 0\nb 0 1 0\n");
  const EmbeddingStore store = EmbeddingStore::load(dir.file("hdr.vec"));
  CHECK(store.size() == 2);
  CHECK(store.dim() == 3);

  testutil::write_file(dir.file("hdr_bad.vec"), "2 3\na 1 0\n");
  CHECK_THROWS_AS(EmbeddingStore::load(dir.file("hdr_bad.vec")), DataError);
}

TEST_CASE("duplicate tokens keep the first occurrence and are tallied") {
  TempDir dir("store");
  testutil::write_file(dir.file("dup.vec"), "a 1 0\na 9 9\nb 0 1\n");
  LoadStats stats;
  const EmbeddingStore store =
      EmbeddingStore::load(dir.file("dup.vec"), false, &stats);
  CHECK(store.size() == 2);
  CHECK(stats.duplicate_tokens == 1);
  CHECK(store.lookup("a")[0] == 1.0);
}

TEST_CASE("save then load then save reproduces the text bitwise") {
  TempDir dir("store");
  Rng rng(7);
  std::vector<std::string> vocab;
  std::vector<double> matrix;
  for (int i = 0; i < 20; ++i) {
    vocab.push_back("w" + std::to_string(i));
    for (int j = 0; j < 5; ++j) matrix.push_back(standard_normal(rng) * 3.0);
  }
  const EmbeddingStore store(vocab, std::move(matrix), 5);
  store.save(dir.file("one.vec"));
  const EmbeddingStore reloaded = EmbeddingStore::load(dir.file("one.vec"));
  reloaded.save(dir.file("two.vec"));
  CHECK(testutil::read_file(dir.file("one.vec")) ==
        testutil::read_file(dir.file("two.vec")));
}

TEST_CASE("normalize scales rows and counts zero rows") {
  const EmbeddingStore store =
      testutil::make_store({"a", "z", "u"}, {{3, 4}, {0, 0}, {1, 0}});
  std::size_t zero_rows = 0;
  const EmbeddingStore normalized = store.normalized(&zero_rows);
  CHECK(zero_rows == 1);
  CHECK(normalized.is_normalized());
  CHECK(normalized.lookup("a")[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(normalized.lookup("a")[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(normalized.lookup("z")[0] == 0.0);
  CHECK(normalized.lookup("u")[0] == 1.0);

  // Idempotence, entrywise within 1e-12.
  const EmbeddingStore twice = normalized.normalized();
  for (std::size_t i = 0; i < store.size(); ++i) {
    for (std::size_t j = 0; j < store.dim(); ++j) {
      CHECK(twice.row(i)[j] == doctest::Approx(normalized.row(i)[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("lookup distinguishes misses and respects case folding") {
  const EmbeddingStore plain = testutil::make_store({"a", "b"}, {{1, 0}, {0, 1}});
  CHECK(plain.lookup("a")[0] == 1.0);
  CHECK_FALSE(plain.find("z").has_value());
  CHECK_THROWS_AS(plain.lookup("z"), TokenNotFound);
  try {
    plain.lookup("z");
  } catch (const TokenNotFound& e) {
    CHECK(e.token() == "z");
  }
  CHECK_FALSE(plain.find("A").has_value());  // folding off: case-significant

  const EmbeddingStore folded =
      testutil::make_store({"a", "b"}, {{1, 0}, {0, 1}}, true);
  CHECK(folded.lookup("A")[0] == 1.0);
}

TEST_CASE("cosine handles the standard cases") {
  bool degenerate = false;
  CHECK(cosine(Vec{1, 0}, Vec{0, 1}) == 0.0);
  CHECK(cosine(Vec{1, 1}, Vec{2, 2}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine(Vec{1, 0}, Vec{1, 1}) ==
        doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(cosine(Vec{0, 0}, Vec{1, 1}, &degenerate) == 0.0);
  CHECK(degenerate);
  CHECK_THROWS_AS(cosine(Vec{1, 0}, Vec{1, 0, 0}), std::invalid_argument);
}

TEST_CASE("cosine symmetry and positive-scale invariance") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Vec x(8), y(8);
    for (double& v : x) v = standard_normal(rng);
    for (double& v : y) v = standard_normal(rng);
    const double alpha = uniform_pos(rng) * 10.0;
    const double beta = uniform_pos(rng) * 10.0;
    CHECK(cosine(x, y) == cosine(y, x));
    Vec sx = x, sy = y;
    for (double& v : sx) v *= alpha;
    for (double& v : sy) v *= beta;
    CHECK(cosine(sx, sy) == doctest::Approx(cosine(x, y)).epsilon(1e-9));
  }
}
