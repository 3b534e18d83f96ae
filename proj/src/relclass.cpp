#include "relcomp/relclass.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "eval_internal.hpp"
#include "relcomp/errors.hpp"
#include "relcomp/parallel.hpp"
#include "relcomp/random.hpp"

namespace relcomp {

std::vector<LabeledPair> load_labeled_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<LabeledPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::strip_line_ending(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 3) {
      throw DataError(path + ": expected `w1 w2 relation` at line " +
                      std::to_string(line_no));
    }
    pairs.push_back({fields[0], fields[1], fields[2]});
  }
  if (pairs.empty()) throw DataError(path + ": empty dataset");
  return pairs;
}

EvalReport eval_1nn(const std::vector<LabeledPair>& dataset,
                    const EmbeddingStore& store, RelationOperator op,
                    const RelClassOptions& options) {
  if (dataset.size() < 2) {
    throw DataError("eval_1nn: need at least 2 pairs");
  }
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s =
      detail::effective_store(store, options.eval, storage);

  // Materialize relation vectors for the classifiable pairs, in dataset
  // order so index ties resolve deterministically.
  const std::size_t rel_dim = composed_dim(op, s.dim());
  std::vector<std::size_t> usable;
  std::vector<double> vectors;
  std::vector<double> norms;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto a = s.find(dataset[i].w1);
    const auto b = s.find(dataset[i].w2);
    if (!a || !b) continue;
    usable.push_back(i);
    const std::size_t offset = vectors.size();
    vectors.resize(offset + rel_dim);
    compose_into(op, s.row(*a), s.row(*b),
                 std::span<double>(vectors.data() + offset, rel_dim));
    norms.push_back(l2_norm(std::span<const double>(vectors.data() + offset, rel_dim)));
  }
  const std::size_t n = usable.size();
  if (n < 2) throw DataError("eval_1nn: fewer than 2 classifiable pairs");

  // Queries vs candidate pool: identical for leave-one-out, split otherwise.
  std::vector<std::size_t> queries(n);
  std::iota(queries.begin(), queries.end(), 0);
  std::vector<bool> in_train(n, true);
  if (options.holdout_split) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(options.seed);
    seeded_shuffle(order, rng);
    const auto train_size = static_cast<std::size_t>(
        static_cast<double>(n) * options.train_fraction);
    if (train_size == 0 || train_size >= n) {
      throw DataError("eval_1nn: split leaves an empty train or test side");
    }
    in_train.assign(n, false);
    for (std::size_t i = 0; i < train_size; ++i) in_train[order[i]] = true;
    queries.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_train[i]) queries.push_back(i);
    }
  }

  auto vec_of = [&](std::size_t local) {
    return std::span<const double>(vectors.data() + local * rel_dim, rel_dim);
  };

  std::vector<unsigned char> correct(queries.size(), 0);
  parallel_for(queries.size(), options.eval.workers,
               [&](std::size_t begin, std::size_t end) {
    for (std::size_t qi = begin; qi < end; ++qi) {
      const std::size_t q = queries[qi];
      const auto qv = vec_of(q);
      const double qn = norms[q];
      std::size_t best = n;
      double best_score = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == q || (options.holdout_split && !in_train[c])) continue;
        double score = 0.0;
        if (qn >= kDegenerateNorm && norms[c] >= kDegenerateNorm) {
          score = dot(qv, vec_of(c)) / (qn * norms[c]);
          score = std::clamp(score, -1.0, 1.0);
        }
        if (best == n || score > best_score) {
          best = c;
          best_score = score;
        }
      }
      if (best < n &&
          dataset[usable[best]].relation == dataset[usable[q]].relation) {
        correct[qi] = 1;
      }
    }
  });

  std::size_t n_correct = 0;
  for (unsigned char c : correct) n_correct += c;

  EvalReport report;
  report.task = "diffvec";
  report.op = operator_name(op);
  report.metrics["accuracy"] = queries.empty()
                                   ? 0.0
                                   : static_cast<double>(n_correct) /
                                         static_cast<double>(queries.size());
  report.metrics["coverage"] =
      static_cast<double>(n) / static_cast<double>(dataset.size());
  report.metrics["pairs"] = static_cast<double>(dataset.size());
  report.metrics["classified"] = static_cast<double>(queries.size());
  return report;
}

}  // namespace relcomp
