#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relcomp/embedding_store.hpp"
#include "relcomp/eval_common.hpp"
#include "relcomp/operators.hpp"
#include "relcomp/report.hpp"

namespace relcomp {

struct LabeledPair {
  std::string w1;
  std::string w2;
  std::string relation;
};

// TSV `w1 w2 relation_label`, one per line.
std::vector<LabeledPair> load_labeled_pairs(const std::string& path);

struct RelClassOptions {
  EvalOptions eval;
  // Leave-one-out when false. Otherwise a seeded shuffle splits the
  // classifiable pairs into train (first train_fraction) and test.
  bool holdout_split = false;
  double train_fraction = 0.8;
  std::uint64_t seed = 1;
};

// 1-nearest-neighbour relation classification over composed relation
// vectors, cosine similarity, neighbour ties broken by lowest dataset index.
// Pairs with OOV tokens are excluded and reported as coverage loss.
EvalReport eval_1nn(const std::vector<LabeledPair>& dataset,
                    const EmbeddingStore& store, RelationOperator op,
                    const RelClassOptions& options = {});

}  // namespace relcomp
