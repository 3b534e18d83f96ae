#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "relcomp/embedding_store.hpp"
#include "relcomp/eval_common.hpp"
#include "relcomp/operators.hpp"

namespace relcomp {

using TokenPairList = std::vector<std::pair<std::string, std::string>>;

// Fraction of entries with |x_i| <= eps.
double sparsity(std::span<const double> x, double eps);

inline const std::vector<double>& default_epsilon_grid() {
  static const std::vector<double> grid = {0.0, 0.001, 0.01, 0.05, 0.1, 0.2};
  return grid;
}

struct SparsityCurve {
  std::vector<double> epsilon_grid;
  std::vector<double> values;  // mean sparsity per epsilon, same length
};

// Mean sparsity of the composed relation vectors over the in-vocabulary
// pairs, per grid epsilon. Errors when every pair is OOV.
SparsityCurve average_sparsity(const TokenPairList& pairs,
                               const EmbeddingStore& store, RelationOperator op,
                               const std::vector<double>& epsilon_grid,
                               const EvalOptions& options = {});

// Mean l2 norm of the composed relation vectors over in-vocabulary pairs.
double average_norm(const TokenPairList& pairs, const EmbeddingStore& store,
                    RelationOperator op, const EvalOptions& options = {});

// CSV `operator,epsilon,mean_sparsity` for a set of per-operator curves.
std::string sparsity_curves_csv(
    const std::map<RelationOperator, SparsityCurve>& curves);

// ---------------------------------------------------------------------------
// Direction (asymmetry) classification
// ---------------------------------------------------------------------------

struct LinearClassifier {
  std::vector<double> weights;
  double bias = 0.0;
  double cost = 1.0;

  double decision(std::span<const double> x) const;
  int predict(std::span<const double> x) const;  // returns +1 or -1
};

struct TrainOptions {
  double cost = 1.0;          // soft-margin trade-off C
  std::size_t epochs = 200;
  std::uint64_t seed = 1;     // recorded for reports; training itself is
                              // deterministic from zero-initialized weights
};

// Max-margin linear classifier by full-batch subgradient descent on
// (lambda/2)||w||^2 + mean hinge with lambda = 1/(cost*N). The trial step
// 1/(lambda*epoch) is halved until the objective does not increase, so the
// objective trace is non-increasing; training stops early when no descent
// step remains.
LinearClassifier train_linear_classifier(const std::vector<Vec>& features,
                                         const std::vector<int>& labels,
                                         const TrainOptions& options = {},
                                         std::vector<double>* objective_trace = nullptr);

// Word pairs sharing one relation label; the reversed class is their swap.
struct DirectionDataset {
  std::string relation;
  TokenPairList pairs;
};

// TSV `w1 w2 relation_label` grouped by label; lines with 2 fields fall into
// a single group named by `default_relation`.
std::vector<DirectionDataset> load_direction_datasets(
    const std::string& path, const std::string& default_relation = "all");

struct AsymmetryResult {
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
  std::size_t usable_pairs = 0;
};

// Labels composed vectors of the original pairs +1 and of the swapped pairs
// -1, then runs seeded k-fold cross-validation (shuffle + contiguous split;
// a pair and its swap share a fold). Accuracy is the mean held-out accuracy.
AsymmetryResult asymmetry_cv(const DirectionDataset& dataset,
                             const EmbeddingStore& store, RelationOperator op,
                             std::size_t folds, double cost, std::uint64_t seed,
                             const EvalOptions& options = {});

}  // namespace relcomp
