#include "relcomp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "eval_internal.hpp"
#include "relcomp/errors.hpp"
#include "relcomp/random.hpp"

namespace relcomp {

double sparsity(std::span<const double> x, double eps) {
  if (x.empty()) throw DataError("sparsity: empty vector");
  if (eps < 0.0) throw DataError("sparsity: negative epsilon");
  std::size_t small = 0;
  for (double v : x) {
    if (std::abs(v) <= eps) ++small;
  }
  return static_cast<double>(small) / static_cast<double>(x.size());
}

namespace {

// Composed relation vectors for the in-vocabulary subset of `pairs`.
std::vector<Vec> composed_vectors(const TokenPairList& pairs,
                                  const EmbeddingStore& store,
                                  RelationOperator op,
                                  const EvalOptions& options) {
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(store, options, storage);
  std::vector<Vec> out;
  for (const auto& [w1, w2] : pairs) {
    const auto a = s.find(w1);
    const auto b = s.find(w2);
    if (!a || !b) continue;
    Vec rel(composed_dim(op, s.dim()));
    compose_into(op, s.row(*a), s.row(*b), rel);
    out.push_back(std::move(rel));
  }
  return out;
}

}  // namespace

SparsityCurve average_sparsity(const TokenPairList& pairs,
                               const EmbeddingStore& store, RelationOperator op,
                               const std::vector<double>& epsilon_grid,
                               const EvalOptions& options) {
  const std::vector<Vec> vectors = composed_vectors(pairs, store, op, options);
  if (vectors.empty()) throw DataError("average_sparsity: all pairs OOV");
  SparsityCurve curve;
  curve.epsilon_grid = epsilon_grid;
  curve.values.reserve(epsilon_grid.size());
  for (double eps : epsilon_grid) {
    double sum = 0.0;
    for (const Vec& v : vectors) sum += sparsity(v, eps);
    curve.values.push_back(sum / static_cast<double>(vectors.size()));
  }
  return curve;
}

double average_norm(const TokenPairList& pairs, const EmbeddingStore& store,
                    RelationOperator op, const EvalOptions& options) {
  const std::vector<Vec> vectors = composed_vectors(pairs, store, op, options);
  if (vectors.empty()) throw DataError("average_norm: all pairs OOV");
  double sum = 0.0;
  for (const Vec& v : vectors) sum += l2_norm(v);
  return sum / static_cast<double>(vectors.size());
}

std::string sparsity_curves_csv(
    const std::map<RelationOperator, SparsityCurve>& curves) {
  std::ostringstream out;
  out << "operator,epsilon,mean_sparsity\n";
  char buf[64];
  for (const auto& [op, curve] : curves) {
    for (std::size_t i = 0; i < curve.epsilon_grid.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g,%.9g", curve.epsilon_grid[i],
                    curve.values[i]);
      out << operator_name(op) << ',' << buf << '\n';
    }
  }
  return out.str();
}

double LinearClassifier::decision(std::span<const double> x) const {
  return dot(weights, x) + bias;
}

int LinearClassifier::predict(std::span<const double> x) const {
  return decision(x) >= 0.0 ? 1 : -1;
}

namespace {

double hinge_objective(const std::vector<Vec>& features,
                       const std::vector<int>& labels,
                       const std::vector<double>& w, double b, double lambda) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const double margin = labels[i] * (dot(w, features[i]) + b);
    if (margin < 1.0) hinge += 1.0 - margin;
  }
  hinge /= static_cast<double>(features.size());
  return 0.5 * lambda * dot(w, w) + hinge;
}

}  // namespace

LinearClassifier train_linear_classifier(const std::vector<Vec>& features,
                                         const std::vector<int>& labels,
                                         const TrainOptions& options,
                                         std::vector<double>* objective_trace) {
  if (features.empty() || features.size() != labels.size()) {
    throw DataError("train_linear_classifier: features/labels size mismatch");
  }
  const std::size_t n = features.size();
  const std::size_t dim = features[0].size();
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i].size() != dim) {
      throw DataError("train_linear_classifier: inconsistent feature lengths");
    }
    if (labels[i] == 1) has_pos = true;
    else if (labels[i] == -1) has_neg = true;
    else throw DataError("train_linear_classifier: labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) {
    throw DataError("train_linear_classifier: both classes required");
  }

  const double lambda = 1.0 / (options.cost * static_cast<double>(n));
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  double objective = hinge_objective(features, labels, w, b, lambda);
  if (objective_trace != nullptr) objective_trace->push_back(objective);

  std::vector<double> grad_w(dim);
  std::vector<double> w_next(dim);
  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    // Full-batch subgradient of (lambda/2)||w||^2 + mean hinge.
    for (std::size_t j = 0; j < dim; ++j) grad_w[j] = lambda * w[j];
    double grad_b = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double margin = labels[i] * (dot(w, features[i]) + b);
      if (margin < 1.0) {
        const double g = -static_cast<double>(labels[i]) * inv_n;
        for (std::size_t j = 0; j < dim; ++j) grad_w[j] += g * features[i][j];
        grad_b += g;
      }
    }

    // Trial step 1/(lambda*epoch), halved until the objective stops rising.
    double step = 1.0 / (lambda * static_cast<double>(epoch));
    bool moved = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      for (std::size_t j = 0; j < dim; ++j) w_next[j] = w[j] - step * grad_w[j];
      const double b_next = b - step * grad_b;
      const double candidate =
          hinge_objective(features, labels, w_next, b_next, lambda);
      if (candidate <= objective) {
        w.swap(w_next);
        b = b_next;
        objective = candidate;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (objective_trace != nullptr) objective_trace->push_back(objective);
    if (!moved) break;  // no descent step along the subgradient remains
  }

  LinearClassifier clf;
  clf.weights = std::move(w);
  clf.bias = b;
  clf.cost = options.cost;
  return clf;
}

std::vector<DirectionDataset> load_direction_datasets(
    const std::string& path, const std::string& default_relation) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::map<std::string, TokenPairList> grouped;
  std::vector<std::string> order;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::strip_line_ending(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw DataError(path + ": expected `w1 w2 [relation]` at line " +
                      std::to_string(line_no));
    }
    const std::string relation =
        fields.size() >= 3 ? fields[2] : default_relation;
    auto [it, inserted] = grouped.emplace(relation, TokenPairList{});
    if (inserted) order.push_back(relation);
    it->second.emplace_back(fields[0], fields[1]);
  }
  if (grouped.empty()) throw DataError(path + ": empty direction dataset");
  std::vector<DirectionDataset> out;
  for (const std::string& relation : order) {
    out.push_back({relation, std::move(grouped.at(relation))});
  }
  return out;
}

AsymmetryResult asymmetry_cv(const DirectionDataset& dataset,
                             const EmbeddingStore& store, RelationOperator op,
                             std::size_t folds, double cost, std::uint64_t seed,
                             const EvalOptions& options) {
  if (folds < 2) throw DataError("asymmetry_cv: folds must be >= 2");
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(store, options, storage);

  // Each usable pair contributes its original composition (+1) and the
  // swapped composition (-1); both land in the same fold, which keeps every
  // non-empty fold balanced.
  std::vector<Vec> forward, backward;
  for (const auto& [w1, w2] : dataset.pairs) {
    const auto a = s.find(w1);
    const auto b = s.find(w2);
    if (!a || !b) continue;
    Vec f(composed_dim(op, s.dim()));
    Vec r(f.size());
    compose_into(op, s.row(*a), s.row(*b), f);
    compose_into(op, s.row(*b), s.row(*a), r);
    forward.push_back(std::move(f));
    backward.push_back(std::move(r));
  }
  const std::size_t n = forward.size();
  if (n < folds) {
    throw DataError("asymmetry_cv: not enough in-vocabulary pairs for " +
                    std::to_string(folds) + " folds");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  seeded_shuffle(order, rng);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    fold_of[order[i]] = std::min(folds - 1, i * folds / n);
  }

  AsymmetryResult result;
  result.usable_pairs = n;
  TrainOptions train_options;
  train_options.cost = cost;
  train_options.seed = seed;
  for (std::size_t fold = 0; fold < folds; ++fold) {
    std::vector<Vec> train_x;
    std::vector<int> train_y;
    std::vector<const Vec*> test_x;
    std::vector<int> test_y;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of[i] == fold) {
        test_x.push_back(&forward[i]);
        test_y.push_back(1);
        test_x.push_back(&backward[i]);
        test_y.push_back(-1);
      } else {
        train_x.push_back(forward[i]);
        train_y.push_back(1);
        train_x.push_back(backward[i]);
        train_y.push_back(-1);
      }
    }
    if (test_x.empty() || train_x.empty()) {
      throw DataError("asymmetry_cv: fold " + std::to_string(fold) +
                      " is empty; reduce the fold count");
    }
    const LinearClassifier clf =
        train_linear_classifier(train_x, train_y, train_options);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test_x.size(); ++i) {
      if (clf.predict(*test_x[i]) == test_y[i]) ++correct;
    }
    result.fold_accuracies.push_back(static_cast<double>(correct) /
                                     static_cast<double>(test_x.size()));
  }
  result.mean_accuracy =
      std::accumulate(result.fold_accuracies.begin(),
                      result.fold_accuracies.end(), 0.0) /
      static_cast<double>(result.fold_accuracies.size());
  return result;
}

}  // namespace relcomp
