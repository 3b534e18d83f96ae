#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace oracle {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  double c = dot(a, b) / (na * nb);
  return std::min(1.0, std::max(-1.0, c));
}

std::vector<double> unit(std::vector<double> v) {
  const double n = norm(v);
  if (n >= 1e-12) {
    for (double& x : v) x /= n;
  }
  return v;
}

std::vector<double> fetch(const relcomp::EmbeddingStore& store,
                          const std::string& token, bool normalize) {
  const auto row = store.lookup(token);
  std::vector<double> v(row.begin(), row.end());
  return normalize ? unit(std::move(v)) : v;
}

std::vector<double> compose(relcomp::RelationOperator op,
                            const std::vector<double>& a,
                            const std::vector<double>& b) {
  using relcomp::RelationOperator;
  std::vector<double> out;
  switch (op) {
    case RelationOperator::PairDiff:
      for (std::size_t i = 0; i < a.size(); ++i) out.push_back(b[i] - a[i]);
      break;
    case RelationOperator::Concat:
      out = a;
      out.insert(out.end(), b.begin(), b.end());
      break;
    case RelationOperator::Add:
      for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
      break;
    case RelationOperator::Mult:
      for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] * b[i]);
      break;
  }
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

namespace {

Eigen::MatrixXd to_eigen(const relcomp::DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    }
  }
  return m;
}

}  // namespace

std::vector<double> dense_singular_values(const relcomp::DenseMatrix& a) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a));
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

double best_rank_k_error(const relcomp::DenseMatrix& a, std::size_t k) {
  const std::vector<double> sv = dense_singular_values(a);
  double tail = 0.0;
  for (std::size_t i = k; i < sv.size(); ++i) tail += sv[i] * sv[i];
  return std::sqrt(tail);
}

double svd_reconstruction_error(const relcomp::DenseMatrix& a,
                                const relcomp::FactorizationResult& f) {
  double err = 0.0;
  const std::size_t k = f.singular_values.size();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double rec = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        rec += f.left(i, t) * f.singular_values[t] * f.right(t, j);
      }
      err += (a(i, j) - rec) * (a(i, j) - rec);
    }
  }
  return std::sqrt(err);
}

double nmf_reconstruction_error(const relcomp::DenseMatrix& a,
                                const relcomp::FactorizationResult& f) {
  double err = 0.0;
  const std::size_t d = f.left.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double rec = 0.0;
      for (std::size_t t = 0; t < d; ++t) rec += f.left(i, t) * f.right(t, j);
      err += (a(i, j) - rec) * (a(i, j) - rec);
    }
  }
  return std::sqrt(err);
}

std::vector<std::pair<std::string, double>> complete_analogy(
    const relcomp::EmbeddingStore& store, relcomp::RelationOperator op,
    const std::string& a, const std::string& b, const std::string& c,
    const std::vector<std::uint32_t>& search_vocab, bool normalize) {
  const std::vector<double> va = fetch(store, a, normalize);
  const std::vector<double> vb = fetch(store, b, normalize);
  const std::vector<double> vc = fetch(store, c, normalize);
  const std::vector<double> query = compose(op, va, vb);

  const std::size_t ia = *store.find(a);
  const std::size_t ib = *store.find(b);
  const std::size_t ic = *store.find(c);
  std::vector<std::pair<std::uint32_t, double>> scored;
  for (const std::uint32_t d : search_vocab) {
    if (d == ia || d == ib || d == ic) continue;
    const std::vector<double> vd = fetch(store, store.token(d), normalize);
    scored.emplace_back(d, cosine(query, compose(op, vc, vd)));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& x, const auto& y) {
                     if (x.second != y.second) return x.second > y.second;
                     return x.first < y.first;
                   });
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [idx, score] : scored) {
    out.emplace_back(store.token(idx), score);
  }
  return out;
}

std::map<std::string, std::vector<double>> kbc_prototypes(
    const std::vector<std::array<std::string, 3>>& train,
    const relcomp::EmbeddingStore& entities, relcomp::RelationOperator op,
    bool normalize) {
  std::map<std::string, std::vector<double>> sums;
  std::map<std::string, std::size_t> counts;
  for (const auto& [head, relation, tail] : train) {
    if (!entities.contains(head) || !entities.contains(tail)) continue;
    const std::vector<double> composed =
        compose(op, fetch(entities, head, normalize),
                fetch(entities, tail, normalize));
    auto& sum = sums[relation];
    if (sum.empty()) sum.assign(composed.size(), 0.0);
    for (std::size_t i = 0; i < composed.size(); ++i) sum[i] += composed[i];
    ++counts[relation];
  }
  for (auto& [relation, sum] : sums) {
    for (double& v : sum) v /= static_cast<double>(counts.at(relation));
  }
  return sums;
}

std::size_t kbc_rank(const relcomp::EmbeddingStore& entities,
                     relcomp::RelationOperator op,
                     const std::vector<double>& prototype,
                     const std::string& anchor, const std::string& gold,
                     bool tail_side, bool normalize) {
  const std::vector<double> va = fetch(entities, anchor, normalize);
  auto score_of = [&](const std::string& token) {
    const std::vector<double> ve = fetch(entities, token, normalize);
    const std::vector<double> composed =
        tail_side ? compose(op, va, ve) : compose(op, ve, va);
    return cosine(prototype, composed);
  };
  const double gold_score = score_of(gold);
  std::size_t better = 0;
  for (std::size_t e = 0; e < entities.size(); ++e) {
    if (score_of(entities.token(e)) > gold_score) ++better;
  }
  return 1 + better;
}

double one_nn_accuracy(const std::vector<relcomp::LabeledPair>& dataset,
                       const relcomp::EmbeddingStore& store,
                       relcomp::RelationOperator op, bool normalize) {
  std::vector<std::vector<double>> vectors;
  std::vector<std::string> labels;
  for (const auto& pair : dataset) {
    if (!store.contains(pair.w1) || !store.contains(pair.w2)) continue;
    vectors.push_back(compose(op, fetch(store, pair.w1, normalize),
                              fetch(store, pair.w2, normalize)));
    labels.push_back(pair.relation);
  }
  if (vectors.size() < 2) throw std::runtime_error("oracle: too few pairs");
  std::size_t correct = 0;
  for (std::size_t q = 0; q < vectors.size(); ++q) {
    std::size_t best = vectors.size();
    double best_score = 0.0;
    for (std::size_t c = 0; c < vectors.size(); ++c) {
      if (c == q) continue;
      const double score = cosine(vectors[q], vectors[c]);
      if (best == vectors.size() || score > best_score) {
        best = c;
        best_score = score;
      }
    }
    if (labels[best] == labels[q]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(vectors.size());
}

std::map<std::pair<std::string, std::string>, double> count_cooccurrences(
    const std::vector<std::string>& tokens, int window, bool inverse_distance) {
  std::map<std::pair<std::string, std::string>, double> counts;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = i + 1; j < tokens.size(); ++j) {
      if (j - i > static_cast<std::size_t>(window)) break;
      const double w =
          inverse_distance ? 1.0 / static_cast<double>(j - i) : 1.0;
      counts[{tokens[i], tokens[j]}] += w;
      counts[{tokens[j], tokens[i]}] += w;
    }
  }
  return counts;
}

std::map<std::pair<std::string, std::string>, double> ppmi_table(
    const std::map<std::pair<std::string, std::string>, double>& counts) {
  double total = 0.0;
  std::map<std::string, double> row, col;
  for (const auto& [key, c] : counts) {
    total += c;
    row[key.first] += c;
    col[key.second] += c;
  }
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& [key, c] : counts) {
    const double v =
        std::log((c / total) / ((row[key.first] / total) * (col[key.second] / total)));
    if (v > 0.0) out[key] = v;
  }
  return out;
}

}  // namespace oracle
