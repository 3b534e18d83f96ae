#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written against raw data and must not call
// the code paths under test.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "relcomp/dense_matrix.hpp"
#include "relcomp/embedding_store.hpp"
#include "relcomp/factorization.hpp"
#include "relcomp/operators.hpp"
#include "relcomp/relclass.hpp"

namespace oracle {

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm(const std::vector<double>& a);
double cosine(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> unit(std::vector<double> v);

std::vector<double> fetch(const relcomp::EmbeddingStore& store,
                          const std::string& token, bool normalize);

std::vector<double> compose(relcomp::RelationOperator op,
                            const std::vector<double>& a,
                            const std::vector<double>& b);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Dense SVD (Eigen JacobiSVD).
std::vector<double> dense_singular_values(const relcomp::DenseMatrix& a);
// Best achievable rank-k Frobenius error: sqrt(sum of tail squared values).
double best_rank_k_error(const relcomp::DenseMatrix& a, std::size_t k);

// ||A - left diag(s) right||_F for an SVD result.
double svd_reconstruction_error(const relcomp::DenseMatrix& a,
                                const relcomp::FactorizationResult& f);
// ||A - left right||_F for an NMF result.
double nmf_reconstruction_error(const relcomp::DenseMatrix& a,
                                const relcomp::FactorizationResult& f);

// Exhaustive analogy completion ranking (score desc, store index asc).
std::vector<std::pair<std::string, double>> complete_analogy(
    const relcomp::EmbeddingStore& store, relcomp::RelationOperator op,
    const std::string& a, const std::string& b, const std::string& c,
    const std::vector<std::uint32_t>& search_vocab, bool normalize);

// Exhaustive KBC scorer: mean prototype from train pairs, then the gold rank
// (1 + strictly greater) over candidate tokens.
std::map<std::string, std::vector<double>> kbc_prototypes(
    const std::vector<std::array<std::string, 3>>& train,
    const relcomp::EmbeddingStore& entities, relcomp::RelationOperator op,
    bool normalize);
std::size_t kbc_rank(const relcomp::EmbeddingStore& entities,
                     relcomp::RelationOperator op,
                     const std::vector<double>& prototype,
                     const std::string& anchor, const std::string& gold,
                     bool tail_side, bool normalize);

// Exhaustive leave-one-out 1-NN accuracy over in-vocabulary pairs.
double one_nn_accuracy(const std::vector<relcomp::LabeledPair>& dataset,
                       const relcomp::EmbeddingStore& store,
                       relcomp::RelationOperator op, bool normalize);

// Hand-rolled co-occurrence counting over every position pair.
std::map<std::pair<std::string, std::string>, double> count_cooccurrences(
    const std::vector<std::string>& tokens, int window, bool inverse_distance);
// PPMI table from a count table (natural log, positive cells only).
std::map<std::pair<std::string, std::string>, double> ppmi_table(
    const std::map<std::pair<std::string, std::string>, double>& counts);

}  // namespace oracle
