#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relcomp/cooccurrence.hpp"
#include "relcomp/dense_matrix.hpp"
#include "relcomp/embedding_store.hpp"

namespace relcomp {

// Output of truncated_svd (singular_values set, objective_trace empty) or
// nmf (the reverse). left is m x k, right is k x n.
struct FactorizationResult {
  DenseMatrix left;
  std::vector<double> singular_values;
  DenseMatrix right;
  std::vector<double> objective_trace;
};

// Rank-k truncated SVD by seeded randomized subspace iteration (oversampling
// 10, 7 power iterations). Deterministic for a fixed seed. Columns of left
// are orthonormal, singular values non-increasing, and each left column is
// flipped so its largest-magnitude entry is positive. right holds V^T.
FactorizationResult truncated_svd(const DenseMatrix& matrix, std::size_t k,
                                  std::uint64_t seed);
FactorizationResult truncated_svd(const CooccurrenceMatrix& matrix,
                                  std::size_t k, std::uint64_t seed);

// Word embeddings from an SVD of a co-occurrence/PPMI matrix: row i of the
// store is left.row(i) scaled elementwise by the singular values.
EmbeddingStore svd_embedding_store(const FactorizationResult& svd,
                                   const std::vector<std::string>& vocab,
                                   bool case_fold = true);

struct NmfOptions {
  std::size_t max_iter = 200;
  double tol = 1e-6;          // stop when relative objective decrease < tol
  std::uint64_t seed = 1;
};

// Frobenius NMF via multiplicative updates. Factors are initialized uniform
// on (0,1] from the seed and stay nonnegative; objective_trace records
// ||W - GH||_F after each iteration and is non-increasing. eps 1e-12 guards
// the update denominators.
FactorizationResult nmf(const DenseMatrix& matrix, std::size_t d,
                        const NmfOptions& options);
FactorizationResult nmf(const CooccurrenceMatrix& matrix, std::size_t d,
                        const NmfOptions& options);

// Row embeddings from an NMF factorization (rows of G).
EmbeddingStore nmf_embedding_store(const FactorizationResult& factors,
                                   const std::vector<std::string>& vocab,
                                   bool case_fold = true);

}  // namespace relcomp
