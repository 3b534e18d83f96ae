#pragma once

#include <span>
#include <string>
#include <vector>

#include "relcomp/dense_matrix.hpp"
#include "relcomp/embedding_store.hpp"
#include "relcomp/vector_math.hpp"

namespace relcomp {

// Unsupervised composition of a relation vector from two word vectors.
enum class RelationOperator { PairDiff, Concat, Add, Mult };

inline constexpr RelationOperator kAllOperators[] = {
    RelationOperator::PairDiff, RelationOperator::Concat, RelationOperator::Add,
    RelationOperator::Mult};

// CLI/config names: pairdiff, concat, add, mult (lowercase, exact).
const std::string& operator_name(RelationOperator op);
RelationOperator parse_operator(const std::string& name);

// Output dimensionality: 2n for Concat, n otherwise.
std::size_t composed_dim(RelationOperator op, std::size_t input_dim);

// out must have composed_dim(op, a.size()) entries.
//   PairDiff -> b - a        Concat -> (a1..an, b1..bn)
//   Add      -> a + b        Mult   -> elementwise a * b
void compose_into(RelationOperator op, std::span<const double> a,
                  std::span<const double> b, std::span<double> out);

Vec compose(RelationOperator op, std::span<const double> a,
            std::span<const double> b);

// Composed relation vector for a token pair. When normalize_inputs is set the
// two word vectors are scaled to unit length before composition; the relation
// vector itself is never re-normalized.
Vec compose_pair(const EmbeddingStore& store, RelationOperator op,
                 const std::string& first, const std::string& second,
                 bool normalize_inputs = true);

// Pearson correlation between every pair of embedding dimensions.
struct CorrelationMatrix {
  DenseMatrix values;                           // n x n, symmetric
  std::vector<std::size_t> zero_variance_cols;  // flagged, diag 1 / off-diag 0
};

// Requires at least 2 rows in the store.
CorrelationMatrix dimension_correlation(const EmbeddingStore& store);

}  // namespace relcomp
