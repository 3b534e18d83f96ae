#include "relcomp/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "relcomp/errors.hpp"

namespace relcomp {

const std::string& operator_name(RelationOperator op) {
  static const std::string names[] = {"pairdiff", "concat", "add", "mult"};
  return names[static_cast<int>(op)];
}

RelationOperator parse_operator(const std::string& name) {
  for (RelationOperator op : kAllOperators) {
    if (operator_name(op) == name) return op;
  }
  throw ConfigError("unknown operator '" + name +
                    "' (expected pairdiff, concat, add or mult)");
}

std::size_t composed_dim(RelationOperator op, std::size_t input_dim) {
  return op == RelationOperator::Concat ? 2 * input_dim : input_dim;
}

void compose_into(RelationOperator op, std::span<const double> a,
                  std::span<const double> b, std::span<double> out) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("compose: input length mismatch");
  }
  if (out.size() != composed_dim(op, a.size())) {
    throw std::invalid_argument("compose: output length mismatch");
  }
  const std::size_t n = a.size();
  switch (op) {
    case RelationOperator::PairDiff:
      for (std::size_t i = 0; i < n; ++i) out[i] = b[i] - a[i];
      break;
    case RelationOperator::Concat:
      for (std::size_t i = 0; i < n; ++i) out[i] = a[i];
      for (std::size_t i = 0; i < n; ++i) out[n + i] = b[i];
      break;
    case RelationOperator::Add:
      for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
      break;
    case RelationOperator::Mult:
      for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
      break;
  }
}

Vec compose(RelationOperator op, std::span<const double> a,
            std::span<const double> b) {
  Vec out(composed_dim(op, a.size()));
  compose_into(op, a, b, out);
  return out;
}

Vec compose_pair(const EmbeddingStore& store, RelationOperator op,
                 const std::string& first, const std::string& second,
                 bool normalize_inputs) {
  std::span<const double> a = store.lookup(first);
  std::span<const double> b = store.lookup(second);
  if (normalize_inputs && !store.is_normalized()) {
    Vec na(a.begin(), a.end());
    Vec nb(b.begin(), b.end());
    normalize_in_place(na);
    normalize_in_place(nb);
    return compose(op, na, nb);
  }
  return compose(op, a, b);
}

CorrelationMatrix dimension_correlation(const EmbeddingStore& store) {
  const std::size_t m = store.size();
  const std::size_t n = store.dim();
  if (m < 2) throw DataError("dimension_correlation: fewer than 2 rows");

  std::vector<double> mean(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = store.row(i);
    for (std::size_t j = 0; j < n; ++j) mean[j] += r[j];
  }
  for (double& v : mean) v /= static_cast<double>(m);

  // Column variances (sum of squared deviations).
  std::vector<double> ssd(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = store.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = r[j] - mean[j];
      ssd[j] += d * d;
    }
  }

  CorrelationMatrix out;
  out.values = DenseMatrix(n, n);
  std::vector<bool> degenerate(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (ssd[j] <= 0.0) {
      degenerate[j] = true;
      out.zero_variance_cols.push_back(j);
    }
  }

  DenseMatrix cross(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = store.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = r[j] - mean[j];
      for (std::size_t k = j; k < n; ++k) {
        cross(j, k) += dj * (r[k] - mean[k]);
      }
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    out.values(j, j) = 1.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      double c = 0.0;
      if (!degenerate[j] && !degenerate[k]) {
        c = cross(j, k) / std::sqrt(ssd[j] * ssd[k]);
        if (c > 1.0) c = 1.0;
        if (c < -1.0) c = -1.0;
      }
      out.values(j, k) = c;
      out.values(k, j) = c;
    }
  }
  return out;
}

}  // namespace relcomp
