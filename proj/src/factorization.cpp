#include "relcomp/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "relcomp/errors.hpp"
#include "relcomp/random.hpp"

namespace relcomp {

namespace {

constexpr std::size_t kOversampling = 10;
constexpr std::size_t kPowerIterations = 7;
constexpr double kNmfEps = 1e-12;

// Uniform access to the dense and sparse matrix types used by the
// factorizations: block products, Frobenius mass, and the inner product
// <A, G H> needed for the sparse NMF objective.
struct MatrixAccess {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<DenseMatrix(const DenseMatrix&)> apply;        // A * X
  std::function<DenseMatrix(const DenseMatrix&)> apply_trans;  // A^T * X
  std::function<double()> squared_frobenius;
  std::function<double(const DenseMatrix&, const DenseMatrix&)>
      inner_with_product;
  std::function<double(const DenseMatrix&, const DenseMatrix&)>
      residual_norm;  // ||A - G H||_F
};

MatrixAccess dense_access(const DenseMatrix& a) {
  MatrixAccess m;
  m.rows = a.rows();
  m.cols = a.cols();
  m.apply = [&a](const DenseMatrix& x) { return matmul(a, x); };
  m.apply_trans = [&a](const DenseMatrix& x) { return matmul_trans_a(a, x); };
  m.squared_frobenius = [&a] {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return s;
  };
  m.inner_with_product = [&a](const DenseMatrix& g, const DenseMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        if (a(i, j) == 0.0) continue;
        double gh = 0.0;
        for (std::size_t t = 0; t < g.cols(); ++t) gh += g(i, t) * h(t, j);
        s += a(i, j) * gh;
      }
    }
    return s;
  };
  m.residual_norm = [&a](const DenseMatrix& g, const DenseMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        double gh = 0.0;
        for (std::size_t t = 0; t < g.cols(); ++t) gh += g(i, t) * h(t, j);
        const double d = a(i, j) - gh;
        s += d * d;
      }
    }
    return std::sqrt(s);
  };
  return m;
}

MatrixAccess sparse_access(const CooccurrenceMatrix& a) {
  MatrixAccess m;
  m.rows = a.size();
  m.cols = a.size();
  m.apply = [&a](const DenseMatrix& x) {
    DenseMatrix out(a.size(), x.cols());
    for (std::size_t r = 0; r < a.size(); ++r) {
      const auto cols = a.row_cols(r);
      const auto weights = a.row_weights(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const double w = weights[k];
        const auto src = x.row(cols[k]);
        auto dst = out.row(r);
        for (std::size_t t = 0; t < src.size(); ++t) dst[t] += w * src[t];
      }
    }
    return out;
  };
  m.apply_trans = [&a](const DenseMatrix& x) {
    DenseMatrix out(a.size(), x.cols());
    for (std::size_t r = 0; r < a.size(); ++r) {
      const auto cols = a.row_cols(r);
      const auto weights = a.row_weights(r);
      const auto src = x.row(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const double w = weights[k];
        auto dst = out.row(cols[k]);
        for (std::size_t t = 0; t < src.size(); ++t) dst[t] += w * src[t];
      }
    }
    return out;
  };
  m.squared_frobenius = [&a] {
    double s = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
      for (double w : a.row_weights(r)) s += w * w;
    }
    return s;
  };
  m.inner_with_product = [&a](const DenseMatrix& g, const DenseMatrix& h) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
      const auto cols = a.row_cols(r);
      const auto weights = a.row_weights(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        double gh = 0.0;
        for (std::size_t t = 0; t < g.cols(); ++t) {
          gh += g(r, t) * h(t, cols[k]);
        }
        s += weights[k] * gh;
      }
    }
    return s;
  };
  // Expansion ||A||^2 - 2<A,GH> + <G^T G, H H^T>; fine at sparse scale.
  m.residual_norm = [&a, m](const DenseMatrix& g, const DenseMatrix& h) {
    const DenseMatrix gtg = matmul_trans_a(g, g);
    const DenseMatrix hht = matmul_trans_b(h, h);
    double cross = 0.0;
    for (std::size_t i = 0; i < gtg.rows(); ++i) {
      for (std::size_t j = 0; j < gtg.cols(); ++j) {
        cross += gtg(i, j) * hht(i, j);
      }
    }
    const double sq =
        m.squared_frobenius() - 2.0 * m.inner_with_product(g, h) + cross;
    return std::sqrt(std::max(0.0, sq));
  };
  return m;
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Columns that
// collapse below tolerance are zeroed (rank-deficient input).
void orthonormalize_columns(DenseMatrix& y) {
  const std::size_t m = y.rows();
  const std::size_t l = y.cols();
  for (std::size_t j = 0; j < l; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        double proj = 0.0;
        for (std::size_t r = 0; r < m; ++r) proj += y(r, i) * y(r, j);
        if (proj == 0.0) continue;
        for (std::size_t r = 0; r < m; ++r) y(r, j) -= proj * y(r, i);
      }
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < m; ++r) norm += y(r, j) * y(r, j);
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      for (std::size_t r = 0; r < m; ++r) y(r, j) = 0.0;
    } else {
      for (std::size_t r = 0; r < m; ++r) y(r, j) /= norm;
    }
  }
}

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvalues land
// in `values` descending with matching columns in `vectors`.
void symmetric_eigen(DenseMatrix a, std::vector<double>& values,
                     DenseMatrix& vectors) {
  const std::size_t n = a.rows();
  vectors = DenseMatrix::identity(n);
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  const double tol = 1e-15 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    }
    if (off <= tol) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= tol) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = vectors(r, p);
          const double vrq = vectors(r, q);
          vectors(r, p) = c * vrp - s * vrq;
          vectors(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
  std::vector<double> sorted_values(n);
  DenseMatrix sorted_vectors(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    sorted_values[i] = values[order[i]];
    for (std::size_t r = 0; r < n; ++r) sorted_vectors(r, i) = vectors(r, order[i]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

FactorizationResult truncated_svd_impl(const MatrixAccess& a, std::size_t k,
                                       std::uint64_t seed) {
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  if (k < 1 || k > std::min(m, n)) {
    throw DataError("truncated_svd: k out of range (1 <= k <= min(rows, cols))");
  }
  const std::size_t l = std::min(k + kOversampling, std::min(m, n));

  Rng rng(seed);
  DenseMatrix omega(n, l);
  for (double& v : omega.data()) v = standard_normal(rng);

  DenseMatrix q = a.apply(omega);  // m x l
  orthonormalize_columns(q);
  for (std::size_t it = 0; it < kPowerIterations; ++it) {
    DenseMatrix z = a.apply_trans(q);  // n x l
    orthonormalize_columns(z);
    q = a.apply(z);
    orthonormalize_columns(q);
  }

  // B = Q^T A (l x n) held transposed: bt = A^T Q (n x l).
  const DenseMatrix bt = a.apply_trans(q);

  // Eigendecompose B B^T = bt^T bt (l x l) to read off the singular triplets.
  const DenseMatrix small = matmul_trans_a(bt, bt);
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;
  symmetric_eigen(small, eigenvalues, eigenvectors);

  FactorizationResult out;
  out.singular_values.resize(k);
  out.left = DenseMatrix(m, k);
  out.right = DenseMatrix(k, n);

  const DenseMatrix u_small = eigenvectors;  // l x l
  const DenseMatrix u_full = matmul(q, u_small);   // m x l
  const DenseMatrix v_full = matmul(bt, u_small);  // n x l, columns sigma * v

  for (std::size_t j = 0; j < k; ++j) {
    const double sigma = std::sqrt(std::max(0.0, eigenvalues[j]));
    out.singular_values[j] = sigma;
    for (std::size_t r = 0; r < m; ++r) out.left(r, j) = u_full(r, j);
    if (sigma > 1e-300) {
      for (std::size_t c = 0; c < n; ++c) out.right(j, c) = v_full(c, j) / sigma;
    }
  }

  // Sign convention: largest-magnitude entry of each left column positive.
  for (std::size_t j = 0; j < k; ++j) {
    double best = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (std::abs(out.left(r, j)) > std::abs(best)) best = out.left(r, j);
    }
    if (best < 0.0) {
      for (std::size_t r = 0; r < m; ++r) out.left(r, j) = -out.left(r, j);
      for (std::size_t c = 0; c < n; ++c) out.right(j, c) = -out.right(j, c);
    }
  }
  return out;
}

FactorizationResult nmf_impl(const MatrixAccess& a, std::size_t d,
                             const NmfOptions& options) {
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  if (d < 1 || d > std::min(m, n)) {
    throw DataError("nmf: d out of range (1 <= d <= min(rows, cols))");
  }

  Rng rng(options.seed);
  DenseMatrix g(m, d);
  DenseMatrix h(d, n);
  for (double& v : g.data()) v = uniform_pos(rng);
  for (double& v : h.data()) v = uniform_pos(rng);

  FactorizationResult out;
  double prev = a.residual_norm(g, h);
  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    // H <- H .* (G^T A) ./ (G^T G H + eps)
    {
      const DenseMatrix num_t = a.apply_trans(g);        // n x d = (G^T A)^T
      const DenseMatrix gtg = matmul_trans_a(g, g);      // d x d
      const DenseMatrix den = matmul(gtg, h);            // d x n
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          h(i, j) *= num_t(j, i) / (den(i, j) + kNmfEps);
        }
      }
    }
    // G <- G .* (A H^T) ./ (G H H^T + eps)
    {
      DenseMatrix ht(n, d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < n; ++j) ht(j, i) = h(i, j);
      }
      const DenseMatrix num = a.apply(ht);               // m x d
      const DenseMatrix hht = matmul_trans_b(h, h);      // d x d
      const DenseMatrix den = matmul(g, hht);            // m x d
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          g(i, j) *= num(i, j) / (den(i, j) + kNmfEps);
        }
      }
    }

    const double objective = a.residual_norm(g, h);
    out.objective_trace.push_back(objective);
    const double decrease = prev - objective;
    if (prev > 0.0 && decrease / prev < options.tol) {
      prev = objective;
      break;
    }
    if (prev == 0.0) break;
    prev = objective;
  }

  out.left = std::move(g);
  out.right = std::move(h);
  return out;
}

}  // namespace

FactorizationResult truncated_svd(const DenseMatrix& matrix, std::size_t k,
                                  std::uint64_t seed) {
  return truncated_svd_impl(dense_access(matrix), k, seed);
}

FactorizationResult truncated_svd(const CooccurrenceMatrix& matrix,
                                  std::size_t k, std::uint64_t seed) {
  return truncated_svd_impl(sparse_access(matrix), k, seed);
}

EmbeddingStore svd_embedding_store(const FactorizationResult& svd,
                                   const std::vector<std::string>& vocab,
                                   bool case_fold) {
  const std::size_t m = svd.left.rows();
  const std::size_t k = svd.left.cols();
  if (vocab.size() != m) {
    throw DataError("svd_embedding_store: vocab size does not match factor rows");
  }
  std::vector<double> matrix(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      matrix[i * k + j] = svd.left(i, j) * svd.singular_values[j];
    }
  }
  return EmbeddingStore(vocab, std::move(matrix), k, case_fold);
}

FactorizationResult nmf(const DenseMatrix& matrix, std::size_t d,
                        const NmfOptions& options) {
  for (double v : matrix.data()) {
    if (v < 0.0) throw DataError("nmf: negative input entry");
  }
  return nmf_impl(dense_access(matrix), d, options);
}

FactorizationResult nmf(const CooccurrenceMatrix& matrix, std::size_t d,
                        const NmfOptions& options) {
  // CooccurrenceMatrix enforces positive stored weights already.
  return nmf_impl(sparse_access(matrix), d, options);
}

EmbeddingStore nmf_embedding_store(const FactorizationResult& factors,
                                   const std::vector<std::string>& vocab,
                                   bool case_fold) {
  const std::size_t m = factors.left.rows();
  const std::size_t d = factors.left.cols();
  if (vocab.size() != m) {
    throw DataError("nmf_embedding_store: vocab size does not match factor rows");
  }
  std::vector<double> matrix(factors.left.data());
  return EmbeddingStore(vocab, std::move(matrix), d, case_fold);
}

}  // namespace relcomp
