#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace relcomp {

enum class CooccurrenceWeighting { InverseDistance, Uniform };

const std::string& weighting_name(CooccurrenceWeighting w);
CooccurrenceWeighting parse_weighting(const std::string& name);

// Symmetric sparse co-occurrence table over a single vocabulary
// (targets = contexts), stored CSR. Absent cells are 0; stored weights > 0.
class CooccurrenceMatrix {
 public:
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    double weight;
  };

  CooccurrenceMatrix() = default;
  // Entries may be in any order and may repeat; repeats are summed.
  CooccurrenceMatrix(std::vector<std::string> vocab, std::vector<Entry> entries,
                     int window, CooccurrenceWeighting weighting);

  std::size_t size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }
  int window() const { return window_; }
  CooccurrenceWeighting weighting() const { return weighting_; }

  double cell(std::size_t row, std::size_t col) const;
  double total() const;
  double row_sum(std::size_t row) const;
  std::size_t nonzeros() const { return cols_.size(); }

  // CSR access: columns/weights of one row, column-sorted.
  std::span<const std::uint32_t> row_cols(std::size_t row) const;
  std::span<const double> row_weights(std::size_t row) const;

  // `row_token col_token weight` lines, row-major, 9 significant digits.
  void save(const std::string& path) const;
  // Vocabulary order is the order of first appearance in the file.
  static CooccurrenceMatrix load(const std::string& path);

  // y += A * x and y += A^T * x over the sparse structure (A is square).
  void accumulate_product(std::span<const double> x, std::span<double> y) const;
  void accumulate_product_transpose(std::span<const double> x,
                                    std::span<double> y) const;

 private:
  std::vector<std::string> vocab_;
  std::vector<std::size_t> row_start_;  // size() + 1 offsets into cols_/weights_
  std::vector<std::uint32_t> cols_;
  std::vector<double> weights_;
  int window_ = 0;
  CooccurrenceWeighting weighting_ = CooccurrenceWeighting::InverseDistance;
};

// Distance-weighted counts over a token stream. The vocabulary is the top
// vocab_size tokens by frequency (ties by first occurrence); pairs with
// either token out of vocabulary are not counted. Every in-window position
// pair (i < j, j - i <= window) adds 1/(j-i) (inverse-distance) or 1
// (uniform) to both (w_i, w_j) and (w_j, w_i).
CooccurrenceMatrix build_cooccurrence(std::span<const std::string> corpus,
                                      int window, CooccurrenceWeighting weighting,
                                      std::size_t vocab_size,
                                      std::size_t shards = 1);

// Positive pointwise mutual information reweighting:
// cell(x,y) -> max(0, ln(p(x,y) / (p(x) p(y)))), probabilities estimated from
// the (possibly fractional) count matrix marginals. Natural log. Cells that
// land at 0 are dropped from the sparse structure.
CooccurrenceMatrix ppmi(const CooccurrenceMatrix& counts);

}  // namespace relcomp
