#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "relcomp/vector_math.hpp"

namespace relcomp {

// Tallies accumulated while reading an embedding file.
struct LoadStats {
  std::size_t duplicate_tokens = 0;  // later occurrences dropped, first kept
  std::size_t header_count_mismatch = 0;
};

// Vocabulary-indexed table of fixed-dimension real vectors. Immutable after
// construction; safe to share read-only across workers.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  // Builds a store from parallel vocab/row data. Rows are packed row-major,
  // dim entries per token. Throws DataError on duplicate tokens or shape
  // mismatch.
  EmbeddingStore(std::vector<std::string> vocab, std::vector<double> matrix,
                 std::size_t dim, bool case_fold = false);

  // Reads the text format: one `token v1 .. vn` record per line, single
  // spaces, optional `count dim` header. With case_fold the tokens are
  // lowercased on entry and duplicates resolved keep-first.
  static EmbeddingStore load(const std::string& path, bool case_fold = false,
                             LoadStats* stats = nullptr);

  // Writes the same text format at 9 significant decimal digits.
  void save(const std::string& path) const;

  // Returns a copy with every non-zero row scaled to unit l2 norm. Zero rows
  // pass through unchanged and are counted in *zero_rows when provided.
  EmbeddingStore normalized(std::size_t* zero_rows = nullptr) const;

  // Index of token, after case-folding when the store folds. Misses are
  // distinguishable from zero vectors: nullopt, never a row.
  std::optional<std::size_t> find(const std::string& token) const;

  // Row for token; throws TokenNotFound on a miss.
  std::span<const double> lookup(const std::string& token) const;

  bool contains(const std::string& token) const { return find(token).has_value(); }

  std::span<const double> row(std::size_t index) const {
    return {matrix_.data() + index * dim_, dim_};
  }

  std::size_t size() const { return vocab_.size(); }
  std::size_t dim() const { return dim_; }
  bool is_normalized() const { return normalized_; }
  bool case_folds() const { return case_fold_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::string& token(std::size_t index) const { return vocab_[index]; }

 private:
  std::vector<std::string> vocab_;
  std::vector<double> matrix_;  // row-major, size() * dim()
  std::size_t dim_ = 0;
  bool normalized_ = false;
  bool case_fold_ = false;
  std::unordered_map<std::string, std::size_t> index_;
};

// Lowercases ASCII letters; multibyte UTF-8 passes through untouched.
std::string fold_case(const std::string& token);

}  // namespace relcomp
