#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relcomp/embedding_store.hpp"
#include "relcomp/eval_common.hpp"

namespace relcomp::detail {

// Returns the store the evaluation should read from, materializing a
// normalized copy in `storage` when the options ask for normalized inputs
// and the store is not already unit-length.
inline const EmbeddingStore& effective_store(const EmbeddingStore& store,
                                             const EvalOptions& options,
                                             std::optional<EmbeddingStore>& storage) {
  if (options.normalize_inputs && !store.is_normalized()) {
    storage.emplace(store.normalized());
    return *storage;
  }
  return store;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(std::move(tok));
  return out;
}

inline bool strip_line_ending(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return !line.empty();
}

}  // namespace relcomp::detail
