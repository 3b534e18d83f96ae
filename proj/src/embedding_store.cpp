#include "relcomp/embedding_store.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "relcomp/errors.hpp"

namespace relcomp {

namespace {

bool is_integer_field(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(std::move(tok));
  return out;
}

double parse_value(const std::string& field, const std::string& path,
                   std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DataError(path + ": non-numeric value '" + field + "' at line " +
                    std::to_string(line_no));
  }
  return value;
}

}  // namespace

std::string fold_case(const std::string& token) {
  std::string out = token;
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

EmbeddingStore::EmbeddingStore(std::vector<std::string> vocab,
                               std::vector<double> matrix, std::size_t dim,
                               bool case_fold)
    : vocab_(std::move(vocab)),
      matrix_(std::move(matrix)),
      dim_(dim),
      case_fold_(case_fold) {
  if (dim_ == 0) throw DataError("embedding store: dim must be >= 1");
  if (matrix_.size() != vocab_.size() * dim_) {
    throw DataError("embedding store: matrix size does not match vocab * dim");
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw DataError("embedding store: duplicate token '" + vocab_[i] + "'");
    }
  }
}

EmbeddingStore EmbeddingStore::load(const std::string& path, bool case_fold,
                                    LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");

  LoadStats local;
  std::vector<std::string> vocab;
  std::vector<double> matrix;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t dim = 0;
  std::size_t declared_count = 0;
  bool has_header = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields = split_ws(line);
    if (fields.empty()) continue;

    // A first line with exactly two integer fields is the `count dim` header.
    if (line_no == 1 && fields.size() == 2 && is_integer_field(fields[0]) &&
        is_integer_field(fields[1])) {
      has_header = true;
      declared_count = std::stoull(fields[0]);
      dim = std::stoull(fields[1]);
      if (dim == 0) throw DataError(path + ": header declares dim 0 at line 1");
      continue;
    }

    if (fields.size() < 2) {
      throw DataError(path + ": record with no values at line " +
                      std::to_string(line_no));
    }
    std::string token = fields[0];
    if (case_fold) token = fold_case(token);
    const std::size_t line_dim = fields.size() - 1;
    if (dim == 0) {
      dim = line_dim;
    } else if (line_dim != dim) {
      throw DataError(path + ": dimension mismatch at line " +
                      std::to_string(line_no) + " (expected " +
                      std::to_string(dim) + ", got " + std::to_string(line_dim) +
                      ")");
    }

    if (seen.contains(token)) {
      ++local.duplicate_tokens;  // keep-first
      continue;
    }
    seen.emplace(token, vocab.size());
    vocab.push_back(token);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      matrix.push_back(parse_value(fields[i], path, line_no));
    }
  }

  if (vocab.empty()) throw DataError(path + ": empty embedding file");
  if (has_header && declared_count != vocab.size() + local.duplicate_tokens) {
    ++local.header_count_mismatch;
  }
  if (stats != nullptr) *stats = local;
  return EmbeddingStore(std::move(vocab), std::move(matrix), dim, case_fold);
}

void EmbeddingStore::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open file for writing");
  char buf[64];
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    out << vocab_[i];
    const std::span<const double> r = row(i);
    for (double v : r) {
      std::snprintf(buf, sizeof(buf), " %.9g", v);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError(path + ": write failed");
}

EmbeddingStore EmbeddingStore::normalized(std::size_t* zero_rows) const {
  std::vector<double> matrix = matrix_;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    std::span<double> r{matrix.data() + i * dim_, dim_};
    if (!normalize_in_place(r)) ++zeros;
  }
  if (zero_rows != nullptr) *zero_rows = zeros;
  EmbeddingStore out(vocab_, std::move(matrix), dim_, case_fold_);
  out.normalized_ = true;
  return out;
}

std::optional<std::size_t> EmbeddingStore::find(const std::string& token) const {
  auto it = index_.find(case_fold_ ? fold_case(token) : token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingStore::lookup(const std::string& token) const {
  const auto idx = find(token);
  if (!idx.has_value()) throw TokenNotFound(token);
  return row(*idx);
}

}  // namespace relcomp
