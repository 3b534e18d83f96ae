#include "relcomp/cooccurrence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "relcomp/errors.hpp"

namespace relcomp {

const std::string& weighting_name(CooccurrenceWeighting w) {
  static const std::string names[] = {"inverse-distance", "uniform"};
  return names[static_cast<int>(w)];
}

CooccurrenceWeighting parse_weighting(const std::string& name) {
  if (name == "inverse-distance") return CooccurrenceWeighting::InverseDistance;
  if (name == "uniform") return CooccurrenceWeighting::Uniform;
  throw ConfigError("unknown weighting '" + name +
                    "' (expected inverse-distance or uniform)");
}

CooccurrenceMatrix::CooccurrenceMatrix(std::vector<std::string> vocab,
                                       std::vector<Entry> entries, int window,
                                       CooccurrenceWeighting weighting)
    : vocab_(std::move(vocab)), window_(window), weighting_(weighting) {
  for (const Entry& e : entries) {
    if (e.row >= vocab_.size() || e.col >= vocab_.size()) {
      throw DataError("cooccurrence: entry index out of range");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_start_.assign(vocab_.size() + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < entries.size() && entries[j].row == entries[i].row &&
           entries[j].col == entries[i].col) {
      sum += entries[j].weight;
      ++j;
    }
    if (sum != 0.0) {
      cols_.push_back(entries[i].col);
      weights_.push_back(sum);
      ++row_start_[entries[i].row + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < vocab_.size(); ++r) {
    row_start_[r + 1] += row_start_[r];
  }
}

double CooccurrenceMatrix::cell(std::size_t row, std::size_t col) const {
  const auto cols = row_cols(row);
  const auto it = std::lower_bound(cols.begin(), cols.end(),
                                   static_cast<std::uint32_t>(col));
  if (it == cols.end() || *it != col) return 0.0;
  return weights_[row_start_[row] + static_cast<std::size_t>(it - cols.begin())];
}

double CooccurrenceMatrix::total() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double CooccurrenceMatrix::row_sum(std::size_t row) const {
  double s = 0.0;
  for (double w : row_weights(row)) s += w;
  return s;
}

std::span<const std::uint32_t> CooccurrenceMatrix::row_cols(std::size_t row) const {
  return {cols_.data() + row_start_[row], row_start_[row + 1] - row_start_[row]};
}

std::span<const double> CooccurrenceMatrix::row_weights(std::size_t row) const {
  return {weights_.data() + row_start_[row],
          row_start_[row + 1] - row_start_[row]};
}

void CooccurrenceMatrix::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open file for writing");
  char buf[64];
  for (std::size_t r = 0; r < size(); ++r) {
    const auto cols = row_cols(r);
    const auto weights = row_weights(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      std::snprintf(buf, sizeof(buf), " %.9g", weights[k]);
      out << vocab_[r] << ' ' << vocab_[cols[k]] << buf << '\n';
    }
  }
  if (!out) throw DataError(path + ": write failed");
}

CooccurrenceMatrix CooccurrenceMatrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<std::string> vocab;
  std::unordered_map<std::string, std::uint32_t> index;
  auto intern = [&](const std::string& tok) {
    auto [it, inserted] = index.emplace(tok, vocab.size());
    if (inserted) vocab.push_back(tok);
    return it->second;
  };
  std::vector<Entry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string row_tok, col_tok, weight_field;
    if (!(ss >> row_tok >> col_tok >> weight_field)) {
      throw DataError(path + ": malformed matrix line " + std::to_string(line_no));
    }
    double w = 0.0;
    const char* first = weight_field.data();
    const char* last = weight_field.data() + weight_field.size();
    auto [ptr, ec] = std::from_chars(first, last, w);
    if (ec != std::errc() || ptr != last) {
      throw DataError(path + ": non-numeric weight at line " +
                      std::to_string(line_no));
    }
    if (w < 0.0) {
      throw DataError(path + ": negative weight at line " +
                      std::to_string(line_no));
    }
    if (w == 0.0) continue;  // absent cells mean 0
    entries.push_back({intern(row_tok), intern(col_tok), w});
  }
  if (entries.empty()) throw DataError(path + ": empty matrix file");
  return CooccurrenceMatrix(std::move(vocab), std::move(entries), 0,
                            CooccurrenceWeighting::InverseDistance);
}

void CooccurrenceMatrix::accumulate_product(std::span<const double> x,
                                            std::span<double> y) const {
  for (std::size_t r = 0; r < size(); ++r) {
    const auto cols = row_cols(r);
    const auto weights = row_weights(r);
    double s = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) s += weights[k] * x[cols[k]];
    y[r] += s;
  }
}

void CooccurrenceMatrix::accumulate_product_transpose(std::span<const double> x,
                                                      std::span<double> y) const {
  for (std::size_t r = 0; r < size(); ++r) {
    const auto cols = row_cols(r);
    const auto weights = row_weights(r);
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (std::size_t k = 0; k < cols.size(); ++k) y[cols[k]] += weights[k] * xr;
  }
}

CooccurrenceMatrix build_cooccurrence(std::span<const std::string> corpus,
                                      int window,
                                      CooccurrenceWeighting weighting,
                                      std::size_t vocab_size,
                                      std::size_t shards) {
  if (corpus.empty()) throw DataError("build_cooccurrence: empty corpus");
  if (window < 1) throw DataError("build_cooccurrence: window must be >= 1");
  if (vocab_size < 1) throw DataError("build_cooccurrence: vocab_size must be >= 1");
  if (shards < 1) shards = 1;

  // Frequency-ranked vocabulary, ties broken by first occurrence.
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> freq;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto [it, inserted] = freq.emplace(corpus[i], std::make_pair(std::size_t{0}, i));
    ++it->second.first;
  }
  std::vector<const std::string*> ranked;
  ranked.reserve(freq.size());
  for (const auto& [tok, info] : freq) ranked.push_back(&tok);
  std::sort(ranked.begin(), ranked.end(),
            [&](const std::string* a, const std::string* b) {
              const auto& fa = freq.at(*a);
              const auto& fb = freq.at(*b);
              return fa.first != fb.first ? fa.first > fb.first
                                          : fa.second < fb.second;
            });
  if (ranked.size() > vocab_size) ranked.resize(vocab_size);
  std::vector<std::string> vocab;
  vocab.reserve(ranked.size());
  std::unordered_map<std::string, std::uint32_t> index;
  for (const std::string* t : ranked) {
    index.emplace(*t, vocab.size());
    vocab.push_back(*t);
  }

  // Map each position to a vocab id once; -1 marks out-of-vocabulary tokens.
  std::vector<std::int64_t> ids(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto it = index.find(corpus[i]);
    ids[i] = it == index.end() ? -1 : static_cast<std::int64_t>(it->second);
  }

  // Sharded accumulation over contiguous target ranges; the pair (i, j) is
  // attributed to target i, so shard maps merge without double counting and
  // the fixed shard order keeps the result identical for any shard count.
  const std::size_t n = corpus.size();
  std::vector<std::map<std::pair<std::uint32_t, std::uint32_t>, double>> parts(
      shards);
  const std::size_t chunk = (n + shards - 1) / shards;
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t begin = s * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    auto& local = parts[s];
    for (std::size_t i = begin; i < end; ++i) {
      if (ids[i] < 0) continue;
      const auto a = static_cast<std::uint32_t>(ids[i]);
      const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(window));
      for (std::size_t j = i + 1; j <= hi; ++j) {
        if (ids[j] < 0) continue;
        const auto b = static_cast<std::uint32_t>(ids[j]);
        const double w = weighting == CooccurrenceWeighting::InverseDistance
                             ? 1.0 / static_cast<double>(j - i)
                             : 1.0;
        local[{a, b}] += w;
        local[{b, a}] += w;
      }
    }
  }

  std::vector<CooccurrenceMatrix::Entry> entries;
  for (const auto& part : parts) {
    for (const auto& [key, w] : part) {
      entries.push_back({key.first, key.second, w});
    }
  }
  return CooccurrenceMatrix(std::move(vocab), std::move(entries), window,
                            weighting);
}

CooccurrenceMatrix ppmi(const CooccurrenceMatrix& counts) {
  const double total = counts.total();
  if (total <= 0.0) throw DataError("ppmi: all-zero matrix");
  std::vector<double> row_sums(counts.size(), 0.0);
  std::vector<double> col_sums(counts.size(), 0.0);
  for (std::size_t r = 0; r < counts.size(); ++r) {
    const auto cols = counts.row_cols(r);
    const auto weights = counts.row_weights(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      row_sums[r] += weights[k];
      col_sums[cols[k]] += weights[k];
    }
  }
  std::vector<CooccurrenceMatrix::Entry> entries;
  for (std::size_t r = 0; r < counts.size(); ++r) {
    const auto cols = counts.row_cols(r);
    const auto weights = counts.row_weights(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      // ln(p(x,y) / (p(x) p(y))) with ML estimates = ln(c * total / (rx * cy)).
      const double value =
          std::log(weights[k] * total / (row_sums[r] * col_sums[cols[k]]));
      if (value > 0.0) {
        entries.push_back({static_cast<std::uint32_t>(r), cols[k], value});
      }
    }
  }
  return CooccurrenceMatrix(counts.vocab(), std::move(entries), counts.window(),
                            counts.weighting());
}

}  // namespace relcomp
