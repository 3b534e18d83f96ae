#include "relcomp/analogy.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include "eval_internal.hpp"
#include "relcomp/errors.hpp"
#include "relcomp/parallel.hpp"

namespace relcomp {

namespace fs = std::filesystem;

namespace {

constexpr double kUnanswerable = -std::numeric_limits<double>::infinity();

int parse_index(const std::string& field, std::size_t limit,
                const std::string& path, std::size_t line_no) {
  int idx = -1;
  try {
    idx = std::stoi(field);
  } catch (const std::exception&) {
    throw DataError(path + ": bad index '" + field + "' at line " +
                    std::to_string(line_no));
  }
  if (idx < 0 || static_cast<std::size_t>(idx) >= limit) {
    throw DataError(path + ": index " + field + " out of range at line " +
                    std::to_string(line_no));
  }
  return idx;
}

std::vector<TokenPair> load_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<TokenPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::strip_line_ending(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw DataError(path + ": expected a word pair at line " +
                      std::to_string(line_no));
    }
    pairs.emplace_back(fields[0], fields[1]);
  }
  return pairs;
}

// Relation vector for a pair of row indices, inputs assumed pre-normalized
// via effective_store.
void compose_rows(const EmbeddingStore& store, RelationOperator op,
                  std::size_t first, std::size_t second, std::span<double> out) {
  compose_into(op, store.row(first), store.row(second), out);
}

}  // namespace

std::vector<AnalogyQuestion> load_sat_questions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<AnalogyQuestion> questions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::strip_line_ending(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 7 || fields.size() % 2 == 0) {
      throw DataError(path + ": malformed question at line " +
                      std::to_string(line_no) +
                      " (want stem pair, choice pairs, answer index)");
    }
    AnalogyQuestion q;
    q.stem = {fields[0], fields[1]};
    const std::size_t n_choices = (fields.size() - 3) / 2;
    for (std::size_t i = 0; i < n_choices; ++i) {
      q.choices.emplace_back(fields[2 + 2 * i], fields[3 + 2 * i]);
    }
    q.answer_index = parse_index(fields.back(), n_choices, path, line_no);
    questions.push_back(std::move(q));
  }
  if (questions.empty()) throw DataError(path + ": empty SAT dataset");
  return questions;
}

SatAnswer answer_sat_question(const AnalogyQuestion& question,
                              const EmbeddingStore& store, RelationOperator op,
                              const EvalOptions& options) {
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(store, options, storage);

  SatAnswer answer;
  answer.scores.assign(question.choices.size(), kUnanswerable);
  const auto stem_a = s.find(question.stem.first);
  const auto stem_b = s.find(question.stem.second);
  if (!stem_a || !stem_b) {
    answer.stem_oov = true;
    return answer;
  }
  Vec stem_rel(composed_dim(op, s.dim()));
  compose_rows(s, op, *stem_a, *stem_b, stem_rel);

  Vec choice_rel(stem_rel.size());
  for (std::size_t i = 0; i < question.choices.size(); ++i) {
    const auto ca = s.find(question.choices[i].first);
    const auto cb = s.find(question.choices[i].second);
    if (!ca || !cb) continue;
    compose_rows(s, op, *ca, *cb, choice_rel);
    answer.scores[i] = cosine(stem_rel, choice_rel);
  }
  for (std::size_t i = 0; i < answer.scores.size(); ++i) {
    if (answer.scores[i] == kUnanswerable) continue;
    if (answer.chosen < 0 ||
        answer.scores[i] > answer.scores[static_cast<std::size_t>(answer.chosen)]) {
      answer.chosen = static_cast<int>(i);
    }
  }
  return answer;
}

EvalReport eval_sat(const std::vector<AnalogyQuestion>& dataset,
                    const EmbeddingStore& store, RelationOperator op,
                    const EvalOptions& options) {
  if (dataset.empty()) throw DataError("eval_sat: empty dataset");
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(store, options, storage);
  EvalOptions inner = options;
  inner.normalize_inputs = false;  // s already carries the requested form

  std::vector<int> chosen(dataset.size(), -1);
  parallel_for(dataset.size(), options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      chosen[i] = answer_sat_question(dataset[i], s, op, inner).chosen;
    }
  });

  std::size_t correct = 0;
  std::size_t answerable = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (chosen[i] >= 0) {
      ++answerable;
      if (chosen[i] == dataset[i].answer_index) ++correct;
    }
  }
  const std::size_t denom =
      options.oov_policy == OovPolicy::Skip ? answerable : dataset.size();

  EvalReport report;
  report.task = "sat";
  report.op = operator_name(op);
  report.metrics["accuracy"] =
      denom == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(denom);
  report.metrics["coverage"] =
      static_cast<double>(answerable) / static_cast<double>(dataset.size());
  report.metrics["questions"] = static_cast<double>(dataset.size());
  report.metrics["correct"] = static_cast<double>(correct);
  return report;
}

std::vector<SemEvalSubcategory> load_semeval_dataset(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError(dir + ": not a SemEval dataset directory");
  }
  const std::string proto_suffix = ".prototypes.tsv";
  std::vector<fs::path> proto_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() > proto_suffix.size() &&
        name.ends_with(proto_suffix)) {
      proto_files.push_back(entry.path());
    }
  }
  std::sort(proto_files.begin(), proto_files.end());
  if (proto_files.empty()) {
    throw DataError(dir + ": no *.prototypes.tsv files found");
  }

  std::vector<SemEvalSubcategory> subcategories;
  for (const fs::path& proto_path : proto_files) {
    SemEvalSubcategory sub;
    const std::string file = proto_path.filename().string();
    sub.name = file.substr(0, file.size() - proto_suffix.size());
    sub.prototypes = load_pair_file(proto_path.string());
    if (sub.prototypes.empty()) {
      throw DataError(proto_path.string() + ": no prototype pairs");
    }
    const fs::path members = proto_path.parent_path() / (sub.name + ".members.tsv");
    if (fs::exists(members)) sub.members = load_pair_file(members.string());

    const fs::path maxdiff = proto_path.parent_path() / (sub.name + ".maxdiff.tsv");
    if (fs::exists(maxdiff)) {
      std::ifstream in(maxdiff);
      if (!in) throw DataError(maxdiff.string() + ": cannot open file");
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (!detail::strip_line_ending(line)) continue;
        const auto fields = detail::split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() < 6 || fields.size() % 2 != 0) {
          throw DataError(maxdiff.string() + ": malformed MaxDiff question at line " +
                          std::to_string(line_no));
        }
        MaxDiffQuestion q;
        const std::size_t n_candidates = (fields.size() - 2) / 2;
        for (std::size_t i = 0; i < n_candidates; ++i) {
          q.candidates.emplace_back(fields[2 * i], fields[2 * i + 1]);
        }
        q.gold_most = parse_index(fields[fields.size() - 2], n_candidates,
                                  maxdiff.string(), line_no);
        q.gold_least = parse_index(fields[fields.size() - 1], n_candidates,
                                   maxdiff.string(), line_no);
        sub.maxdiff_questions.push_back(std::move(q));
      }
    }
    subcategories.push_back(std::move(sub));
  }
  return subcategories;
}

std::optional<double> semeval_score(const TokenPair& pair,
                                    const SemEvalSubcategory& subcategory,
                                    const EmbeddingStore& store,
                                    RelationOperator op,
                                    const EvalOptions& options) {
  if (subcategory.prototypes.empty()) {
    throw DataError("semeval_score: subcategory '" + subcategory.name +
                    "' has no prototypes");
  }
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(store, options, storage);

  const auto pa = s.find(pair.first);
  const auto pb = s.find(pair.second);
  if (!pa || !pb) return std::nullopt;
  Vec pair_rel(composed_dim(op, s.dim()));
  compose_rows(s, op, *pa, *pb, pair_rel);

  Vec proto_rel(pair_rel.size());
  double sum = 0.0;
  std::size_t used = 0;
  for (const TokenPair& proto : subcategory.prototypes) {
    const auto qa = s.find(proto.first);
    const auto qb = s.find(proto.second);
    if (!qa || !qb) continue;
    compose_rows(s, op, *qa, *qb, proto_rel);
    sum += cosine(pair_rel, proto_rel);
    ++used;
  }
  if (used == 0) return std::nullopt;
  return sum / static_cast<double>(used);
}

EvalReport eval_semeval(const std::vector<SemEvalSubcategory>& dataset,
                        const EmbeddingStore& store, RelationOperator op,
                        const EvalOptions& options) {
  if (dataset.empty()) throw DataError("eval_semeval: empty dataset");
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(store, options, storage);
  EvalOptions inner = options;
  inner.normalize_inputs = false;

  EvalReport report;
  report.task = "semeval";
  report.op = operator_name(op);

  std::size_t picks_correct = 0;
  std::size_t picks_counted = 0;
  std::size_t questions_total = 0;
  std::size_t questions_answerable = 0;

  for (const SemEvalSubcategory& sub : dataset) {
    std::size_t sub_correct = 0;
    std::size_t sub_counted = 0;
    for (const MaxDiffQuestion& q : sub.maxdiff_questions) {
      ++questions_total;
      int most = -1;
      int least = -1;
      double most_score = 0.0;
      double least_score = 0.0;
      for (std::size_t i = 0; i < q.candidates.size(); ++i) {
        const auto score = semeval_score(q.candidates[i], sub, s, op, inner);
        if (!score.has_value()) continue;
        if (most < 0 || *score > most_score) {
          most = static_cast<int>(i);
          most_score = *score;
        }
        if (least < 0 || *score < least_score) {
          least = static_cast<int>(i);
          least_score = *score;
        }
      }
      const bool answerable = most >= 0;
      if (answerable) ++questions_answerable;
      if (!answerable && options.oov_policy == OovPolicy::Skip) continue;
      sub_counted += 2;
      if (most == q.gold_most) ++sub_correct;
      if (least == q.gold_least) ++sub_correct;
    }
    picks_correct += sub_correct;
    picks_counted += sub_counted;
    if (sub_counted > 0) {
      report.per_category[sub.name] =
          static_cast<double>(sub_correct) / static_cast<double>(sub_counted);
    }
  }

  report.metrics["accuracy"] = picks_counted == 0
                                   ? 0.0
                                   : static_cast<double>(picks_correct) /
                                         static_cast<double>(picks_counted);
  report.metrics["coverage"] =
      questions_total == 0 ? 0.0
                           : static_cast<double>(questions_answerable) /
                                 static_cast<double>(questions_total);
  report.metrics["questions"] = static_cast<double>(questions_total);
  return report;
}

std::vector<CompletionItem> load_completion_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<CompletionItem> items;
  std::string line;
  std::string category;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::strip_line_ending(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields[0] == ":") {
      category = fields.size() > 1 ? fields[1] : "";
      continue;
    }
    if (fields.size() != 4) {
      throw DataError(path + ": expected 4 tokens at line " +
                      std::to_string(line_no));
    }
    CompletionItem item;
    item.a = fields[0];
    item.b = fields[1];
    item.c = fields[2];
    item.d_gold = fields[3];
    item.category = category.empty() ? "uncategorized" : category;
    item.syntactic = item.category.rfind("gram", 0) == 0;
    items.push_back(std::move(item));
  }
  if (items.empty()) throw DataError(path + ": empty analogy dataset");
  return items;
}

std::vector<std::uint32_t> full_search_vocab(const EmbeddingStore& store) {
  std::vector<std::uint32_t> all(store.size());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::vector<std::uint32_t> resolve_search_vocab(
    const EmbeddingStore& store, const std::vector<std::string>& tokens,
    std::size_t* misses) {
  std::vector<std::uint32_t> out;
  out.reserve(tokens.size());
  std::vector<bool> seen(store.size(), false);
  std::size_t dropped = 0;
  for (const std::string& tok : tokens) {
    const auto idx = store.find(tok);
    if (!idx.has_value()) {
      ++dropped;
      continue;
    }
    if (seen[*idx]) continue;
    seen[*idx] = true;
    out.push_back(static_cast<std::uint32_t>(*idx));
  }
  if (misses != nullptr) *misses = dropped;
  return out;
}

namespace {

// Index of the best candidate (vocab-order ties) or -1; scores every
// candidate in search_vocab except the exclusions.
std::int64_t best_completion(const EmbeddingStore& s, RelationOperator op,
                             std::size_t a, std::size_t b, std::size_t c,
                             const std::vector<std::uint32_t>& search_vocab,
                             const std::vector<bool>& excluded, Vec& query,
                             Vec& candidate, double* best_score) {
  compose_rows(s, op, a, b, query);
  std::int64_t best = -1;
  double best_val = 0.0;
  for (const std::uint32_t d : search_vocab) {
    if (excluded[d]) continue;
    compose_into(op, s.row(c), s.row(d), candidate);
    const double score = cosine(query, candidate);
    if (best < 0 || score > best_val) {
      best = d;
      best_val = score;
    }
  }
  if (best_score != nullptr) *best_score = best_val;
  return best;
}

}  // namespace

std::vector<std::pair<std::string, double>> complete_analogy(
    const EmbeddingStore& store, RelationOperator op, const std::string& a,
    const std::string& b, const std::string& c,
    const std::vector<std::uint32_t>& search_vocab,
    const std::vector<std::string>& extra_exclusions,
    const EvalOptions& options) {
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(store, options, storage);

  auto require = [&s](const std::string& tok) {
    const auto idx = s.find(tok);
    if (!idx.has_value()) throw TokenNotFound(tok);
    return *idx;
  };
  const std::size_t ia = require(a);
  const std::size_t ib = require(b);
  const std::size_t ic = require(c);

  std::vector<bool> excluded(s.size(), false);
  excluded[ia] = excluded[ib] = excluded[ic] = true;
  for (const std::string& tok : extra_exclusions) {
    if (const auto idx = s.find(tok)) excluded[*idx] = true;
  }

  Vec query(composed_dim(op, s.dim()));
  Vec candidate(query.size());
  compose_rows(s, op, ia, ib, query);

  std::vector<std::pair<std::uint32_t, double>> scored;
  scored.reserve(search_vocab.size());
  for (const std::uint32_t d : search_vocab) {
    if (excluded[d]) continue;
    compose_into(op, s.row(ic), s.row(d), candidate);
    scored.emplace_back(d, cosine(query, candidate));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });

  std::vector<std::pair<std::string, double>> out;
  out.reserve(scored.size());
  for (const auto& [idx, score] : scored) {
    out.emplace_back(s.token(idx), score);
  }
  return out;
}

EvalReport eval_analogy_completion(const std::vector<CompletionItem>& dataset,
                                   const EmbeddingStore& store,
                                   RelationOperator op,
                                   const std::vector<std::uint32_t>& search_vocab,
                                   const EvalOptions& options) {
  if (dataset.empty()) throw DataError("eval_analogy_completion: empty dataset");
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(store, options, storage);

  enum class Outcome : unsigned char { Correct, Incorrect, Oov };
  std::vector<Outcome> outcomes(dataset.size(), Outcome::Oov);

  parallel_for(dataset.size(), options.workers, [&](std::size_t begin, std::size_t end) {
    Vec query(composed_dim(op, s.dim()));
    Vec candidate(query.size());
    std::vector<bool> excluded(s.size(), false);
    for (std::size_t i = begin; i < end; ++i) {
      const CompletionItem& item = dataset[i];
      const auto ia = s.find(item.a);
      const auto ib = s.find(item.b);
      const auto ic = s.find(item.c);
      if (!ia || !ib || !ic) continue;  // stays Oov
      excluded[*ia] = excluded[*ib] = excluded[*ic] = true;
      const std::int64_t best = best_completion(s, op, *ia, *ib, *ic,
                                                search_vocab, excluded, query,
                                                candidate, nullptr);
      excluded[*ia] = excluded[*ib] = excluded[*ic] = false;
      const auto gold = s.find(item.d_gold);
      outcomes[i] = (best >= 0 && gold.has_value() &&
                     static_cast<std::size_t>(best) == *gold)
                        ? Outcome::Correct
                        : Outcome::Incorrect;
    }
  });

  struct Tally {
    std::size_t total = 0, answerable = 0, correct = 0;
    double accuracy(OovPolicy policy) const {
      const std::size_t denom = policy == OovPolicy::Skip ? answerable : total;
      return denom == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(denom);
    }
  };
  Tally all, semantic, syntactic;
  std::map<std::string, Tally> categories;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto bump = [&](Tally& t) {
      ++t.total;
      if (outcomes[i] != Outcome::Oov) ++t.answerable;
      if (outcomes[i] == Outcome::Correct) ++t.correct;
    };
    bump(all);
    bump(dataset[i].syntactic ? syntactic : semantic);
    bump(categories[dataset[i].category]);
  }

  EvalReport report;
  report.task = "analogy";
  report.op = operator_name(op);
  report.metrics["accuracy"] = all.accuracy(options.oov_policy);
  report.metrics["coverage"] =
      static_cast<double>(all.answerable) / static_cast<double>(all.total);
  report.metrics["items"] = static_cast<double>(all.total);
  if (semantic.total > 0) {
    report.metrics["accuracy_semantic"] = semantic.accuracy(options.oov_policy);
  }
  if (syntactic.total > 0) {
    report.metrics["accuracy_syntactic"] = syntactic.accuracy(options.oov_policy);
  }
  for (const auto& [name, tally] : categories) {
    report.per_category[name] = tally.accuracy(options.oov_policy);
  }
  return report;
}

}  // namespace relcomp
