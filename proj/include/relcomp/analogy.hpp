#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relcomp/embedding_store.hpp"
#include "relcomp/eval_common.hpp"
#include "relcomp/operators.hpp"
#include "relcomp/report.hpp"

namespace relcomp {

using TokenPair = std::pair<std::string, std::string>;

// ---------------------------------------------------------------------------
// SAT multiple choice
// ---------------------------------------------------------------------------

struct AnalogyQuestion {
  TokenPair stem;
  std::vector<TokenPair> choices;
  int answer_index = 0;  // 0-based, within choices
};

// Whitespace-separated lines: stem_a stem_b c1_a c1_b ... answer_index.
std::vector<AnalogyQuestion> load_sat_questions(const std::string& path);

struct SatAnswer {
  int chosen = -1;             // -1 when the question is unanswerable
  std::vector<double> scores;  // -inf marks choices with OOV tokens
  bool stem_oov = false;
};

// Scores every choice by the cosine between its relation vector and the
// stem's; ties go to the lowest index.
SatAnswer answer_sat_question(const AnalogyQuestion& question,
                              const EmbeddingStore& store, RelationOperator op,
                              const EvalOptions& options = {});

EvalReport eval_sat(const std::vector<AnalogyQuestion>& dataset,
                    const EmbeddingStore& store, RelationOperator op,
                    const EvalOptions& options = {});

// ---------------------------------------------------------------------------
// SemEval-2012 Task 2 prototype scoring
// ---------------------------------------------------------------------------

struct MaxDiffQuestion {
  std::vector<TokenPair> candidates;
  int gold_most = 0;
  int gold_least = 0;
};

struct SemEvalSubcategory {
  std::string name;
  std::vector<TokenPair> prototypes;
  std::vector<TokenPair> members;
  std::vector<MaxDiffQuestion> maxdiff_questions;
};

// Reads a directory of <name>.prototypes.tsv / <name>.members.tsv /
// <name>.maxdiff.tsv files, one triple per subcategory.
std::vector<SemEvalSubcategory> load_semeval_dataset(const std::string& dir);

// Mean relational similarity between the pair and the subcategory's
// prototype pairs. Prototypes with OOV tokens are skipped; nullopt when the
// pair itself is OOV or every prototype is.
std::optional<double> semeval_score(const TokenPair& pair,
                                    const SemEvalSubcategory& subcategory,
                                    const EmbeddingStore& store,
                                    RelationOperator op,
                                    const EvalOptions& options = {});

// MaxDiff accuracy: per question, the highest-scoring candidate is predicted
// "most illustrative" and the lowest "least"; accuracy is counted per pick.
EvalReport eval_semeval(const std::vector<SemEvalSubcategory>& dataset,
                        const EmbeddingStore& store, RelationOperator op,
                        const EvalOptions& options = {});

// ---------------------------------------------------------------------------
// Open-vocabulary analogy completion (Google / MSR)
// ---------------------------------------------------------------------------

struct CompletionItem {
  std::string a, b, c, d_gold;
  std::string category;
  bool syntactic = false;
};

// Standard 4-token-per-line format with `: category` section headers.
// Categories with a "gram" prefix count as syntactic.
std::vector<CompletionItem> load_completion_dataset(const std::string& path);

// Store row indices for the completion search space.
std::vector<std::uint32_t> full_search_vocab(const EmbeddingStore& store);
// Resolves a token list against the store; OOV tokens are dropped and
// counted in *misses.
std::vector<std::uint32_t> resolve_search_vocab(
    const EmbeddingStore& store, const std::vector<std::string>& tokens,
    std::size_t* misses = nullptr);

// Candidates d in search_vocab \ {a,b,c} ranked by
// cos(compose(op, a, b), compose(op, c, d)) descending, ties by vocab order.
// Throws TokenNotFound when a, b or c is missing.
std::vector<std::pair<std::string, double>> complete_analogy(
    const EmbeddingStore& store, RelationOperator op, const std::string& a,
    const std::string& b, const std::string& c,
    const std::vector<std::uint32_t>& search_vocab,
    const std::vector<std::string>& extra_exclusions = {},
    const EvalOptions& options = {});

// Top-1 accuracy over completion items; Google-style reports also break the
// result down into semantic and syntactic subsets.
EvalReport eval_analogy_completion(const std::vector<CompletionItem>& dataset,
                                   const EmbeddingStore& store,
                                   RelationOperator op,
                                   const std::vector<std::uint32_t>& search_vocab,
                                   const EvalOptions& options = {});

}  // namespace relcomp
