#include "relcomp/kbc.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "eval_internal.hpp"
#include "relcomp/errors.hpp"
#include "relcomp/parallel.hpp"

namespace relcomp {

std::vector<KnowledgeTriple> load_triples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<KnowledgeTriple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::strip_line_ending(line)) continue;
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 3) {
      throw DataError(path + ": expected `head relation tail` at line " +
                      std::to_string(line_no));
    }
    triples.push_back({fields[0], fields[1], fields[2]});
  }
  if (triples.empty()) throw DataError(path + ": empty triple file");
  return triples;
}

RelationPrototypeTable build_relation_prototypes(
    const std::vector<KnowledgeTriple>& train, const EmbeddingStore& entities,
    RelationOperator op, const EvalOptions& options) {
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(entities, options, storage);
  const std::size_t rel_dim = composed_dim(op, s.dim());

  RelationPrototypeTable table;
  std::map<std::string, std::size_t> seen_relations;
  Vec composed(rel_dim);
  for (const KnowledgeTriple& t : train) {
    ++seen_relations[t.relation];
    const auto h = s.find(t.head);
    const auto e = s.find(t.tail);
    if (!h || !e) {
      ++table.skipped_triples;
      continue;
    }
    compose_into(op, s.row(*h), s.row(*e), composed);
    auto& proto = table.prototypes[t.relation];
    if (proto.vector.empty()) proto.vector.assign(rel_dim, 0.0);
    for (std::size_t i = 0; i < rel_dim; ++i) proto.vector[i] += composed[i];
    ++proto.support;
  }

  for (const auto& [relation, count] : seen_relations) {
    if (!table.prototypes.contains(relation)) {
      throw DataError("build_relation_prototypes: relation '" + relation +
                      "' has zero usable pairs");
    }
  }
  for (auto& [relation, proto] : table.prototypes) {
    const auto support = static_cast<double>(proto.support);
    for (double& v : proto.vector) v /= support;
  }
  return table;
}

namespace {

struct RankOutcome {
  std::size_t rank = 0;
  bool valid = false;
};

// Shared scoring core: rank of the gold entity among candidates plus an
// optional best-first top list.
RankOutcome rank_one(const EmbeddingStore& s, RelationOperator op,
                     const RelationPrototype& proto, RankSide side,
                     std::size_t anchor, std::size_t gold,
                     const std::vector<std::uint32_t>& candidates,
                     std::size_t top_k,
                     std::vector<std::pair<std::string, double>>* top) {
  Vec composed(proto.vector.size());
  const auto score_of = [&](std::size_t entity) {
    if (side == RankSide::Tail) {
      compose_into(op, s.row(anchor), s.row(entity), composed);
    } else {
      compose_into(op, s.row(entity), s.row(anchor), composed);
    }
    return cosine(proto.vector, composed);
  };

  const double gold_score = score_of(gold);
  std::size_t strictly_better = 0;
  std::vector<std::pair<double, std::uint32_t>> scored;
  if (top != nullptr) scored.reserve(candidates.size());
  for (const std::uint32_t e : candidates) {
    const double score = score_of(e);
    if (score > gold_score) ++strictly_better;
    if (top != nullptr) scored.emplace_back(-score, e);
  }

  RankOutcome out;
  out.rank = 1 + strictly_better;
  out.valid = true;
  if (top != nullptr) {
    std::sort(scored.begin(), scored.end());  // score desc, index asc
    if (scored.size() > top_k) scored.resize(top_k);
    top->clear();
    for (const auto& [neg_score, e] : scored) {
      top->emplace_back(s.token(e), -neg_score);
    }
  }
  return out;
}

}  // namespace

EntityRanking rank_entities(const KnowledgeTriple& query, RankSide side,
                            const RelationPrototypeTable& prototypes,
                            const EmbeddingStore& entities, RelationOperator op,
                            const std::vector<std::uint32_t>& candidates,
                            std::size_t top_k, const EvalOptions& options) {
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(entities, options, storage);

  const auto proto_it = prototypes.prototypes.find(query.relation);
  if (proto_it == prototypes.prototypes.end()) {
    throw DataError("rank_entities: unknown relation '" + query.relation + "'");
  }
  const auto h = s.find(query.head);
  const auto t = s.find(query.tail);
  if (!h || !t) {
    throw TokenNotFound(!h ? query.head : query.tail);
  }
  const std::size_t anchor = side == RankSide::Tail ? *h : *t;
  const std::size_t gold = side == RankSide::Tail ? *t : *h;

  EntityRanking ranking;
  const RankOutcome outcome = rank_one(s, op, proto_it->second, side, anchor,
                                       gold, candidates, top_k, &ranking.top);
  ranking.rank = outcome.rank;
  return ranking;
}

EvalReport eval_kbc(const std::vector<KnowledgeTriple>& test,
                    const RelationPrototypeTable& prototypes,
                    const EmbeddingStore& entities, RelationOperator op,
                    const EvalOptions& options) {
  if (test.empty()) throw DataError("eval_kbc: empty test set");
  std::optional<EmbeddingStore> storage;
  const EmbeddingStore& s = detail::effective_store(entities, options, storage);

  std::vector<std::uint32_t> candidates(s.size());
  std::iota(candidates.begin(), candidates.end(), 0);

  struct TripleRanks {
    std::size_t head_rank = 0;
    std::size_t tail_rank = 0;
    bool valid = false;
  };
  std::vector<TripleRanks> ranks(test.size());

  parallel_for(test.size(), options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const KnowledgeTriple& triple = test[i];
      const auto proto_it = prototypes.prototypes.find(triple.relation);
      if (proto_it == prototypes.prototypes.end()) continue;
      const auto h = s.find(triple.head);
      const auto t = s.find(triple.tail);
      if (!h || !t) continue;
      const RelationPrototype& proto = proto_it->second;
      ranks[i].tail_rank =
          rank_one(s, op, proto, RankSide::Tail, *h, *t, candidates, 0, nullptr)
              .rank;
      ranks[i].head_rank =
          rank_one(s, op, proto, RankSide::Head, *t, *h, candidates, 0, nullptr)
              .rank;
      ranks[i].valid = true;
    }
  });

  std::size_t evaluated = 0;
  double head_rank_sum = 0.0, tail_rank_sum = 0.0;
  std::size_t hits = 0;
  for (const TripleRanks& r : ranks) {
    if (!r.valid) continue;
    ++evaluated;
    head_rank_sum += static_cast<double>(r.head_rank);
    tail_rank_sum += static_cast<double>(r.tail_rank);
    if (r.head_rank <= 10) ++hits;
    if (r.tail_rank <= 10) ++hits;
  }
  if (evaluated == 0) {
    throw DataError("eval_kbc: no test triple could be ranked");
  }

  const double n_ranks = 2.0 * static_cast<double>(evaluated);
  EvalReport report;
  report.task = "kbc";
  report.op = operator_name(op);
  report.metrics["mean_rank"] = (head_rank_sum + tail_rank_sum) / n_ranks;
  report.metrics["mean_rank_head"] =
      head_rank_sum / static_cast<double>(evaluated);
  report.metrics["mean_rank_tail"] =
      tail_rank_sum / static_cast<double>(evaluated);
  report.metrics["hits_at_10"] = 100.0 * static_cast<double>(hits) / n_ranks;
  report.metrics["coverage"] =
      static_cast<double>(evaluated) / static_cast<double>(test.size());
  report.metrics["triples"] = static_cast<double>(test.size());
  return report;
}

}  // namespace relcomp
