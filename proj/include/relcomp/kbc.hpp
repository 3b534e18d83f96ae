#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "relcomp/embedding_store.hpp"
#include "relcomp/eval_common.hpp"
#include "relcomp/operators.hpp"
#include "relcomp/report.hpp"

namespace relcomp {

struct KnowledgeTriple {
  std::string head;
  std::string relation;
  std::string tail;
};

// TSV `head relation tail`, one per line.
std::vector<KnowledgeTriple> load_triples(const std::string& path);

struct RelationPrototype {
  Vec vector;               // mean composed vector over training pairs
  std::size_t support = 0;  // number of usable training pairs
};

struct RelationPrototypeTable {
  std::map<std::string, RelationPrototype> prototypes;
  std::size_t skipped_triples = 0;  // training triples with OOV entities
};

// Mean of compose(op, head, tail) per relation over the training triples.
// Triples whose entities are missing from the store are skipped and tallied;
// a relation whose every triple was skipped is an error.
RelationPrototypeTable build_relation_prototypes(
    const std::vector<KnowledgeTriple>& train, const EmbeddingStore& entities,
    RelationOperator op, const EvalOptions& options = {});

enum class RankSide { Head, Tail };

struct EntityRanking {
  std::size_t rank = 0;  // 1 + count of strictly better candidates
  std::vector<std::pair<std::string, double>> top;  // best-first
};

// Scores every candidate entity e by cos(prototype(r), compose(op, h, e))
// for tail prediction (compose(op, e, t) for head prediction). The optimistic
// tie rule ranks the gold at 1 + |strictly greater|. candidates lists store
// row indices; top_k bounds the returned list.
EntityRanking rank_entities(const KnowledgeTriple& query, RankSide side,
                            const RelationPrototypeTable& prototypes,
                            const EmbeddingStore& entities, RelationOperator op,
                            const std::vector<std::uint32_t>& candidates,
                            std::size_t top_k = 10,
                            const EvalOptions& options = {});

// Raw-setting evaluation: both sides of every test triple are ranked against
// all entities in the store; Mean Rank averages the two sides together and
// hits_at_10 is the percentage of ranks <= 10. Triples with unknown
// relations or OOV entities are skipped and tallied as coverage loss.
EvalReport eval_kbc(const std::vector<KnowledgeTriple>& test,
                    const RelationPrototypeTable& prototypes,
                    const EmbeddingStore& entities, RelationOperator op,
                    const EvalOptions& options = {});

}  // namespace relcomp
