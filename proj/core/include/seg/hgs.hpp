#pragma once

#include <array>
#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "seg/bundle.hpp"
#include "seg/hungarian.hpp"
#include "seg/llm/embedding.hpp"
#include "seg/llm/gateway.hpp"

namespace seg {

/// Event embeddings keyed by event identity, fetched once per unique event.
/// Thread-safe.
class EmbeddingCache {
 public:
  /// Without a gateway only explicitly inserted vectors are available.
  explicit EmbeddingCache(llm::Gateway* gateway = nullptr) : gateway_(gateway) {}

  void insert(const Event& e, llm::EmbeddingVector v);
  /// Embeds every event not yet cached in one batched call.
  void prefetch(std::span<const Event> events);
  /// Throws InvalidArgument when the event is unknown and there is no gateway.
  llm::EmbeddingVector get(const Event& e);
  std::size_t size() const;

 private:
  llm::Gateway* gateway_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, llm::EmbeddingVector> vectors_;
};

/// Cosine distance clamped to [0, 1].
double clamped_cosine_distance(const llm::EmbeddingVector& a, const llm::EmbeddingVector& b);

/// max(D(head1, head2), D(tail1, tail2)) with clamped cosine distances D.
/// Throws InvalidArgument when the relation types differ or an embedding has zero norm.
double edge_distance(const RelationEdge& a, const RelationEdge& b, EmbeddingCache& embeddings);

/// Rows are gold edges, columns predicted edges.
CostMatrix edge_distance_matrix(std::span<const RelationEdge> gold, std::span<const RelationEdge> pred,
                                EmbeddingCache& embeddings);

struct MatchedPair {
  std::size_t gold_index;
  std::size_t pred_index;
  double similarity;  // 1 - distance
};

struct RelationScore {
  double hgs = 0.0;
  double phgs = 0.0;
  double rhgs = 0.0;
  std::size_t gold_edges = 0;
  std::size_t pred_edges = 0;
  std::vector<MatchedPair> matches;
};

/// Hungarian Graph Similarity plus its precision- and recall-oriented forms.
///
/// The gold x pred distance matrix is padded to N = max(|gold|, |pred|) with
/// cost 1 and HGS = 1 - (minimal total cost) / N. The oriented scores match
/// min(|gold|, |pred|) pairs without padding; matched similarity is the pair
/// count minus their total cost, divided by |pred| (PHGS) or |gold| (RHGS).
/// Both sides empty scores 1 everywhere; a zero denominator otherwise gives 0.
RelationScore score_edges(std::span<const RelationEdge> gold, std::span<const RelationEdge> pred,
                          EmbeddingCache& embeddings);

double hgs(const RelationGraph& gold, const RelationGraph& pred, EmbeddingCache& embeddings);

struct OrientedScores {
  double phgs;
  double rhgs;
};

OrientedScores phgs_rhgs(const RelationGraph& gold, const RelationGraph& pred, EmbeddingCache& embeddings);

struct EvalOptions {
  /// Compare transitive closures of both graphs.
  bool closure = true;
};

struct DocumentHgs {
  std::string document_id;
  std::array<RelationScore, 3> relations;  // indexed by RelationType

  const RelationScore& at(RelationType r) const { return relations[static_cast<std::size_t>(r)]; }
};

/// Scores the three relation graphs of two bundles for one document.
DocumentHgs evaluate_bundle(const EventGraphBundle& gold, const EventGraphBundle& pred,
                            EmbeddingCache& embeddings, const EvalOptions& options = {});

struct WeightedScores {
  /// Absent when the total gold weight is zero.
  std::optional<double> hgs, phgs, rhgs;
  std::size_t gold_weight = 0;
  std::size_t documents = 0;
};

struct CorpusHgs {
  std::array<WeightedScores, 3> relations;
  /// All relations pooled, each (document, relation) weighted by its gold edges.
  WeightedScores overall;
  /// Per relation, documents that carried no weight (no gold edges).
  std::array<std::vector<std::string>, 3> zero_weight_documents;

  const WeightedScores& at(RelationType r) const { return relations[static_cast<std::size_t>(r)]; }
};

/// Averages weighted by the number of gold edges: sum(score * |gold|) / sum(|gold|).
CorpusHgs corpus_hgs(std::span<const DocumentHgs> documents);

nlohmann::ordered_json hgs_report_json(const CorpusHgs& corpus, std::span<const DocumentHgs> documents);

/// Aligned table with PHGS / RHGS / HGS per relation, as percentages.
std::string hgs_report_table(const CorpusHgs& corpus);

}  // namespace seg
