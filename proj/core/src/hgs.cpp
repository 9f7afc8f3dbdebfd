#include "seg/hgs.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace seg {

void EmbeddingCache::insert(const Event& e, llm::EmbeddingVector v) {
  std::lock_guard lock(mu_);
  vectors_.insert_or_assign(e.key(), std::move(v));
}

void EmbeddingCache::prefetch(std::span<const Event> events) {
  if (!gateway_) return;
  std::vector<std::string> missing_keys, missing_texts;
  {
    std::lock_guard lock(mu_);
    for (const auto& e : events) {
      if (vectors_.contains(e.key())) continue;
      if (std::find(missing_keys.begin(), missing_keys.end(), e.key()) != missing_keys.end()) continue;
      missing_keys.push_back(e.key());
      missing_texts.push_back(e.text());
    }
  }
  if (missing_texts.empty()) return;
  auto vectors = gateway_->embed(missing_texts);
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < vectors.size(); ++i) vectors_.try_emplace(missing_keys[i], std::move(vectors[i]));
}

llm::EmbeddingVector EmbeddingCache::get(const Event& e) {
  {
    std::lock_guard lock(mu_);
    if (auto it = vectors_.find(e.key()); it != vectors_.end()) return it->second;
  }
  if (!gateway_) throw InvalidArgument("no embedding for event \"" + e.text() + "\"");
  prefetch(std::span<const Event>(&e, 1));
  std::lock_guard lock(mu_);
  return vectors_.at(e.key());
}

std::size_t EmbeddingCache::size() const {
  std::lock_guard lock(mu_);
  return vectors_.size();
}

double clamped_cosine_distance(const llm::EmbeddingVector& a, const llm::EmbeddingVector& b) {
  return std::clamp(llm::cosine_distance(a, b), 0.0, 1.0);
}

double edge_distance(const RelationEdge& a, const RelationEdge& b, EmbeddingCache& embeddings) {
  if (a.relation != b.relation) throw InvalidArgument("edge_distance across relation types");
  double head = a.head == b.head ? 0.0 : clamped_cosine_distance(embeddings.get(a.head), embeddings.get(b.head));
  double tail = a.tail == b.tail ? 0.0 : clamped_cosine_distance(embeddings.get(a.tail), embeddings.get(b.tail));
  return std::max(head, tail);
}

CostMatrix edge_distance_matrix(std::span<const RelationEdge> gold, std::span<const RelationEdge> pred,
                                EmbeddingCache& embeddings) {
  CostMatrix m(gold.size(), pred.size());
  for (std::size_t g = 0; g < gold.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) m(g, p) = edge_distance(gold[g], pred[p], embeddings);
  }
  return m;
}

namespace {
double unit(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

RelationScore score_edges(std::span<const RelationEdge> gold, std::span<const RelationEdge> pred,
                          EmbeddingCache& embeddings) {
  RelationScore s;
  s.gold_edges = gold.size();
  s.pred_edges = pred.size();
  if (gold.empty() && pred.empty()) {
    s.hgs = s.phgs = s.rhgs = 1.0;
    return s;
  }
  if (gold.empty() || pred.empty()) return s;

  std::vector<Event> events;
  for (auto span : {gold, pred}) {
    for (const auto& e : span) {
      events.push_back(e.head);
      events.push_back(e.tail);
    }
  }
  embeddings.prefetch(events);

  CostMatrix distances = edge_distance_matrix(gold, pred, embeddings);
  const std::size_t n = std::max(gold.size(), pred.size());
  CostMatrix padded(n, n, 1.0);
  for (std::size_t g = 0; g < gold.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) padded(g, p) = distances(g, p);
  }
  s.hgs = unit(1.0 - hungarian_min_cost(padded).total_cost / static_cast<double>(n));

  PartialAssignment matched = rectangular_min_cost(distances);
  double similarity = static_cast<double>(matched.pairs.size()) - matched.total_cost;
  s.phgs = unit(similarity / static_cast<double>(pred.size()));
  s.rhgs = unit(similarity / static_cast<double>(gold.size()));
  for (auto [g, p] : matched.pairs) s.matches.push_back({g, p, 1.0 - distances(g, p)});
  return s;
}

double hgs(const RelationGraph& gold, const RelationGraph& pred, EmbeddingCache& embeddings) {
  return score_edges(gold.edges(), pred.edges(), embeddings).hgs;
}

OrientedScores phgs_rhgs(const RelationGraph& gold, const RelationGraph& pred, EmbeddingCache& embeddings) {
  auto s = score_edges(gold.edges(), pred.edges(), embeddings);
  return {s.phgs, s.rhgs};
}

DocumentHgs evaluate_bundle(const EventGraphBundle& gold, const EventGraphBundle& pred,
                            EmbeddingCache& embeddings, const EvalOptions& options) {
  DocumentHgs out;
  out.document_id = gold.document_id();
  for (auto r : kRelationOrder) {
    const auto& g = gold.graph(r);
    const auto& p = pred.graph(r);
    if (options.closure) {
      auto gc = transitive_closure(g);
      auto pc = transitive_closure(p);
      out.relations[static_cast<std::size_t>(r)] = score_edges(gc.edges(), pc.edges(), embeddings);
    } else {
      out.relations[static_cast<std::size_t>(r)] = score_edges(g.edges(), p.edges(), embeddings);
    }
  }
  return out;
}

namespace {

struct Accumulator {
  double hgs = 0.0, phgs = 0.0, rhgs = 0.0;
  std::size_t weight = 0, documents = 0;

  void add(const RelationScore& s) {
    auto w = static_cast<double>(s.gold_edges);
    hgs += s.hgs * w;
    phgs += s.phgs * w;
    rhgs += s.rhgs * w;
    weight += s.gold_edges;
    if (s.gold_edges > 0) ++documents;
  }

  WeightedScores finish() const {
    WeightedScores w;
    w.gold_weight = weight;
    w.documents = documents;
    if (weight > 0) {
      auto total = static_cast<double>(weight);
      w.hgs = hgs / total;
      w.phgs = phgs / total;
      w.rhgs = rhgs / total;
    }
    return w;
  }
};

}  // namespace

CorpusHgs corpus_hgs(std::span<const DocumentHgs> documents) {
  CorpusHgs out;
  std::array<Accumulator, 3> per;
  Accumulator overall;
  for (const auto& d : documents) {
    for (auto r : kRelationOrder) {
      auto i = static_cast<std::size_t>(r);
      const auto& s = d.relations[i];
      per[i].add(s);
      overall.add(s);
      if (s.gold_edges == 0) out.zero_weight_documents[i].push_back(d.document_id);
    }
  }
  for (std::size_t i = 0; i < 3; ++i) out.relations[i] = per[i].finish();
  out.overall = overall.finish();
  out.overall.documents = 0;
  for (const auto& d : documents) {
    bool any = std::any_of(d.relations.begin(), d.relations.end(), [](const RelationScore& s) { return s.gold_edges > 0; });
    if (any) ++out.overall.documents;
  }
  return out;
}

namespace {

nlohmann::ordered_json weighted_json(const WeightedScores& w) {
  nlohmann::ordered_json j;
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  j["hgs"] = opt(w.hgs);
  j["phgs"] = opt(w.phgs);
  j["rhgs"] = opt(w.rhgs);
  j["gold_edges"] = w.gold_weight;
  j["weighted_documents"] = w.documents;
  j["defined"] = w.gold_weight > 0;
  return j;
}

}  // namespace

nlohmann::ordered_json hgs_report_json(const CorpusHgs& corpus, std::span<const DocumentHgs> documents) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json c;
  for (auto r : kRelationOrder) {
    auto w = weighted_json(corpus.at(r));
    w["zero_weight_documents"] = corpus.zero_weight_documents[static_cast<std::size_t>(r)];
    c[std::string(relation_label(r))] = std::move(w);
  }
  c["overall"] = weighted_json(corpus.overall);
  j["corpus"] = std::move(c);
  auto docs = nlohmann::ordered_json::array();
  for (const auto& d : documents) {
    nlohmann::ordered_json dj;
    dj["document_id"] = d.document_id;
    for (auto r : kRelationOrder) {
      const auto& s = d.at(r);
      nlohmann::ordered_json sj;
      sj["hgs"] = s.hgs;
      sj["phgs"] = s.phgs;
      sj["rhgs"] = s.rhgs;
      sj["gold_edges"] = s.gold_edges;
      sj["pred_edges"] = s.pred_edges;
      auto pairs = nlohmann::ordered_json::array();
      for (const auto& m : s.matches) pairs.push_back({m.gold_index, m.pred_index, m.similarity});
      sj["matches"] = std::move(pairs);
      dj[std::string(relation_label(r))] = std::move(sj);
    }
    docs.push_back(std::move(dj));
  }
  j["documents"] = std::move(docs);
  return j;
}

std::string hgs_report_table(const CorpusHgs& corpus) {
  std::ostringstream out;
  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("    n/a");
    char buf[16];
    std::snprintf(buf, sizeof buf, "%7.2f", *v * 100.0);
    return std::string(buf);
  };
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %7s %7s %7s %10s\n", "relation", "PHGS", "RHGS", "HGS", "gold_edges");
  out << line;
  auto row = [&](std::string_view name, const WeightedScores& w) {
    std::snprintf(line, sizeof line, "%-14.*s %s %s %s %10zu\n", static_cast<int>(name.size()), name.data(),
                  pct(w.phgs).c_str(), pct(w.rhgs).c_str(), pct(w.hgs).c_str(), w.gold_weight);
    out << line;
  };
  for (auto r : kRelationOrder) row(relation_label(r), corpus.at(r));
  row("overall", corpus.overall);
  return out.str();
}

}  // namespace seg
