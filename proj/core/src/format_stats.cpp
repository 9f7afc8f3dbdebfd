#include "seg/format_stats.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace seg {

namespace {

void finish(StatCount& c, std::size_t total) {
  c.percent = static_cast<double>(c.count) * 100.0 / static_cast<double>(total);
}

std::size_t index_of(RelationType r) {
  for (std::size_t i = 0; i < kRelationOrder.size(); ++i) {
    if (kRelationOrder[i] == r) return i;
  }
  return 0;
}

}  // namespace

FormatStats compute_format_stats(std::span<const PipelineTrace> traces) {
  if (traces.empty()) throw InvalidArgument("format statistics need at least one trace");
  std::unordered_map<std::string, std::size_t> last;
  for (std::size_t i = 0; i < traces.size(); ++i) last[traces[i].document_id] = i;

  FormatStats s;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (last[traces[i].document_id] != i) continue;
    ++s.documents;
    bool doc_format = false;
    bool doc_cycle = false;
    for (const auto& rt : traces[i].relations) {
      auto& rel = s.relations[index_of(rt.relation)];
      bool rel_format = false;
      bool rel_cycle = false;
      for (const auto& round : rt.rounds) {
        if (round.parse_status == prompt::ParseStatus::format_error) rel_format = true;
        if (round_has_raw_cycle(round)) rel_cycle = true;
        rel.cycle_rejected_edges += round.cycle_rejected.size();
      }
      rel.format_error.count += rel_format;
      rel.cycle.count += rel_cycle;
      doc_format |= rel_format;
      doc_cycle |= rel_cycle;
    }
    s.format_error.count += doc_format;
    s.cycle.count += doc_cycle;
  }
  finish(s.format_error, s.documents);
  finish(s.cycle, s.documents);
  for (auto& r : s.relations) {
    finish(r.format_error, s.documents);
    finish(r.cycle, s.documents);
  }
  return s;
}

FormatStats average_format_stats(std::span<const FormatStats> runs) {
  if (runs.empty()) throw InvalidArgument("averaging needs at least one run");
  double n = static_cast<double>(runs.size());
  struct Acc {
    double count = 0, percent = 0;
    void add(const StatCount& c) {
      count += static_cast<double>(c.count);
      percent += c.percent;
    }
  };
  auto mean = [n](const Acc& a) {
    return StatCount{static_cast<std::size_t>(std::llround(a.count / n)), a.percent / n};
  };
  Acc fe, cy;
  std::array<Acc, 3> rfe{}, rcy{};
  std::array<double, 3> rej{};
  double docs = 0;
  for (const auto& r : runs) {
    docs += static_cast<double>(r.documents);
    fe.add(r.format_error);
    cy.add(r.cycle);
    for (std::size_t i = 0; i < 3; ++i) {
      rfe[i].add(r.relations[i].format_error);
      rcy[i].add(r.relations[i].cycle);
      rej[i] += static_cast<double>(r.relations[i].cycle_rejected_edges);
    }
  }
  FormatStats out;
  out.documents = static_cast<std::size_t>(std::llround(docs / n));
  out.format_error = mean(fe);
  out.cycle = mean(cy);
  for (std::size_t i = 0; i < 3; ++i) {
    out.relations[i].format_error = mean(rfe[i]);
    out.relations[i].cycle = mean(rcy[i]);
    out.relations[i].cycle_rejected_edges = static_cast<std::size_t>(std::llround(rej[i] / n));
  }
  return out;
}

nlohmann::ordered_json format_stats_json(const FormatStats& s) {
  auto stat = [](const StatCount& c) { return nlohmann::ordered_json{{"count", c.count}, {"percent", c.percent}}; };
  nlohmann::ordered_json j;
  j["documents"] = s.documents;
  j["format_error"] = stat(s.format_error);
  j["cycle"] = stat(s.cycle);
  nlohmann::ordered_json rel;
  for (std::size_t i = 0; i < 3; ++i) {
    rel[std::string(relation_name(kRelationOrder[i]))] = {{"format_error", stat(s.relations[i].format_error)},
                                                          {"cycle", stat(s.relations[i].cycle)},
                                                          {"cycle_rejected_edges", s.relations[i].cycle_rejected_edges}};
  }
  j["relations"] = std::move(rel);
  return j;
}

std::string format_stats_table(const FormatStats& s) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %14s %10s %16s\n", "relation", "format_error", "cycle", "cycle_rejected");
  out += buf;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& r = s.relations[i];
    std::snprintf(buf, sizeof buf, "%-16s %13.1f%% %9.1f%% %16zu\n",
                  std::string(relation_name(kRelationOrder[i])).c_str(), r.format_error.percent, r.cycle.percent,
                  r.cycle_rejected_edges);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-16s %13.1f%% %9.1f%%\n", "any", s.format_error.percent, s.cycle.percent);
  out += buf;
  std::snprintf(buf, sizeof buf, "documents: %zu\n", s.documents);
  out += buf;
  return out;
}

}  // namespace seg
