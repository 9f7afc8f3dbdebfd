#include "seg/trace.hpp"

#include <fstream>

namespace seg {

bool round_has_raw_cycle(const RoundTrace& round) {
  std::vector<RelationEdge> all = round.input_edges;
  all.insert(all.end(), round.generated.begin(), round.generated.end());
  return detect_cycle({}, all).has_value();
}

namespace {

using ojson = nlohmann::ordered_json;

ojson edge_json(const RelationEdge& e) { return ojson::array({e.head.text(), e.tail.text()}); }

ojson edges_json(const std::vector<RelationEdge>& edges) {
  auto a = ojson::array();
  for (const auto& e : edges) a.push_back(edge_json(e));
  return a;
}

std::vector<RelationEdge> edges_from(const nlohmann::json& j, RelationType r) {
  std::vector<RelationEdge> out;
  for (const auto& e : j) out.emplace_back(Event(e.at(0).get<std::string>()), Event(e.at(1).get<std::string>()), r);
  return out;
}

}  // namespace

nlohmann::ordered_json trace_to_json(const PipelineTrace& t) {
  ojson j;
  j["document_id"] = t.document_id;
  j["summary"] = t.summary;
  j["events"] = t.events;
  auto rels = ojson::array();
  for (const auto& rt : t.relations) {
    ojson rj;
    rj["relation"] = relation_name(rt.relation);
    rj["early_stopped"] = rt.early_stopped;
    auto rounds = ojson::array();
    for (const auto& r : rt.rounds) {
      ojson x;
      x["round"] = r.round;
      x["parse_status"] = prompt::parse_status_name(r.parse_status);
      x["input_edges"] = edges_json(r.input_edges);
      x["generated"] = edges_json(r.generated);
      auto dropped = ojson::array();
      for (const auto& d : r.dropped) {
        dropped.push_back({{"head", d.head}, {"tail", d.tail}, {"reason", prompt::dropped_reason_name(d.reason)}});
      }
      x["dropped"] = std::move(dropped);
      auto graded = ojson::array();
      for (const auto& g : r.graded) {
        ojson gj;
        gj["edge"] = edge_json(g.edge);
        gj["verdict"] = g.verdict == prompt::Verdict::yes ? "yes" : "no";
        gj["cached"] = g.cached;
        gj["grader_parse_error"] = g.grader_parse_error;
        gj["explanation"] = g.explanation;
        graded.push_back(std::move(gj));
      }
      x["graded"] = std::move(graded);
      x["retained"] = edges_json(r.retained);
      x["cycle_rejected"] = edges_json(r.cycle_rejected);
      rounds.push_back(std::move(x));
    }
    rj["rounds"] = std::move(rounds);
    rels.push_back(std::move(rj));
  }
  j["relations"] = std::move(rels);
  if (t.error) j["error"] = *t.error;
  return j;
}

PipelineTrace trace_from_json(const nlohmann::json& j) {
  try {
    PipelineTrace t;
    t.document_id = j.at("document_id").get<std::string>();
    t.summary = j.value("summary", "");
    t.events = j.value("events", std::vector<std::string>{});
    if (j.contains("error")) t.error = j["error"].get<std::string>();
    for (const auto& rj : j.at("relations")) {
      RelationTrace rt;
      auto rel = parse_relation(rj.at("relation").get<std::string>());
      if (!rel) throw InvalidArgument("unknown relation in trace");
      rt.relation = *rel;
      rt.early_stopped = rj.value("early_stopped", false);
      for (const auto& x : rj.at("rounds")) {
        RoundTrace r;
        r.round = x.at("round").get<int>();
        r.parse_status = x.at("parse_status").get<std::string>() == "ok" ? prompt::ParseStatus::ok
                                                                          : prompt::ParseStatus::format_error;
        r.input_edges = edges_from(x.at("input_edges"), rt.relation);
        r.generated = edges_from(x.at("generated"), rt.relation);
        for (const auto& d : x.value("dropped", nlohmann::json::array())) {
          r.dropped.push_back({d.at("head").get<std::string>(), d.at("tail").get<std::string>(),
                               d.at("reason").get<std::string>() == "self_loop"
                                   ? prompt::DroppedEdge::Reason::self_loop
                                   : prompt::DroppedEdge::Reason::unknown_endpoint});
        }
        for (const auto& g : x.value("graded", nlohmann::json::array())) {
          auto e = edges_from(nlohmann::json::array({g.at("edge")}), rt.relation).front();
          r.graded.push_back({e, g.at("verdict").get<std::string>() == "yes" ? prompt::Verdict::yes : prompt::Verdict::no,
                              g.value("cached", false), g.value("grader_parse_error", false),
                              g.value("explanation", "")});
        }
        r.retained = edges_from(x.at("retained"), rt.relation);
        r.cycle_rejected = edges_from(x.at("cycle_rejected"), rt.relation);
        rt.rounds.push_back(std::move(r));
      }
      t.relations.push_back(std::move(rt));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed trace: ") + e.what());
  }
}

std::vector<PipelineTrace> read_traces_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open trace file " + path.string());
  std::vector<PipelineTrace> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(trace_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace seg
