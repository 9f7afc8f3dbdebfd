#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "dry_run.hpp"
#include "io.hpp"
#include "seg/agreement.hpp"
#include "seg/corpus.hpp"
#include "seg/format_stats.hpp"
#include "seg/hgs.hpp"
#include "seg/saliency.hpp"

namespace segcli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

void emit(const Output& out, const ojson& report, const std::string& text) {
  if (!out.report_path.empty()) write_text(out.report_path, report.dump(2) + "\n");
  if (out.json) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

seg::prompt::PromptLibrary load_prompts(const seg::RunConfig& config) {
  if (config.templates_dir.empty()) return {};
  return seg::prompt::PromptLibrary::with_overrides(config.templates_dir);
}

std::vector<seg::DocumentRecord> load_corpus(const seg::RunConfig& config) {
  if (config.corpus.empty()) throw CliError("config_error", "no corpus given (--corpus or paths.corpus)", 2);
  return seg::read_documents_jsonl(config.corpus);
}

ojson excluded_json(const std::vector<seg::ExcludedDocument>& excluded) {
  auto a = ojson::array();
  for (const auto& e : excluded) a.push_back({{"id", e.id}, {"words", e.words}, {"reason", e.reason}});
  return a;
}

std::string excluded_text(const seg::FilterResult& f) {
  std::size_t short_n = 0, long_n = 0, unselected = 0;
  for (const auto& e : f.excluded) {
    if (e.reason == "too_short") ++short_n;
    if (e.reason == "too_long") ++long_n;
    if (e.reason == "not_selected") ++unselected;
  }
  std::ostringstream os;
  os << "documents: kept " << f.kept.size() << ", excluded " << f.excluded.size() << " (too_short " << short_n
     << ", too_long " << long_n << ", not_selected " << unselected << ")\n";
  return os.str();
}

ojson metrics_json(const seg::llm::GatewayMetrics& m) {
  return {{"requests", m.requests.load()},         {"provider_calls", m.provider_calls.load()},
          {"cache_hits", m.cache_hits.load()},     {"retries", m.retries.load()},
          {"failures", m.failures.load()},         {"prompt_chars", m.prompt_chars.load()},
          {"response_chars", m.response_chars.load()}};
}

std::string with_suffix(const std::string& path, int run) { return path + ".run-" + std::to_string(run); }

int dry_run(const seg::RunConfig& config, const seg::FilterResult& filtered, const seg::prompt::PromptLibrary& prompts,
            const Output& out) {
  std::string provider_id =
      config.provider.kind == "scripted" ? "scripted" : seg::make_text_provider(config, seg::process_env)->id();
  std::optional<fs::path> cache;
  if (!config.cache_dir.empty()) cache = config.cache_dir;
  auto dry = std::make_shared<DryRunProvider>(provider_id, cache);
  auto options = seg::make_gateway_options(config);
  options.cache_dir.reset();
  options.retry.max_retries = 0;
  seg::llm::Gateway gateway(dry, nullptr, options);
  seg::CascadePipeline pipeline(gateway, prompts, config.pipeline);

  fs::path root = fs::path(config.out_dir) / "prompts";
  ojson docs = ojson::array();
  std::ostringstream text;
  text << excluded_text(filtered);
  std::size_t total = 0;
  for (const auto& doc : filtered.kept) {
    auto stem = seg::bundle_file_name(doc.id);
    stem.resize(stem.size() - 5);
    dry->begin_document(root / stem);
    std::string halted;
    try {
      pipeline.run_document(doc);
    } catch (const seg::Error& e) {
      halted = e.what();
    }
    ojson d;
    d["id"] = doc.id;
    auto files = ojson::array();
    for (const auto& p : dry->written()) files.push_back(p.string());
    d["prompts"] = std::move(files);
    d["halted"] = halted.empty() ? ojson(nullptr) : ojson(halted);
    total += dry->written().size();
    text << doc.id << ": " << dry->written().size() << " prompt(s) in " << (root / stem).string() << "\n";
    docs.push_back(std::move(d));
  }
  text << "dry run wrote " << total << " prompt file(s); no provider calls were made\n";
  ojson report;
  report["dry_run"] = true;
  report["excluded"] = excluded_json(filtered.excluded);
  report["documents"] = std::move(docs);
  emit(out, report, text.str());
  return 0;
}

}  // namespace

int run_generate(const seg::RunConfig& config, const GenerateArgs& args, const Output& out) {
  if (args.runs < 1) throw CliError("config_error", "--runs must be at least 1", 2);
  auto docs = load_corpus(config);
  std::optional<std::set<std::string>> allow;
  if (!args.ids_file.empty()) {
    auto ids = read_id_list(args.ids_file);
    allow.emplace(ids.begin(), ids.end());
  }
  auto filtered = seg::filter_documents(docs, config.pipeline.length_filter, allow);
  auto prompts = load_prompts(config);
  if (args.dry_run) return dry_run(config, filtered, prompts, out);

  auto text_provider = seg::make_text_provider(config, seg::process_env);
  ojson runs = ojson::array();
  std::vector<seg::FormatStats> stats;
  ojson failures = ojson::array();
  std::ostringstream text;
  text << excluded_text(filtered);

  for (int k = 1; k <= args.runs; ++k) {
    seg::RunConfig rc = config;
    std::string trace = config.trace;
    std::string manifest = config.manifest;
    if (args.runs > 1) {
      rc.out_dir = (fs::path(config.out_dir) / ("run-" + std::to_string(k))).string();
      if (!config.cache_dir.empty()) rc.cache_dir = (fs::path(config.cache_dir) / ("run-" + std::to_string(k))).string();
      trace = trace.empty() ? (fs::path(rc.out_dir) / "trace.jsonl").string() : with_suffix(trace, k);
      if (!manifest.empty()) manifest = with_suffix(manifest, k);
    }
    seg::llm::Gateway gateway(text_provider, nullptr, seg::make_gateway_options(rc));
    seg::CascadePipeline pipeline(gateway, prompts, rc.pipeline);
    seg::CorpusOptions co;
    co.out_dir = rc.out_dir;
    if (!manifest.empty()) co.manifest = manifest;
    if (!trace.empty()) co.trace = trace;
    co.parallelism = rc.parallelism;
    co.resume = !args.no_resume;
    auto report = seg::run_corpus(pipeline, filtered.kept, co);

    auto rj = seg::corpus_report_json(report);
    ojson entry;
    entry["run"] = k;
    entry["out_dir"] = rc.out_dir;
    for (const auto& [key, v] : rj.items()) entry[key] = v;
    entry["gateway"] = metrics_json(gateway.metrics());
    text << "run " << k << ": ok " << report.ok << ", skipped " << report.skipped << ", errors " << report.errors
         << ", resumed " << report.resumed << " -> " << rc.out_dir << "\n";
    for (const auto& e : report.entries) {
      if (e.status == "ok") continue;
      text << "  " << e.status << " " << e.id << ": " << e.error << "\n";
      if (e.status == "error") failures.push_back({{"run", k}, {"id", e.id}, {"error", e.error}});
    }
    if (!trace.empty() && fs::exists(trace)) {
      auto traces = seg::read_traces_jsonl(trace);
      if (!traces.empty()) {
        stats.push_back(seg::compute_format_stats(traces));
        entry["format_stats"] = seg::format_stats_json(stats.back());
      }
    }
    runs.push_back(std::move(entry));
  }

  ojson report;
  report["excluded"] = excluded_json(filtered.excluded);
  report["runs"] = std::move(runs);
  if (!stats.empty()) {
    auto mean = seg::average_format_stats(stats);
    report["format_stats_mean"] = seg::format_stats_json(mean);
    char buf[128];
    std::snprintf(buf, sizeof buf, "format errors %.1f%%, cycles %.1f%% (mean of %zu run(s))\n", mean.format_error.percent,
                  mean.cycle.percent, stats.size());
    text << buf;
  }
  emit(out, report, text.str());
  if (!failures.empty()) {
    throw CliError("document_errors", std::to_string(failures.size()) + " document(s) failed", 3,
                   {{"failures", failures}});
  }
  return 0;
}

int run_eval_hgs(const seg::RunConfig& config, const EvalArgs& args, const Output& out) {
  auto gold = load_bundles(args.gold);
  auto pred = load_bundles(args.pred);
  std::vector<std::string> common, gold_only, pred_only;
  for (const auto& [id, _] : gold) (pred.count(id) ? common : gold_only).push_back(id);
  for (const auto& [id, _] : pred) {
    if (!gold.count(id)) pred_only.push_back(id);
  }
  if (!gold_only.empty()) warn(std::to_string(gold_only.size()) + " gold document(s) have no prediction; skipped");
  if (!pred_only.empty()) warn(std::to_string(pred_only.size()) + " predicted document(s) have no gold; skipped");
  if (common.empty()) throw CliError("no_common_documents", "gold and predicted bundles share no document id");

  seg::llm::Gateway gateway(nullptr, seg::make_embedder(config, seg::process_env), seg::make_gateway_options(config));
  seg::EmbeddingCache cache(&gateway);
  std::vector<seg::Event> all;
  for (const auto& id : common) {
    for (const auto* b : {&gold.at(id), &pred.at(id)}) all.insert(all.end(), b->events().begin(), b->events().end());
  }
  cache.prefetch(all);

  seg::EvalOptions options;
  options.closure = !args.no_closure;
  std::vector<std::optional<seg::DocumentHgs>> results(common.size());
  std::vector<std::string> errors(common.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    std::size_t n = std::min(config.parallelism, common.size());
    for (std::size_t t = 0; t < n; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < common.size(); i = next++) {
          try {
            results[i] = seg::evaluate_bundle(gold.at(common[i]), pred.at(common[i]), cache, options);
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
        }
      });
    }
  }
  std::vector<seg::DocumentHgs> docs;
  for (std::size_t i = 0; i < common.size(); ++i) {
    if (!errors[i].empty()) throw CliError("evaluation_error", common[i] + ": " + errors[i]);
    docs.push_back(std::move(*results[i]));
  }
  auto corpus = seg::corpus_hgs(docs);
  auto report = seg::hgs_report_json(corpus, docs);
  report["closure"] = options.closure;
  report["gold_only"] = gold_only;
  report["pred_only"] = pred_only;
  std::string text = seg::hgs_report_table(corpus);
  if (!gold_only.empty() || !pred_only.empty()) {
    text += "evaluated " + std::to_string(common.size()) + " common document(s); " +
            std::to_string(gold_only.size()) + " gold-only, " + std::to_string(pred_only.size()) + " pred-only\n";
  }
  emit(out, report, text);
  return 0;
}

int run_saliency(const seg::RunConfig& config, const SaliencyArgs& args, const Output& out) {
  if (args.method != "exact" && args.method != "llm") {
    throw CliError("config_error", "--method must be exact or llm", 2);
  }
  auto docs = load_corpus(config);
  auto bundles = load_bundles(args.bundles);
  seg::SuffixLemmatizer lemmatizer;
  auto prompts = load_prompts(config);
  std::optional<seg::llm::Gateway> gateway;
  if (args.method == "llm") {
    gateway.emplace(seg::make_text_provider(config, seg::process_env), nullptr, seg::make_gateway_options(config));
  }

  std::vector<seg::DocumentSaliency> results;
  std::set<std::string> seen;
  for (const auto& doc : docs) {
    auto it = bundles.find(doc.id);
    if (it == bundles.end()) continue;
    seen.insert(doc.id);
    if (doc.sentences.empty()) {
      warn(doc.id + " has no sentences; skipped");
      continue;
    }
    auto sd = seg::SentenceDoc::from_document(doc, lemmatizer);
    seg::DocumentSaliency ds{doc.id, {}};
    for (const auto& event : it->second.events()) {
      auto mentions = args.method == "exact"
                          ? seg::detect_mentions_exact(sd, event, lemmatizer)
                          : seg::detect_mentions_llm(doc, sd, event, *gateway, prompts, config.pipeline.stage_params);
      ds.events.push_back(seg::saliency_scores(sd, mentions));
    }
    results.push_back(std::move(ds));
  }
  for (const auto& [id, _] : bundles) {
    if (!seen.count(id)) warn("bundle " + id + " has no document in the corpus; skipped");
  }
  if (results.empty()) throw CliError("no_common_documents", "no corpus document has a bundle");
  auto corpus = seg::corpus_saliency(results);
  auto report = seg::saliency_report_json(corpus, results);
  report["method"] = args.method;
  emit(out, report, seg::saliency_report_table(corpus, results));
  return 0;
}

int run_stats(const std::vector<std::string>& trace_files, const Output& out) {
  std::vector<seg::FormatStats> runs;
  ojson per_run = ojson::array();
  for (const auto& f : trace_files) {
    auto traces = seg::read_traces_jsonl(f);
    if (traces.empty()) throw CliError("empty_trace", f + " holds no traces");
    runs.push_back(seg::compute_format_stats(traces));
    per_run.push_back({{"file", f}, {"stats", seg::format_stats_json(runs.back())}});
  }
  auto mean = seg::average_format_stats(runs);
  ojson report;
  report["runs"] = std::move(per_run);
  report["mean"] = seg::format_stats_json(mean);
  std::string text = seg::format_stats_table(mean);
  if (runs.size() > 1) text += "averaged over " + std::to_string(runs.size()) + " runs\n";
  emit(out, report, text);
  return 0;
}

namespace {

ojson score_json(const seg::AgreementScore& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace

int run_agreement(const std::string& first, const std::string& second, const Output& out) {
  auto a = load_bundles(first);
  auto b = load_bundles(second);
  std::vector<std::string> common, only_a, only_b;
  for (const auto& [id, _] : a) (b.count(id) ? common : only_a).push_back(id);
  for (const auto& [id, _] : b) {
    if (!a.count(id)) only_b.push_back(id);
  }
  if (!only_a.empty() || !only_b.empty()) {
    warn(std::to_string(only_a.size() + only_b.size()) + " document(s) appear on one side only; skipped");
  }
  if (common.empty()) throw CliError("no_common_documents", "the two annotation sets share no document id");

  using EventItem = std::pair<std::string, std::string>;
  using RelItem = std::pair<std::string, seg::RelationTriplet>;
  std::set<EventItem> pooled_ea, pooled_eb;
  std::set<RelItem> pooled_ra, pooled_rb;
  ojson docs = ojson::array();
  for (const auto& id : common) {
    auto ea = seg::event_set(a.at(id));
    auto eb = seg::event_set(b.at(id));
    auto ra = seg::relation_triplets(a.at(id));
    auto rb = seg::relation_triplets(b.at(id));
    for (const auto& e : ea) pooled_ea.emplace(id, e.key());
    for (const auto& e : eb) pooled_eb.emplace(id, e.key());
    for (const auto& r : ra) pooled_ra.emplace(id, r);
    for (const auto& r : rb) pooled_rb.emplace(id, r);
    docs.push_back({{"document_id", id},
                    {"events", score_json(seg::set_agreement(ea, eb))},
                    {"relations", score_json(seg::set_agreement(ra, rb))}});
  }
  auto events = seg::set_agreement(pooled_ea, pooled_eb);
  auto relations = seg::set_agreement(pooled_ra, pooled_rb);
  ojson report;
  report["documents"] = std::move(docs);
  report["pooled"] = {{"events", score_json(events)}, {"relations", score_json(relations)}};
  report["only_in_first"] = only_a;
  report["only_in_second"] = only_b;

  char buf[160];
  std::string text;
  std::snprintf(buf, sizeof buf, "%-10s %10s %10s %10s\n", "", "precision", "recall", "f1");
  text += buf;
  for (const auto& [name, s] : {std::pair{"events", events}, std::pair{"relations", relations}}) {
    std::snprintf(buf, sizeof buf, "%-10s %10.4f %10.4f %10.4f\n", name, s.precision, s.recall, s.f1);
    text += buf;
  }
  text += "documents: " + std::to_string(common.size()) + "\n";
  emit(out, report, text);
  return 0;
}

int run_validate(const std::vector<std::string>& paths, const Output& out) {
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    if (!fs::exists(p)) throw CliError("io_error", "no such file or directory: " + p);
    if (fs::is_directory(p)) {
      auto inner = json_files(p);
      files.insert(files.end(), inner.begin(), inner.end());
    } else {
      files.emplace_back(p);
    }
  }
  ojson results = ojson::array();
  std::string text;
  std::size_t bad = 0;
  std::string first_problem;
  for (const auto& f : files) {
    std::vector<seg::BundleIssue> issues;
    try {
      issues = seg::validate_bundle_json(read_json_file(f));
    } catch (const CliError& e) {
      issues.push_back({"schema", e.what(), {}});
    }
    ojson issue_json = ojson::array();
    for (const auto& i : issues) {
      ojson ij{{"code", i.code}, {"message", i.message}};
      if (!i.cycle.empty()) ij["cycle"] = i.cycle;
      issue_json.push_back(std::move(ij));
    }
    results.push_back({{"file", f.string()}, {"valid", issues.empty()}, {"issues", issue_json}});
    if (issues.empty()) {
      text += f.string() + ": ok\n";
      continue;
    }
    ++bad;
    text += f.string() + ": invalid\n";
    for (const auto& i : issues) text += "  " + i.code + ": " + i.message + "\n";
    if (first_problem.empty()) first_problem = f.string() + ": " + issues.front().message;
  }
  ojson report{{"files", results}, {"valid", bad == 0}};
  emit(out, report, text);
  if (bad) {
    throw CliError("invalid_bundle", std::to_string(bad) + " of " + std::to_string(files.size()) +
                                         " bundle(s) failed validation; " + first_problem,
                   1, {{"files", results}});
  }
  return 0;
}

int run_show_config(const seg::RunConfig& config) {
  std::cout << seg::config_to_json(config).dump(2) << '\n';
  return 0;
}

}  // namespace segcli
