#include "seg/corpus.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <system_error>
#include <thread>
#include <unordered_map>

#include "seg/bundle.hpp"
#include "seg/hash.hpp"

namespace seg {

namespace fs = std::filesystem;

FilterResult filter_documents(std::span<const DocumentRecord> records, const LengthFilter& filter,
                              const std::optional<std::set<std::string>>& allow_ids) {
  FilterResult out;
  for (const auto& doc : records) {
    auto words = word_count(doc.body);
    if (allow_ids && !allow_ids->count(doc.id)) {
      out.excluded.push_back({doc.id, words, "not_selected"});
    } else if (words < filter.min_words) {
      out.excluded.push_back({doc.id, words, "too_short"});
    } else if (words > filter.max_words) {
      out.excluded.push_back({doc.id, words, "too_long"});
    } else {
      out.kept.push_back(doc);
    }
  }
  return out;
}

nlohmann::ordered_json manifest_entry_to_json(const ManifestEntry& e) {
  nlohmann::ordered_json j;
  j["id"] = e.id;
  j["status"] = e.status;
  j["rounds_used"] = nlohmann::ordered_json::object();
  for (auto r : kRelationOrder) {
    auto it = e.rounds_used.find(std::string(relation_name(r)));
    if (it != e.rounds_used.end()) j["rounds_used"][it->first] = it->second;
  }
  if (!e.bundle.empty()) j["bundle"] = e.bundle;
  if (!e.error.empty()) j["error"] = e.error;
  return j;
}

ManifestEntry manifest_entry_from_json(const nlohmann::json& j) {
  ManifestEntry e;
  e.id = j.at("id").get<std::string>();
  e.status = j.at("status").get<std::string>();
  if (j.contains("rounds_used")) e.rounds_used = j["rounds_used"].get<std::map<std::string, int>>();
  e.bundle = j.value("bundle", "");
  e.error = j.value("error", "");
  return e;
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::vector<ManifestEntry> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ManifestEntry e;
    try {
      e = manifest_entry_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception&) {
      continue;  // torn tail line from an interrupted run
    }
    auto [it, fresh] = index.emplace(e.id, out.size());
    if (fresh) {
      out.push_back(std::move(e));
    } else {
      out[it->second] = std::move(e);
    }
  }
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_manifest(const fs::path& path, std::span<const ManifestEntry> entries) {
  std::string text;
  for (const auto& e : entries) text += manifest_entry_to_json(e).dump() + "\n";
  write_file_atomic(path, text);
}

std::string bundle_file_name(const std::string& document_id) {
  std::string safe;
  for (unsigned char c : document_id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
              c == '_' || c == '-';
    safe += ok ? static_cast<char>(c) : '_';
  }
  if (safe.empty() || safe.front() == '.' || safe != document_id) {
    safe += "-" + sha256_hex(document_id).substr(0, 8);
  }
  return safe + ".json";
}

namespace {

class LineAppender {
 public:
  explicit LineAppender(const fs::path& path) : out_(path, std::ios::binary | std::ios::app) {
    if (!out_) throw Error("cannot open " + path.string());
  }
  void append(const std::string& line) {
    std::lock_guard lock(mu_);
    out_ << line << '\n';
    out_.flush();
  }

 private:
  std::mutex mu_;
  std::ofstream out_;
};

ManifestEntry process(const CascadePipeline& pipeline, const DocumentRecord& doc, const fs::path& out_dir,
                      LineAppender* traces) {
  ManifestEntry entry;
  entry.id = doc.id;
  PipelineTrace failed;
  failed.document_id = doc.id;
  try {
    auto result = pipeline.run_document(doc);
    for (const auto& rt : result.trace.relations) {
      entry.rounds_used[std::string(relation_name(rt.relation))] = static_cast<int>(rt.rounds.size());
    }
    entry.bundle = bundle_file_name(doc.id);
    write_file_atomic(out_dir / entry.bundle, canonical_bundle_json(result.bundle));
    entry.status = "ok";
    if (traces) traces->append(trace_to_json(result.trace).dump());
    return entry;
  } catch (const DocumentSkipped& e) {
    entry.status = "skipped";
    entry.error = e.what();
  } catch (const std::exception& e) {
    entry.status = "error";
    entry.error = e.what();
  }
  if (traces) {
    failed.error = entry.error;
    traces->append(trace_to_json(failed).dump());
  }
  return entry;
}

}  // namespace

CorpusReport run_corpus(const CascadePipeline& pipeline, std::span<const DocumentRecord> documents,
                        const CorpusOptions& options) {
  if (options.parallelism < 1) throw InvalidArgument("parallelism must be at least 1");
  fs::create_directories(options.out_dir);
  CorpusReport report;
  report.manifest_path = options.manifest.value_or(options.out_dir / "manifest.jsonl");

  std::unordered_map<std::string, ManifestEntry> previous;
  if (options.resume) {
    for (auto& e : read_manifest(report.manifest_path)) previous.emplace(e.id, std::move(e));
  }

  std::vector<std::optional<ManifestEntry>> results(documents.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    auto it = previous.find(documents[i].id);
    if (it != previous.end() && it->second.status == "ok" && !it->second.bundle.empty() &&
        fs::exists(options.out_dir / it->second.bundle)) {
      results[i] = it->second;
      ++report.resumed;
    } else {
      todo.push_back(i);
    }
  }

  LineAppender manifest(report.manifest_path);
  std::optional<LineAppender> traces;
  if (options.trace) {
    if (options.trace->has_parent_path()) fs::create_directories(options.trace->parent_path());
    traces.emplace(*options.trace);
  }
  std::mutex callback_mu;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < todo.size(); k = next++) {
      std::size_t i = todo[k];
      auto entry = process(pipeline, documents[i], options.out_dir, traces ? &*traces : nullptr);
      manifest.append(manifest_entry_to_json(entry).dump());
      if (options.on_result) {
        std::lock_guard lock(callback_mu);
        options.on_result(entry);
      }
      results[i] = std::move(entry);
    }
  };
  {
    std::vector<std::jthread> pool;
    std::size_t n = std::min(options.parallelism, std::max<std::size_t>(todo.size(), 1));
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }

  for (auto& r : results) {
    if (r->status == "ok") {
      ++report.ok;
    } else if (r->status == "skipped") {
      ++report.skipped;
    } else {
      ++report.errors;
    }
    report.entries.push_back(std::move(*r));
  }
  write_manifest(report.manifest_path, report.entries);
  return report;
}

nlohmann::ordered_json corpus_report_json(const CorpusReport& report) {
  nlohmann::ordered_json j;
  j["documents"] = report.entries.size();
  j["ok"] = report.ok;
  j["skipped"] = report.skipped;
  j["errors"] = report.errors;
  j["resumed"] = report.resumed;
  j["manifest"] = report.manifest_path.string();
  auto failures = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    if (e.status != "ok") failures.push_back({{"id", e.id}, {"status", e.status}, {"error", e.error}});
  }
  j["failures"] = std::move(failures);
  return j;
}

}  // namespace seg
