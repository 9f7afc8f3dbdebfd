#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "io.hpp"
#include "seg/config.hpp"
#include "seg/llm/errors.hpp"
#include "seg/prompt/template.hpp"

namespace {

using nlohmann::json;

struct GlobalFlags {
  std::string config_file;
  std::optional<std::string> provider, endpoint, model, fixtures, embed_endpoint, embed_model;
  std::optional<std::string> cache_dir, templates_dir, corpus, out_dir, manifest, trace;
  std::optional<int> max_rounds, parallelism, min_words, max_words;
  std::vector<std::string> relations;
  bool no_early_stop = false;

  std::vector<std::pair<std::string, json>> overrides() const {
    std::vector<std::pair<std::string, json>> out;
    auto put = [&out](const char* key, const auto& v) {
      if (v) out.emplace_back(key, *v);
    };
    put("provider.kind", provider);
    put("provider.endpoint", endpoint);
    put("provider.model", model);
    put("provider.fixtures", fixtures);
    if (embed_endpoint) out.emplace_back("embedding.kind", "http");
    put("embedding.endpoint", embed_endpoint);
    put("embedding.model", embed_model);
    put("paths.cache_dir", cache_dir);
    put("paths.templates_dir", templates_dir);
    put("paths.corpus", corpus);
    put("paths.out_dir", out_dir);
    put("paths.manifest", manifest);
    put("paths.trace", trace);
    put("pipeline.max_rounds", max_rounds);
    put("parallelism", parallelism);
    put("filter.min_words", min_words);
    put("filter.max_words", max_words);
    if (!relations.empty()) out.emplace_back("pipeline.relations", relations);
    if (no_early_stop) out.emplace_back("pipeline.early_stop", false);
    return out;
  }
};

seg::RunConfig resolve(const GlobalFlags& g) {
  std::optional<json> file;
  if (!g.config_file.empty()) file = seg::load_config_file(g.config_file);
  return seg::resolve_config(file, seg::process_env, g.overrides());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Salient event relation graphs: cascaded LLM generation and graph-similarity evaluation.\n"
               "The API key is read only from the environment variable named by provider.api_key_env\n"
               "(default SEG_API_KEY)."};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  segcli::Output out;
  app.add_option("--config", g.config_file, "JSON config file (see `seg config`)");
  app.add_option("--provider", g.provider, "Text provider: scripted or http")->check(CLI::IsMember({"scripted", "http"}));
  app.add_option("--endpoint", g.endpoint, "Chat endpoint base URL, e.g. http://host:8000/v1");
  app.add_option("--model", g.model, "Chat model name");
  app.add_option("--fixtures", g.fixtures, "Scripted provider fixture file (JSON lines)");
  app.add_option("--embed-endpoint", g.embed_endpoint, "Embedding endpoint base URL; default is the hashed embedder");
  app.add_option("--embed-model", g.embed_model, "Embedding model name");
  app.add_option("--cache-dir", g.cache_dir, "Response cache directory, one file per request");
  app.add_option("--templates-dir", g.templates_dir, "Directory of <template>.txt files overriding the built-in prompts");
  app.add_option("--max-rounds", g.max_rounds, "Refinement rounds per relation (default 5)");
  app.add_option("--parallelism", g.parallelism, "Documents processed concurrently (default 1)");
  app.add_option("--relation", g.relations,
                 "Generate only these relations (repeatable: hierarchical, temporal, causal)");
  app.add_flag("--no-early-stop", g.no_early_stop, "Always run max-rounds rounds");
  app.add_option("--min-words", g.min_words, "Shortest document kept (default 100)");
  app.add_option("--max-words", g.max_words, "Longest document kept (default 8500)");
  app.add_flag("--json", out.json, "Print the JSON report instead of the text table");
  app.add_option("--report", out.report_path, "Also write the JSON report to this file");

  segcli::GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "Run the pipeline over a JSON-lines corpus");
  gen->add_option("-i,--corpus", g.corpus, "Corpus file, one {\"id\",\"title\",\"body\"} per line");
  gen->add_option("-o,--out", g.out_dir, "Output directory for bundles and the manifest");
  gen->add_option("--manifest", g.manifest, "Manifest path (default <out>/manifest.jsonl)");
  gen->add_option("--trace", g.trace, "Append per-document traces to this JSON-lines file");
  gen->add_option("--ids", gen_args.ids_file, "Keep only documents whose id is listed in this file");
  gen->add_flag("--dry-run", gen_args.dry_run, "Write the prompts to <out>/prompts without calling the provider");
  gen->add_option("--runs", gen_args.runs, "Independent runs, each in <out>/run-N (default 1)");
  gen->add_flag("--no-resume", gen_args.no_resume, "Reprocess documents already listed as done");

  segcli::EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval-hgs", "Hungarian Graph Similarity between gold and predicted bundles");
  eval->add_option("--gold", eval_args.gold, "Gold bundle file or directory")->required();
  eval->add_option("--pred", eval_args.pred, "Predicted bundle file or directory")->required();
  eval->add_flag("--no-closure", eval_args.no_closure, "Compare graphs as given instead of their transitive closures");

  segcli::SaliencyArgs sal_args;
  auto* sal = app.add_subcommand("saliency", "Frequency, first appearance and stretch of bundle events");
  sal->add_option("-i,--corpus", g.corpus, "Corpus file with the documents");
  sal->add_option("--bundles", sal_args.bundles, "Bundle file or directory")->required();
  sal->add_option("--method", sal_args.method, "Mention detection: exact or llm")
      ->check(CLI::IsMember({"exact", "llm"}));

  std::vector<std::string> trace_files;
  auto* stats = app.add_subcommand("stats", "Format-error and cycle statistics from trace files");
  stats->add_option("traces", trace_files, "Trace files, one per run")->required();

  std::string agree_a, agree_b;
  auto* agree = app.add_subcommand("agreement", "Event and relation set agreement between two annotations");
  agree->add_option("first", agree_a, "Annotation bundle file or directory")->required();
  agree->add_option("second", agree_b, "Reference bundle file or directory")->required();

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Check bundle JSON against the schema and DAG invariants");
  validate->add_option("paths", validate_paths, "Bundle files or directories")->required();

  auto* show = app.add_subcommand("config", "Print the resolved configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << segcli::error_json("usage", e.what()) << '\n';
    return 2;
  }

  try {
    seg::RunConfig config;
    try {
      config = resolve(g);
    } catch (const seg::Error& e) {
      throw segcli::CliError("config_error", e.what(), 2);
    }
    if (gen->parsed()) return segcli::run_generate(config, gen_args, out);
    if (eval->parsed()) return segcli::run_eval_hgs(config, eval_args, out);
    if (sal->parsed()) return segcli::run_saliency(config, sal_args, out);
    if (stats->parsed()) return segcli::run_stats(trace_files, out);
    if (agree->parsed()) return segcli::run_agreement(agree_a, agree_b, out);
    if (validate->parsed()) return segcli::run_validate(validate_paths, out);
    if (show->parsed()) return segcli::run_show_config(config);
  } catch (const segcli::CliError& e) {
    std::cerr << segcli::error_json(e.type(), e.what(), e.details()) << '\n';
    return e.exit_code();
  } catch (const seg::ConfigError& e) {
    std::cerr << segcli::error_json("config_error", e.what()) << '\n';
    return 2;
  } catch (const seg::prompt::TemplateError& e) {
    std::cerr << segcli::error_json("template_error", e.what()) << '\n';
    return 2;
  } catch (const seg::llm::LlmError& e) {
    std::cerr << segcli::error_json("provider_error", e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << segcli::error_json("error", e.what()) << '\n';
    return 1;
  }
  return 0;
}
