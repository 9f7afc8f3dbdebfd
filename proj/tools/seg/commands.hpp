#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "seg/config.hpp"

namespace segcli {

/// Output settings shared by every command.
struct Output {
  bool json = false;
  std::string report_path;
};

struct GenerateArgs {
  std::string ids_file;
  bool dry_run = false;
  int runs = 1;
  bool no_resume = false;
};

struct EvalArgs {
  std::string gold;
  std::string pred;
  bool no_closure = false;
};

struct SaliencyArgs {
  std::string bundles;
  std::string method = "exact";
};

int run_generate(const seg::RunConfig& config, const GenerateArgs& args, const Output& out);
int run_eval_hgs(const seg::RunConfig& config, const EvalArgs& args, const Output& out);
int run_saliency(const seg::RunConfig& config, const SaliencyArgs& args, const Output& out);
int run_stats(const std::vector<std::string>& trace_files, const Output& out);
int run_agreement(const std::string& first, const std::string& second, const Output& out);
int run_validate(const std::vector<std::string>& paths, const Output& out);
int run_show_config(const seg::RunConfig& config);

}  // namespace segcli
