#include "dry_run.hpp"

#include <cstdio>

#include "io.hpp"

namespace segcli {

namespace llm = seg::llm;

DryRunProvider::DryRunProvider(std::string provider_id, std::optional<std::filesystem::path> cache_dir)
    : id_(std::move(provider_id)) {
  if (cache_dir) cache_.emplace(*cache_dir);
}

void DryRunProvider::begin_document(std::filesystem::path dir) {
  dir_ = std::move(dir);
  written_.clear();
}

std::string DryRunProvider::complete(const llm::GenerationRequest& request) {
  char name[64];
  std::snprintf(name, sizeof name, "%02zu-%s.txt", written_.size() + 1,
                std::string(llm::stage_name(request.stage)).c_str());
  auto path = dir_ / name;
  write_text(path, request.prompt);
  written_.push_back(path);
  if (cache_) {
    if (auto hit = cache_->get(llm::request_fingerprint(request, id_))) return *hit;
  }
  throw DryRunHalt(std::string(llm::stage_name(request.stage)));
}

}  // namespace segcli
