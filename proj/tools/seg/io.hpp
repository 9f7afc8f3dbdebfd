#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "seg/bundle.hpp"
#include "seg/error.hpp"

namespace segcli {

/// Error carrying the process exit code and a machine-readable type.
class CliError : public seg::Error {
 public:
  CliError(std::string type, const std::string& message, int exit_code = 1,
           nlohmann::ordered_json details = nullptr)
      : Error(message), type_(std::move(type)), exit_code_(exit_code), details_(std::move(details)) {}
  const std::string& type() const noexcept { return type_; }
  int exit_code() const noexcept { return exit_code_; }
  const nlohmann::ordered_json& details() const noexcept { return details_; }

 private:
  std::string type_;
  int exit_code_;
  nlohmann::ordered_json details_;
};

/// {"error": {"type", "message", ...details}} on one line.
std::string error_json(const std::string& type, const std::string& message,
                       const nlohmann::ordered_json& details = nullptr);

void warn(const std::string& message);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// `*.json` files directly inside `dir`, sorted by name.
std::vector<std::filesystem::path> json_files(const std::filesystem::path& dir);

seg::EventGraphBundle read_bundle(const std::filesystem::path& path);

/// A bundle file or a directory of them, keyed by document id.
std::map<std::string, seg::EventGraphBundle> load_bundles(const std::filesystem::path& path);

/// One id per non-blank line.
std::vector<std::string> read_id_list(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace segcli
