#include "io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace segcli {

namespace fs = std::filesystem;

std::string error_json(const std::string& type, const std::string& message, const nlohmann::ordered_json& details) {
  nlohmann::ordered_json err;
  err["type"] = type;
  err["message"] = message;
  if (details.is_object()) {
    for (const auto& [k, v] : details.items()) err[k] = v;
  }
  return nlohmann::ordered_json{{"error", err}}.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("io_error", "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CliError("invalid_json", path.string() + ": " + e.what());
  }
}

std::vector<fs::path> json_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

seg::EventGraphBundle read_bundle(const fs::path& path) {
  auto j = read_json_file(path);
  try {
    return seg::bundle_from_json(j);
  } catch (const seg::Error& e) {
    throw CliError("invalid_bundle", path.string() + ": " + e.what());
  }
}

std::map<std::string, seg::EventGraphBundle> load_bundles(const fs::path& path) {
  std::map<std::string, seg::EventGraphBundle> out;
  if (!fs::exists(path)) throw CliError("io_error", "no such file or directory: " + path.string());
  std::vector<fs::path> files = fs::is_directory(path) ? json_files(path) : std::vector<fs::path>{path};
  for (const auto& f : files) {
    auto bundle = read_bundle(f);
    auto id = bundle.document_id();
    if (!out.emplace(id, std::move(bundle)).second) {
      throw CliError("duplicate_document", "document " + id + " appears twice under " + path.string());
    }
  }
  return out;
}

std::vector<std::string> read_id_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw CliError("io_error", "cannot open " + path.string());
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(b, e - b + 1));
  }
  return ids;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError("io_error", "cannot write " + path.string());
  out << text;
}

}  // namespace segcli
