#include "neurovariety/store.hpp"

#include <fstream>

#include "neurovariety/errors.hpp"

namespace nv {

ResultStore::ResultStore(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // a missing store is an empty store
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json entry = json::parse(line);
      records_[entry.at("key").get<std::string>()] = std::move(entry.at("record"));
    } catch (const json::exception& e) {
      throw Error("result store " + path_.string() + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::optional<json> ResultStore::find(const std::string& key) const {
  const auto it = records_.find(key);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void ResultStore::append(const std::string& key, const json& record) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error("cannot write result store " + path_.string());
  out << json{{"key", key}, {"record", record}}.dump() << '\n';
  out.flush();
  if (!out) throw Error("write to result store " + path_.string() + " failed");
  records_[key] = record;
}

std::string store_key(const std::string& kind, const Architecture& arch, const ScalarField& field,
                      std::uint64_t seed, int trials) {
  return kind + "|" + arch.to_string() + "|r=" + std::to_string(arch.activation_degree()) + "|" +
         field.descriptor() + "|seed=" + std::to_string(seed) + "|trials=" + std::to_string(trials);
}

}  // namespace nv
