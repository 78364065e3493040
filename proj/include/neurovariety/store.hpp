#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "neurovariety/io.hpp"

namespace nv {

// Append-only JSON-lines file of {"key": ..., "record": {...}} entries.
// Later lines win when a key repeats (a --force rerun). Not thread-safe: a
// single writer owns it.
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path path);

  std::optional<json> find(const std::string& key) const;
  void append(const std::string& key, const json& record);

  std::size_t size() const { return records_.size(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::map<std::string, json> records_;
};

// "<kind>|<arch>|r=<degree>|<field descriptor>|seed=<s>|trials=<t>"
std::string store_key(const std::string& kind, const Architecture& arch, const ScalarField& field,
                      std::uint64_t seed, int trials);

}  // namespace nv
