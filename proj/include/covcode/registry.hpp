#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "covcode/construct.hpp"

namespace covcode {

// Plain-directory record store: one subdirectory per record holding
// claims.json (claims + provenance + verification statuses), matrix.hex
// (when small enough to materialize), partitions/<name>.txt, verify.log.
// Records built by a construction reload by replaying their provenance,
// which reproduces the matrix bit for bit.
class Registry {
 public:
  explicit Registry(std::filesystem::path root, bool take_lock = true);
  ~Registry();

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  const std::filesystem::path& root() const { return root_; }

  std::vector<std::string> list() const;
  bool contains(const std::string& name) const;

  void save(const CodeRecord& rec, uint64_t store_matrix_max_cols);
  // Loads name (and, recursively, the records its construction needs) into ws.
  std::shared_ptr<CodeRecord> load(Workspace& ws, const std::string& name);

  void append_log(const std::string& name, const std::string& line);

 private:
  std::filesystem::path dir(const std::string& name) const;
  std::filesystem::path root_;
  bool locked_ = false;
};

}  // namespace covcode
