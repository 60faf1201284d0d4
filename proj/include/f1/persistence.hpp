#pragma once

#include <filesystem>
#include <string>

#include "f1/store.hpp"

namespace f1 {

/// Line-delimited JSON store, one file per collection:
///
///   <data_dir>/<collection>.jsonl
///   line 1:  {"collection": "<name>", "format": 1, "count": N}
///   line 2+: one record per line, N lines, ordered by id
///
/// Saves write temp files and rename them into place; a save touching several
/// collections commits all of them or none. A missing file is an empty
/// collection; anything unreadable raises CorruptStore(file, line).
class FileBackend final : public StoreBackend {
 public:
  static constexpr int kFormatVersion = 1;
  static constexpr const char* kCommitMarker = "commit.pending";

  /// Creates the directory if needed; throws std::runtime_error if it is not a
  /// writable directory.
  explicit FileBackend(std::filesystem::path data_dir);

  StoreSnapshot load() override;
  void save(const StoreSnapshot& snapshot, CollectionSet dirty) override;

  const std::filesystem::path& data_dir() const noexcept { return dir_; }
  std::filesystem::path file_for(Collection c) const;

 private:
  void recover();
  std::filesystem::path dir_;
};

/// Serialized body of one collection file, exactly as written to disk.
std::string encode_collection(const StoreSnapshot& snapshot, Collection c);

}  // namespace f1
