#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathmatch/config.hpp"
#include "pathmatch/tree.hpp"

namespace pathmatch {

inline constexpr const char* kCorpusFormat = "pathmatch-corpus/1";
inline constexpr const char* kManifestName = "manifest.txt";

/// manifest.txt of a corpus directory: a key-value header, a `[trees]`
/// marker, then a tab-separated table whose first column is `file`.
struct CorpusManifest {
  KeyValueConfig header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const;

  void write(const std::string& path) const;
  static CorpusManifest read(const std::string& path);
};

struct Corpus {
  std::vector<LabelledTree> trees;
  std::vector<std::string> files;
  /// Class id per tree when the manifest has a `class` column, else -1.
  std::vector<std::int64_t> class_of;
  CorpusManifest manifest;
};

/// Loads every tree listed in `dir/manifest.txt`; without a manifest, every
/// `*.tree` file in name order.
Corpus load_corpus(const std::string& dir);

/// Writes trees as tree_<i>.tree plus a manifest with the given header and
/// per-tree columns (`file` is added in front).
void write_corpus(const std::string& dir, const std::vector<LabelledTree>& trees,
                  const KeyValueConfig& header, const std::vector<std::string>& extra_columns,
                  const std::vector<std::vector<std::string>>& extra_rows,
                  const std::string& file_prefix = "tree_");

}  // namespace pathmatch
