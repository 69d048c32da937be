#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pathmatch/corpus.hpp"
#include "pathmatch/tree.hpp"

namespace pathmatch {

/// Header names of the four record fields in the edge table.
struct ColumnMap {
  std::string pid = "pid_hash";
  std::string parent_pid = "parent_pid_hash";
  std::string process_name = "process_name";
  std::string user_name = "user_name";
};

struct IngestOptions {
  ColumnMap columns;
  char delimiter = ',';
  /// User names that set the `bad-user` flag of a tree.
  std::set<std::string> flagged_users;
  std::size_t threads = 0;
};

struct IngestStats {
  std::size_t records = 0;
  std::size_t duplicate_records = 0;
  std::size_t conflicting_parents = 0;
  std::size_t orphans = 0;  // parent hash never seen as a pid
  std::size_t cycles_broken = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::uint64_t source_hash = 0;
};

struct IngestedTree {
  LabelledTree tree;
  /// pid hash of each node, in tree index order.
  std::vector<std::string> pids;
  /// First input line that introduced the root.
  std::size_t first_line = 0;
  bool repaired = false;
  bool bad_user = false;
};

struct IngestResult {
  std::vector<IngestedTree> trees;
  IngestStats stats;
  /// One line per repair that changed the graph; empty on clean input.
  std::vector<std::string> warnings;
};

/// Builds the process forest of a delimited edge table whose first line
/// names the columns. Labels are (process_name, user_name); blanks stay
/// empty strings.
///
/// Repairs: an exact repeat of a (pid, parent) record is dropped; a pid seen
/// again under a different parent keeps the first parent; a pid whose parent
/// never appears as a pid roots its own tree; a parent cycle is cut at the
/// edge into its earliest-seen member, which becomes a root. Trees come out
/// in order of their root's first line, nodes in breadth-first order with
/// children in first-seen order. Throws ParseError (with line number) and
/// EmptyInput.
IngestResult ingest_edge_table(std::istream& in, const IngestOptions& options = {},
                               const std::string& source_name = "<table>");
IngestResult ingest_edge_table_file(const std::string& path, const IngestOptions& options = {});

/// Writes tree files plus a manifest holding the counts, the source hash,
/// an optional timestamp, and per-tree size, depth, root label and flags.
void write_ingested_corpus(const std::string& dir, const IngestResult& result,
                           const std::string& source_name, const std::string& timestamp = "");

struct SubtreeFilter {
  std::size_t min_size = 3;
  std::size_t max_size = 10000;
  std::size_t min_subtree_size = 3;
  /// Root process names (compared case-insensitively after trimming) that
  /// disqualify a subtree; a blank name always does.
  std::vector<std::string> excluded_root_names{"unknown"};
};

struct ExtractedSubtree {
  std::size_t tree = 0;
  NodeId root = 0;
  LabelledTree subtree;
};

/// Every node-rooted full subtree of every tree whose size lies in
/// [min_size, max_size], keeping those with at least min_subtree_size nodes
/// and an acceptable root name (label component 0). Ordered by tree, then node.
/// Throws DomainError when min_size > max_size.
std::vector<ExtractedSubtree> extract_subtrees(std::span<const LabelledTree> trees,
                                               const SubtreeFilter& filter = {});

/// Fields of one delimited line; double quotes group a field and `""` is a
/// literal quote.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

}  // namespace pathmatch
