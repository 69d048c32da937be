#include "pathmatch/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <unordered_map>

#include "pathmatch/text.hpp"
#include "pathmatch/workflow.hpp"

namespace pathmatch {

std::vector<std::string> split_delimited(std::string_view line, char delimiter) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c != '"') {
        out.back() += c;
      } else if (i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else {
        quoted = false;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

struct Node {
  std::string pid;
  std::string parent_pid;
  Label label;
  std::size_t line = 0;
  std::uint32_t parent = kNone;
  bool repaired = false;
};

// Tree files are tab-separated, so stray tabs in a field become spaces.
std::string clean(std::string s) {
  std::replace(s.begin(), s.end(), '\t', ' ');
  return s;
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name,
                      const std::string& source) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw Error(ErrorCode::ParseError, source + ":1: missing column '" + name + "'");
}

// Cuts every parent cycle at the edge into its earliest-seen member.
void break_cycles(std::vector<Node>& nodes, IngestResult& result) {
  std::vector<std::uint8_t> state(nodes.size(), 0);  // 0 new, 1 on the current walk, 2 settled
  std::vector<std::uint32_t> walk;
  for (std::uint32_t start = 0; start < nodes.size(); ++start) {
    walk.clear();
    std::uint32_t v = start;
    while (v != kNone && state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = nodes[v].parent;
    }
    if (v != kNone && state[v] == 1) {
      // walk holds ... v ... and the cycle is the tail starting at v
      const auto from = std::find(walk.begin(), walk.end(), v);
      const std::uint32_t cut = *std::min_element(from, walk.end());
      const Node& parent = nodes[nodes[cut].parent];
      result.warnings.push_back("line " + std::to_string(nodes[cut].line) + ": cycle through pid " +
                                nodes[cut].pid + " (" + std::to_string(walk.end() - from) +
                                " nodes) broken by dropping edge " + parent.pid + " -> " +
                                nodes[cut].pid);
      nodes[cut].parent = kNone;
      nodes[cut].repaired = true;
      ++result.stats.cycles_broken;
    }
    for (auto w : walk) state[w] = 2;
  }
}

}  // namespace

IngestResult ingest_edge_table(std::istream& in, const IngestOptions& options,
                               const std::string& source_name) {
  IngestResult result;
  auto& stats = result.stats;
  stats.source_hash = fnv1a64("");

  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() {
    if (!std::getline(in, line)) return false;
    ++line_no;
    stats.source_hash = fnv1a64(line, stats.source_hash);
    stats.source_hash = fnv1a64("\n", stats.source_hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next()) throw Error(ErrorCode::EmptyInput, source_name + ": no header line");
  const auto header = split_delimited(line, options.delimiter);
  const std::size_t c_pid = column_of(header, options.columns.pid, source_name);
  const std::size_t c_parent = column_of(header, options.columns.parent_pid, source_name);
  const std::size_t c_name = column_of(header, options.columns.process_name, source_name);
  const std::size_t c_user = column_of(header, options.columns.user_name, source_name);

  std::vector<Node> nodes;
  std::unordered_map<std::string, std::uint32_t> index;
  while (next()) {
    if (trim(line).empty()) continue;
    auto f = split_delimited(line, options.delimiter);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::ParseError, source_name + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(header.size()) + " fields, got " +
                                             std::to_string(f.size()));
    }
    ++stats.records;
    std::string pid(trim(f[c_pid]));
    std::string parent(trim(f[c_parent]));
    if (pid.empty()) {
      throw Error(ErrorCode::ParseError, source_name + ":" + std::to_string(line_no) + ": empty pid");
    }
    const auto [it, fresh] = index.emplace(pid, static_cast<std::uint32_t>(nodes.size()));
    if (!fresh) {
      Node& seen = nodes[it->second];
      if (seen.parent_pid == parent) {
        ++stats.duplicate_records;
      } else {
        ++stats.conflicting_parents;
        seen.repaired = true;
        result.warnings.push_back("line " + std::to_string(line_no) + ": pid " + pid +
                                  " already has parent " + seen.parent_pid + " (line " +
                                  std::to_string(seen.line) + "); ignoring parent " + parent);
      }
      continue;
    }
    Node n;
    n.pid = std::move(pid);
    n.parent_pid = std::move(parent);
    n.label = Label{clean(std::move(f[c_name])), clean(std::move(f[c_user]))};
    n.line = line_no;
    nodes.push_back(std::move(n));
  }
  if (nodes.empty()) throw Error(ErrorCode::EmptyInput, source_name + ": no records");
  if (nodes.size() >= kNone) throw Error(ErrorCode::InstanceTooLarge, source_name + ": too many processes");

  for (auto& n : nodes) {
    if (n.parent_pid.empty()) continue;
    const auto it = index.find(n.parent_pid);
    if (it == index.end()) {
      ++stats.orphans;
    } else {
      n.parent = it->second;
    }
  }
  break_cycles(nodes, result);

  // children in first-seen order, as a CSR table
  std::vector<std::uint32_t> child_begin(nodes.size() + 1, 0);
  for (const auto& n : nodes) {
    if (n.parent != kNone) ++child_begin[n.parent + 1];
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) child_begin[i + 1] += child_begin[i];
  std::vector<std::uint32_t> children(child_begin.back());
  {
    auto fill = child_begin;
    for (std::uint32_t v = 0; v < nodes.size(); ++v) {
      if (nodes[v].parent != kNone) children[fill[nodes[v].parent]++] = v;
    }
  }
  std::vector<std::uint32_t> roots;
  for (std::uint32_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v].parent == kNone) roots.push_back(v);
  }

  result.trees.resize(roots.size());
  parallel_for(roots.size(), options.threads, [&](std::size_t t, std::size_t) {
    std::vector<std::uint32_t> order{roots[t]};
    std::vector<std::int64_t> parents{kNoParent};
    for (std::size_t head = 0; head < order.size(); ++head) {
      const std::uint32_t v = order[head];
      for (auto k = child_begin[v]; k < child_begin[v + 1]; ++k) {
        order.push_back(children[k]);
        parents.push_back(static_cast<std::int64_t>(head));
      }
    }
    IngestedTree& out = result.trees[t];
    std::vector<Label> labels;
    labels.reserve(order.size());
    out.pids.reserve(order.size());
    for (auto v : order) {
      labels.push_back(nodes[v].label);
      out.pids.push_back(nodes[v].pid);
      out.repaired = out.repaired || nodes[v].repaired;
      out.bad_user = out.bad_user || options.flagged_users.count(nodes[v].label[1]) > 0;
    }
    out.first_line = nodes[roots[t]].line;
    out.tree = build_tree(parents, std::move(labels)).tree;
  });
  stats.nodes = nodes.size();
  stats.edges = nodes.size() - roots.size();
  return result;
}

IngestResult ingest_edge_table_file(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return ingest_edge_table(in, options, path);
}

void write_ingested_corpus(const std::string& dir, const IngestResult& result,
                           const std::string& source_name, const std::string& timestamp) {
  const auto& s = result.stats;
  KeyValueConfig header;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(s.source_hash));
  header.set("format", kCorpusFormat);
  header.set("source", "edge-table");
  header.set("source_file", source_name);
  header.set("source_fnv1a64", hash);
  if (!timestamp.empty()) header.set("ingested_at", timestamp);
  header.set("records", std::to_string(s.records));
  header.set("duplicate_records", std::to_string(s.duplicate_records));
  header.set("conflicting_parents", std::to_string(s.conflicting_parents));
  header.set("orphans", std::to_string(s.orphans));
  header.set("cycles_broken", std::to_string(s.cycles_broken));
  header.set("trees", std::to_string(result.trees.size()));
  header.set("nodes", std::to_string(s.nodes));
  header.set("edges", std::to_string(s.edges));
  header.set("warnings", std::to_string(result.warnings.size()));

  std::vector<LabelledTree> trees;
  std::vector<std::vector<std::string>> rows;
  trees.reserve(result.trees.size());
  rows.reserve(result.trees.size());
  for (const auto& t : result.trees) {
    trees.push_back(t.tree);
    std::string flags;
    if (t.repaired) flags = "repaired";
    if (t.bad_user) flags += flags.empty() ? "bad-user" : ",bad-user";
    rows.push_back({std::to_string(t.tree.size()), std::to_string(t.tree.height()),
                    t.tree.label(0)[0], t.tree.label(0)[1], flags.empty() ? "-" : flags, t.pids[0]});
  }
  write_corpus(dir, trees, header, {"size", "depth", "root_name", "root_user", "flags", "root_pid"}, rows,
               "proc_");
}

std::vector<ExtractedSubtree> extract_subtrees(std::span<const LabelledTree> trees,
                                               const SubtreeFilter& filter) {
  if (filter.min_size > filter.max_size) {
    throw Error(ErrorCode::DomainError, "min_size " + std::to_string(filter.min_size) +
                                            " exceeds max_size " + std::to_string(filter.max_size));
  }
  auto excluded = [&](const Label& l) {
    const auto name = l.empty() ? std::string_view{} : trim(l[0]);
    if (name.empty()) return true;
    return std::any_of(filter.excluded_root_names.begin(), filter.excluded_root_names.end(),
                       [&](const std::string& x) { return equals_ci(name, trim(x)); });
  };
  std::vector<ExtractedSubtree> out;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const auto& tree = trees[t];
    if (tree.size() < filter.min_size || tree.size() > filter.max_size) continue;
    for (NodeId v = 0; v < tree.size(); ++v) {
      if (tree.subtree_size(v) < filter.min_subtree_size || excluded(tree.label(v))) continue;
      out.push_back({t, v, tree.subtree(v)});
    }
  }
  return out;
}

}  // namespace pathmatch
