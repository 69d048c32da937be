#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "pathmatch/text.hpp"
#include "pathmatch/tree.hpp"

namespace pathmatch {

LabelledTree read_tree(std::istream& in, const std::string& source_name) {
  std::vector<std::string> ids;
  std::vector<std::string> parent_ids;
  std::vector<std::size_t> line_of;
  std::vector<Label> labels;
  std::unordered_map<std::string, std::int64_t> position;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2) {
      throw Error(ErrorCode::ParseError, source_name + ":" + std::to_string(line_no) +
                                             ": expected node_id<TAB>parent_id[<TAB>labels]");
    }
    if (!position.emplace(fields[0], static_cast<std::int64_t>(ids.size())).second) {
      throw Error(ErrorCode::ParseError,
                  source_name + ":" + std::to_string(line_no) + ": duplicate node id " + fields[0]);
    }
    ids.push_back(fields[0]);
    parent_ids.push_back(fields[1]);
    line_of.push_back(line_no);
    labels.emplace_back(fields.begin() + 2, fields.end());
  }
  if (ids.empty()) throw Error(ErrorCode::EmptyInput, source_name + ": no nodes");

  std::vector<std::int64_t> parents(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (parent_ids[i] == "-1") {
      parents[i] = kNoParent;
      continue;
    }
    auto it = position.find(parent_ids[i]);
    if (it == position.end()) {
      throw Error(ErrorCode::ParseError,
                  source_name + ":" + std::to_string(line_of[i]) + ": node " + ids[i] +
                      " has unknown parent " + parent_ids[i]);
    }
    parents[i] = it->second;
  }
  return build_tree(parents, std::move(labels)).tree;
}

LabelledTree read_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_tree(in, path);
}

void write_tree(std::ostream& out, const LabelledTree& t) {
  for (NodeId v = 0; v < t.size(); ++v) {
    out << v << '\t' << t.parent(v);
    for (const auto& c : t.label(v)) out << '\t' << c;
    out << '\n';
  }
}

void write_tree_file(const std::string& path, const LabelledTree& t) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_tree(out, t);
}

}  // namespace pathmatch
