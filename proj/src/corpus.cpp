#include "pathmatch/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pathmatch/text.hpp"

namespace fs = std::filesystem;

namespace pathmatch {

std::optional<std::size_t> CorpusManifest::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns.begin());
}

void CorpusManifest::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "# pathmatch corpus manifest\n";
  header.write(out);
  out << "[trees]\n" << join(columns, "\t") << '\n';
  for (const auto& row : rows) out << join(row, "\t") << '\n';
}

CorpusManifest CorpusManifest::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  std::string header_text;
  bool in_table = false;
  CorpusManifest m;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!in_table) {
      if (line == "[trees]") {
        in_table = true;
        continue;
      }
      header_text += line + '\n';
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    if (m.columns.empty()) {
      m.columns = std::move(fields);
      if (m.columns.front() != "file") {
        throw Error(ErrorCode::ParseError, path + ": first table column must be 'file'");
      }
      continue;
    }
    if (fields.size() != m.columns.size()) {
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(m.columns.size()) + " fields");
    }
    m.rows.push_back(std::move(fields));
  }
  m.header = KeyValueConfig::parse_string(header_text, path);
  return m;
}

Corpus load_corpus(const std::string& dir) {
  Corpus c;
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw Error(ErrorCode::IoError, dir + " is not a directory");
  const fs::path manifest = root / kManifestName;
  if (fs::exists(manifest)) {
    c.manifest = CorpusManifest::read(manifest.string());
    auto class_col = c.manifest.column("class");
    for (const auto& row : c.manifest.rows) {
      c.files.push_back(row[0]);
      c.trees.push_back(read_tree_file((root / row[0]).string()));
      c.class_of.push_back(class_col ? parse_int(row[*class_col], "class") : -1);
    }
  } else {
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().extension() == ".tree") {
        c.files.push_back(entry.path().filename().string());
      }
    }
    std::sort(c.files.begin(), c.files.end());
    for (const auto& f : c.files) {
      c.trees.push_back(read_tree_file((root / f).string()));
      c.class_of.push_back(-1);
    }
    c.manifest.columns = {"file"};
    for (const auto& f : c.files) c.manifest.rows.push_back({f});
  }
  return c;
}

void write_corpus(const std::string& dir, const std::vector<LabelledTree>& trees,
                  const KeyValueConfig& header, const std::vector<std::string>& extra_columns,
                  const std::vector<std::vector<std::string>>& extra_rows,
                  const std::string& file_prefix) {
  fs::create_directories(dir);
  CorpusManifest m;
  m.header = header;
  m.columns = {"file"};
  m.columns.insert(m.columns.end(), extra_columns.begin(), extra_columns.end());
  const int width = trees.size() > 99999 ? 7 : 5;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s%0*zu.tree", file_prefix.c_str(), width, i);
    write_tree_file((fs::path(dir) / name).string(), trees[i]);
    std::vector<std::string> row{name};
    if (i < extra_rows.size()) row.insert(row.end(), extra_rows[i].begin(), extra_rows[i].end());
    m.rows.push_back(std::move(row));
  }
  m.write((fs::path(dir) / kManifestName).string());
}

}  // namespace pathmatch
