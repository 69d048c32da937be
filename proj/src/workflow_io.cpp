#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "pathmatch/text.hpp"
#include "pathmatch/workflow.hpp"

namespace pathmatch {

namespace {

[[noreturn]] void bad(const std::string& source, std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": " + what);
}

// Next line that is neither blank nor a `#` comment; false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    return true;
  }
  return false;
}

// Field parsers that report the file position.
struct Fields {
  const std::string& source;
  std::size_t line_no;

  template <class F>
  auto wrap(F f) const -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      bad(source, line_no, e.what());
    }
  }

  double real(std::string_view f, std::string_view what) const {
    return wrap([&] { return parse_double(f, what); });
  }
  std::uint64_t count(std::string_view f, std::string_view what) const {
    return wrap([&] { return parse_uint(f, what); });
  }
  std::int64_t integer(std::string_view f, std::string_view what) const {
    return wrap([&] { return parse_int(f, what); });
  }

};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  return out;
}

}  // namespace

void write_matrix(std::ostream& out, const SquareMatrix& m) {
  out << "n=" << m.n << '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.n; ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

SquareMatrix read_matrix(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw Error(ErrorCode::ParseError, source_name + ": empty matrix file");
  const auto head = trim(line);
  if (head.substr(0, 2) != "n=") bad(source_name, line_no, "expected header 'n=<size>'");
  const auto n = static_cast<std::size_t>(Fields{source_name, line_no}.count(head.substr(2), "matrix size"));
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!next_line(in, line, line_no)) bad(source_name, line_no, "expected " + std::to_string(n) + " rows");
    const auto fields = split(trim(line), ',');
    if (fields.size() != n) {
      bad(source_name, line_no, "expected " + std::to_string(n) + " values, got " +
                                    std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Fields{source_name, line_no}.real(fields[j], "matrix entry");
  }
  if (next_line(in, line, line_no)) bad(source_name, line_no, "trailing data after the last row");
  return m;
}

void write_matrix_file(const std::string& path, const SquareMatrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
}

SquareMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return read_matrix(in, path);
}

void write_embedding(std::ostream& out, const Embedding& e) {
  out << "id";
  for (std::size_t k = 0; k < e.dims; ++k) out << ",x" << k + 1;
  out << '\n';
  for (std::size_t i = 0; i < e.n; ++i) {
    out << i;
    for (std::size_t k = 0; k < e.dims; ++k) out << ',' << format_double(e(i, k));
    out << '\n';
  }
}

Embedding read_embedding(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw Error(ErrorCode::ParseError, source_name + ": empty embedding file");
  const auto header = split(trim(line), ',');
  if (header.size() < 2 || header[0] != "id") bad(source_name, line_no, "expected header 'id,x1,...'");
  Embedding e;
  e.dims = header.size() - 1;
  while (next_line(in, line, line_no)) {
    const auto fields = split(trim(line), ',');
    if (fields.size() != header.size()) bad(source_name, line_no, "wrong number of columns");
    const Fields at{source_name, line_no};
    if (at.count(fields[0], "point id") != e.n) bad(source_name, line_no, "ids must run 0,1,2,...");
    for (std::size_t k = 1; k < fields.size(); ++k) e.coords.push_back(at.real(fields[k], "coordinate"));
    ++e.n;
  }
  return e;
}

void write_partition(std::ostream& out, std::span<const std::int64_t> labels) {
  out << "id,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

std::vector<std::int64_t> read_partition(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no) || trim(line) != "id,cluster") {
    bad(source_name, line_no, "expected header 'id,cluster'");
  }
  std::map<std::uint64_t, std::int64_t> by_id;
  while (next_line(in, line, line_no)) {
    const auto fields = split(trim(line), ',');
    if (fields.size() != 2) bad(source_name, line_no, "expected 'id,cluster'");
    const Fields at{source_name, line_no};
    const auto id = at.count(fields[0], "item id");
    if (!by_id.emplace(id, at.integer(fields[1], "cluster id")).second) {
      bad(source_name, line_no, "duplicate id " + std::to_string(id));
    }
  }
  std::vector<std::int64_t> labels;
  for (const auto& [id, c] : by_id) {
    if (id != labels.size()) {
      throw Error(ErrorCode::ParseError, source_name + ": ids must cover 0.." +
                                             std::to_string(by_id.size() - 1) + " exactly once");
    }
    labels.push_back(c);
  }
  return labels;
}

void write_exemplar(std::ostream& out, const Exemplar& e) {
  out << "support=" << e.support << '\n';
  for (std::size_t p = 0; p < e.sequence.size(); ++p) {
    out << p << '\t' << format_double(e.agreement[p]);
    for (const auto& part : e.sequence[p]) out << '\t' << part;
    out << '\n';
  }
}

Exemplar read_exemplar(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no) || trim(line).substr(0, 8) != "support=") {
    bad(source_name, line_no, "expected header 'support=<n>'");
  }
  Exemplar e;
  e.support = static_cast<std::size_t>(Fields{source_name, line_no}.count(trim(line).substr(8), "support"));
  while (next_line(in, line, line_no)) {
    auto fields = split(line, '\t');
    if (fields.size() < 2) bad(source_name, line_no, "expected 'position<TAB>agreement<TAB>labels'");
    const Fields at{source_name, line_no};
    if (at.count(fields[0], "position") != e.sequence.size()) bad(source_name, line_no, "positions must run 0,1,2,...");
    e.agreement.push_back(at.real(fields[1], "agreement"));
    e.sequence.emplace_back(fields.begin() + 2, fields.end());
  }
  return e;
}

void write_features(std::ostream& out, const TemplateFeatures& f) {
  out << "# tau=" << format_double(f.tau) << '\n' << "id";
  for (std::size_t j = 0; j < f.cols; ++j) out << ",x_" << j + 1;
  out << ",count\n";
  for (std::size_t i = 0; i < f.rows; ++i) {
    out << i;
    for (std::size_t j = 0; j < f.cols; ++j) out << ',' << format_double(f(i, j));
    out << ',' << f.counts[i] << '\n';
  }
}

}  // namespace pathmatch
