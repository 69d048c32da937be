#include "pathmatch/config.hpp"

#include <fstream>
#include <sstream>

#include "pathmatch/error.hpp"
#include "pathmatch/text.hpp"

namespace pathmatch {

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source_name) {
  KeyValueConfig cfg;
  cfg.source_ = source_name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ParseError,
                  source_name + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto key = trim(body.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::ParseError, source_name + ":" + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_.emplace_back(std::string(key), std::string(trim(body.substr(eq + 1))));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text,
                                            const std::string& source_name) {
  std::istringstream in(text);
  return parse(in, source_name);
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return parse(in, path);
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void KeyValueConfig::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

bool KeyValueConfig::has(const std::string& key) const { return get(key).has_value(); }

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  // last assignment wins
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == key) return it->second;
  }
  return std::nullopt;
}

std::vector<std::string> KeyValueConfig::get_all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (k == key) out.push_back(v);
  }
  return out;
}

std::string KeyValueConfig::require(const std::string& key) const {
  auto v = get(key);
  if (!v) throw Error(ErrorCode::ParseError, source_ + ": missing required key '" + key + "'");
  return *v;
}

std::string KeyValueConfig::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  return v ? parse_double(*v, key) : fallback;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  auto v = get(key);
  return v ? parse_uint(*v, key) : fallback;
}

void KeyValueConfig::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
}

std::string KeyValueConfig::str() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

}  // namespace pathmatch
