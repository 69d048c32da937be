#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pathmatch {

/// Plain-text `key=value` block. `#` starts a comment line; keys may repeat.
/// Entry order is preserved so blocks round-trip.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& source_name = "<config>");
  static KeyValueConfig parse_string(const std::string& text,
                                     const std::string& source_name = "<config>");
  static KeyValueConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  void add(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  std::vector<std::string> get_all(const std::string& key) const;
  /// Throws ParseError naming the key when absent.
  std::string require(const std::string& key) const;

  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::string source_ = "<config>";
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace pathmatch
