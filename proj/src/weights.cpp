#include "pathmatch/weights.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "pathmatch/text.hpp"

namespace pathmatch {

std::string_view to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Indicator: return "indicator";
    case WeightKind::Frequency: return "frequency";
    case WeightKind::Composite: return "composite";
  }
  return "indicator";
}

bool WildcardRule::covers(std::string_view value) const {
  for (const auto& p : patterns) {
    if (match == Match::Prefix ? value.starts_with(p) : value == p) return true;
  }
  return false;
}

WeightSpec WeightSpec::indicator(std::vector<WildcardRule> rules) {
  WeightSpec w;
  w.kind_ = WeightKind::Indicator;
  w.rules_ = std::move(rules);
  return w;
}

WeightSpec WeightSpec::frequency(FrequencyTable counts) {
  WeightSpec w;
  w.kind_ = WeightKind::Frequency;
  w.counts_ = std::move(counts);
  return w;
}

WeightSpec WeightSpec::composite(std::vector<double> component_weights,
                                 std::vector<WildcardRule> rules) {
  if (component_weights.empty()) {
    throw Error(ErrorCode::DomainError, "composite weight needs at least one component");
  }
  double total = 0.0;
  for (double x : component_weights) {
    if (!(x >= 0.0)) throw Error(ErrorCode::DomainError, "component weights must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::DomainError,
                "component weights must sum to 1 (got " + format_double(total) + ")");
  }
  for (const auto& r : rules) {
    if (r.component >= component_weights.size()) {
      throw Error(ErrorCode::ArityMismatch, "wildcard rule names component " +
                                                std::to_string(r.component) + " but arity is " +
                                                std::to_string(component_weights.size()));
    }
  }
  WeightSpec w;
  w.kind_ = WeightKind::Composite;
  w.component_weights_ = std::move(component_weights);
  w.rules_ = std::move(rules);
  return w;
}

std::uint64_t WeightSpec::count(const Label& label) const {
  auto it = counts_.find(label);
  return it == counts_.end() ? 0 : it->second;
}

bool WeightSpec::component_match(std::size_t c, const std::string& a, const std::string& b) const {
  if (a == b) return true;
  for (const auto& r : rules_) {
    if (r.component == c && r.covers(a) && r.covers(b)) return true;
  }
  return false;
}

double WeightSpec::operator()(const Label& a, const Label& b) const {
  switch (kind_) {
    case WeightKind::Indicator: {
      if (a.size() != b.size()) return 0.0;
      for (std::size_t c = 0; c < a.size(); ++c) {
        if (!component_match(c, a[c], b[c])) return 0.0;
      }
      return 1.0;
    }
    case WeightKind::Frequency:
      if (a != b) return 0.0;
      return 2.0 / (static_cast<double>(count(a)) + 2.0);
    case WeightKind::Composite: {
      if (a.size() != component_weights_.size() || b.size() != component_weights_.size()) {
        throw Error(ErrorCode::ArityMismatch,
                    "composite weight has " + std::to_string(component_weights_.size()) +
                        " components, labels have arity " + std::to_string(a.size()) + " and " +
                        std::to_string(b.size()));
      }
      double total = 0.0;
      for (std::size_t c = 0; c < a.size(); ++c) {
        if (component_match(c, a[c], b[c])) total += component_weights_[c];
      }
      return std::min(total, 1.0);
    }
  }
  return 0.0;
}

WeightSpec indicator_weight() { return WeightSpec::indicator(); }

WeightSpec frequency_weight(std::span<const LabelledTree> corpus) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "frequency weight needs a nonempty corpus");
  WeightSpec::FrequencyTable counts;
  for (const auto& t : corpus) {
    for (const auto& l : t.labels()) ++counts[l];
  }
  return WeightSpec::frequency(std::move(counts));
}

WeightSpec composite_weight(std::vector<double> component_weights, std::vector<WildcardRule> rules) {
  return WeightSpec::composite(std::move(component_weights), std::move(rules));
}

WildcardRule parse_wildcard_rule(std::string_view text) {
  auto parts = split(text, ':');
  if (parts.size() < 3) {
    throw Error(ErrorCode::ParseError,
                "wildcard rule must look like <component>:prefix|exact:<pattern>[|...]: " +
                    std::string(text));
  }
  WildcardRule r;
  r.component = static_cast<std::size_t>(parse_uint(parts[0], "wildcard component"));
  if (parts[1] == "prefix") {
    r.match = WildcardRule::Match::Prefix;
  } else if (parts[1] == "exact") {
    r.match = WildcardRule::Match::Exact;
  } else {
    throw Error(ErrorCode::ParseError, "unknown wildcard match kind '" + parts[1] + "'");
  }
  // patterns may themselves contain ':'
  std::string rest = parts[2];
  for (std::size_t i = 3; i < parts.size(); ++i) rest += ":" + parts[i];
  r.patterns = split(rest, '|');
  return r;
}

std::string format_wildcard_rule(const WildcardRule& rule) {
  return std::to_string(rule.component) + ":" +
         (rule.match == WildcardRule::Match::Prefix ? "prefix" : "exact") + ":" +
         join(rule.patterns, "|");
}

KeyValueConfig weight_config(const WeightSpec& w, const std::string& frequency_table_path) {
  KeyValueConfig cfg;
  cfg.add("kind", std::string(to_string(w.kind())));
  if (w.kind() == WeightKind::Composite) {
    std::vector<std::string> parts;
    for (double x : w.component_weights()) parts.push_back(format_double(x));
    cfg.add("component_weights", join(parts, ","));
  }
  for (const auto& r : w.wildcard_rules()) cfg.add("wildcard", format_wildcard_rule(r));
  if (w.kind() == WeightKind::Frequency && !frequency_table_path.empty()) {
    cfg.add("frequency_table", frequency_table_path);
  }
  return cfg;
}

WeightSpec weight_from_config(const KeyValueConfig& cfg, const std::string& base_dir,
                              std::span<const LabelledTree> corpus) {
  auto kind = cfg.get_or("kind", "indicator");
  std::vector<WildcardRule> rules;
  for (const auto& r : cfg.get_all("wildcard")) rules.push_back(parse_wildcard_rule(r));

  if (kind == "indicator") return WeightSpec::indicator(std::move(rules));
  if (kind == "composite") {
    return WeightSpec::composite(parse_double_list(cfg.require("component_weights"),
                                                   "component_weights"),
                                 std::move(rules));
  }
  if (kind == "frequency") {
    if (auto table = cfg.get("frequency_table")) {
      std::filesystem::path p(*table);
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      return WeightSpec::frequency(read_frequency_table(p.string()));
    }
    if (corpus.empty()) {
      throw Error(ErrorCode::EmptyCorpus,
                  "frequency weight without frequency_table needs a corpus to fit on");
    }
    return frequency_weight(corpus);
  }
  throw Error(ErrorCode::ParseError, "unknown weight kind '" + kind + "'");
}

void write_frequency_table(const std::string& path, const WeightSpec::FrequencyTable& table) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  for (const auto& [label, n] : table) {
    out << n;
    for (const auto& c : label) out << '\t' << c;
    out << '\n';
  }
}

WeightSpec::FrequencyTable read_frequency_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  WeightSpec::FrequencyTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, '\t');
    auto n = parse_uint(fields[0], path + ":" + std::to_string(line_no));
    table[Label(fields.begin() + 1, fields.end())] += n;
  }
  return table;
}

}  // namespace pathmatch
