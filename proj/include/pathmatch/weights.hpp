#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pathmatch/config.hpp"
#include "pathmatch/tree.hpp"

namespace pathmatch {

enum class WeightKind { Indicator, Frequency, Composite };

std::string_view to_string(WeightKind kind);

/// Declarative predicate making distinct values of one label component
/// interchangeable: two values match when both are covered by the rule.
struct WildcardRule {
  enum class Match { Prefix, Exact };

  std::size_t component = 0;
  Match match = Match::Prefix;
  std::vector<std::string> patterns;

  bool covers(std::string_view value) const;
  friend bool operator==(const WildcardRule&, const WildcardRule&) = default;
};

/// Pairwise label-similarity function w(a, b) with values in [0, 1].
/// Symmetric for every kind. Immutable after construction.
class WeightSpec {
 public:
  using FrequencyTable = std::map<Label, std::uint64_t>;

  static WeightSpec indicator(std::vector<WildcardRule> rules = {});
  static WeightSpec frequency(FrequencyTable counts);
  static WeightSpec composite(std::vector<double> component_weights,
                              std::vector<WildcardRule> rules = {});

  double operator()(const Label& a, const Label& b) const;

  WeightKind kind() const { return kind_; }
  const std::vector<double>& component_weights() const { return component_weights_; }
  const std::vector<WildcardRule>& wildcard_rules() const { return rules_; }
  const FrequencyTable& frequency_table() const { return counts_; }
  /// N(label); 0 for unseen labels.
  std::uint64_t count(const Label& label) const;

  /// True when every value this spec can produce is 0 or 1.
  bool is_binary() const { return kind_ == WeightKind::Indicator; }

  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;

 private:
  bool component_match(std::size_t c, const std::string& a, const std::string& b) const;

  WeightKind kind_ = WeightKind::Indicator;
  FrequencyTable counts_;
  std::vector<double> component_weights_;
  std::vector<WildcardRule> rules_;
};

/// w(a, b) = 1 iff the label tuples are equal.
WeightSpec indicator_weight();

/// w(i, i) = 2 / (N(i) + 2) where N(i) counts label i over all nodes of the
/// corpus; w(i, j) = 0 for i != j. Throws EmptyCorpus.
WeightSpec frequency_weight(std::span<const LabelledTree> corpus);

/// w(a, b) = sum_c weights[c] * match_c(a_c, b_c). Weights must be
/// nonnegative and sum to 1. Evaluating on labels of a different arity
/// throws ArityMismatch.
WeightSpec composite_weight(std::vector<double> component_weights,
                            std::vector<WildcardRule> rules = {});

// Configuration block:
//   kind=indicator|frequency|composite
//   component_weights=0.75,0.25
//   wildcard=<component>:prefix|exact:<pattern>[|<pattern>...]
//   frequency_table=<path>          (frequency kind; relative to the config)
// A frequency spec without a table is fitted to `corpus` when one is given.
KeyValueConfig weight_config(const WeightSpec& w, const std::string& frequency_table_path = "");
WeightSpec weight_from_config(const KeyValueConfig& cfg, const std::string& base_dir = "",
                              std::span<const LabelledTree> corpus = {});

WildcardRule parse_wildcard_rule(std::string_view text);
std::string format_wildcard_rule(const WildcardRule& rule);

/// `count<TAB>component_1<TAB>...` per line.
void write_frequency_table(const std::string& path, const WeightSpec::FrequencyTable& table);
WeightSpec::FrequencyTable read_frequency_table(const std::string& path);

}  // namespace pathmatch
