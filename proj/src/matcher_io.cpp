#include <ostream>

#include <json.hpp>

#include "pathmatch/matcher.hpp"
#include "pathmatch/text.hpp"

namespace pathmatch {

void write_match_record(std::ostream& out, const LabelledTree& g, const LabelledTree& h,
                        const WeightSpec& w, const MatchResult& r) {
  for (const auto& p : r.matching.pairs) {
    out << p.g << '\t' << p.h << '\t' << format_double(w(g.label(p.g), h.label(p.h))) << '\n';
  }
  out << "score\t" << format_double(r.score) << '\n';
}

std::string match_json(const MatchResult& r) {
  nlohmann::json j;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : r.matching.pairs) j["pairs"].push_back({p.g, p.h});
  j["score"] = r.score;
  j["end_cell"] = r.end_cell ? nlohmann::json{r.end_cell->g, r.end_cell->h} : nlohmann::json();
  return j.dump();
}

}  // namespace pathmatch
