#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pathmatch/tree.hpp"
#include "pathmatch/weights.hpp"

namespace pathmatch {

struct MatchResult {
  Matching matching;
  double score = 0.0;
  /// Last matched pair; empty when the matching is empty.
  std::optional<NodePair> end_cell;
  /// Row-major g.size() x h.size() table of A(u, v), only when requested.
  std::vector<double> dp_table;
};

struct MatchOptions {
  bool keep_dp_table = false;
};

/// Reusable scratch buffers for repeated match_basic calls on one thread.
class MatchWorkspace {
 public:
  MatchWorkspace();
  ~MatchWorkspace();
  MatchWorkspace(MatchWorkspace&&) noexcept;
  MatchWorkspace& operator=(MatchWorkspace&&) noexcept;

  struct Buffers;
  Buffers& buffers() { return *buffers_; }

 private:
  std::unique_ptr<Buffers> buffers_;
};

/// Highest-scoring valid matching between g and h.
///
/// Forward pass: A(u,v) = max{A(anc u, v), A(u, anc v), w(u,v) + A(anc u, anc v)}
/// with A = 0 on the sentinel row/column. Branch ties go to the match branch,
/// then to the h-ancestor branch; the match branch only competes when
/// w(u,v) > 0. The backtrace starts at the lexicographically smallest argmax
/// cell. Memory is one byte per cell plus (height(g)+1) rows of scores.
MatchResult match_basic(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                        const MatchOptions& options = {});
MatchResult match_basic(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                        MatchWorkspace& workspace, const MatchOptions& options = {});

/// Score only; skips the choice table.
double match_score(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w);
double match_score(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                   MatchWorkspace& workspace);

/// Exhaustive enumeration of valid matchings. Test oracle; throws
/// InstanceTooLarge when g.size() * h.size() exceeds `max_cells`.
MatchResult brute_force_oracle(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                               std::size_t max_cells = 400);

struct LengthIndexedResult {
  /// Entry r is the best score over matchings with exactly r pairs
  /// (entry 0 is 0; -infinity when no matching of that length exists).
  std::vector<double> scores_by_length;
  /// One backtraced matching per length, same indexing.
  std::vector<Matching> matchings;
};

/// Requires 1 <= max_len <= min(height(g), height(h)) + 1 (DomainError otherwise).
LengthIndexedResult match_length_indexed(const LabelledTree& g, const LabelledTree& h,
                                         const WeightSpec& w, std::size_t max_len);

/// Best matching whose consecutive pairs skip at most `max_gap` nodes in
/// total, counting skipped depth levels in both trees:
/// (depth_g(u') - depth_g(u) - 1) + (depth_h(v') - depth_h(v) - 1) <= max_gap.
MatchResult match_gap_limited(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                              std::size_t max_gap);

/// Up to k best matchings with pairwise distinct end cells, in nonincreasing
/// score order (ties by end cell). Only cells with w(u,v) > 0 can end a
/// matching, so fewer than k results come back when fewer such cells exist.
std::vector<MatchResult> match_top_k(const LabelledTree& g, const LabelledTree& h,
                                     const WeightSpec& w, std::size_t k);

/// Best structure-preserving pair set: ancestor relations are preserved in
/// both directions and disjoint subtrees map into disjoint subtrees.
/// Pairs are reported in increasing g index; zero-weight pairs are dropped.
MatchResult match_subtree(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w);

/// One-to-one pair set with u_i < u_j (ancestor) iff v_i < v_j for all i, j.
bool validate_subtree_matching(const LabelledTree& g, const LabelledTree& h,
                               const std::vector<NodePair>& pairs);

// Line record: `u<TAB>v<TAB>w(u,v)` per pair, then `score<TAB>S`.
void write_match_record(std::ostream& out, const LabelledTree& g, const LabelledTree& h,
                        const WeightSpec& w, const MatchResult& r);
/// {"pairs": [[u,v],...], "score": S, "end_cell": [u,v] | null}
std::string match_json(const MatchResult& r);

}  // namespace pathmatch
