#pragma once

// Shared machinery for the matcher variants. Not installed.

#include <cstdint>
#include <span>
#include <vector>

#include "pathmatch/tree.hpp"
#include "pathmatch/weights.hpp"

namespace pathmatch::detail {

/// Weights between the distinct labels of g and of h, evaluated once per
/// distinct pair (or once per g row when the table would be too large).
class PairWeights {
 public:
  PairWeights(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w);

  std::uint32_t g_label(NodeId u) const { return gid_[u]; }
  std::uint32_t h_label(NodeId v) const { return hid_[v]; }
  std::size_t g_labels() const { return g_distinct_.size(); }
  std::size_t h_labels() const { return h_distinct_.size(); }

  /// w(label of u, k-th distinct h label) for every k.
  std::span<const double> row(NodeId u);
  double operator()(NodeId u, NodeId v) { return row(u)[hid_[v]]; }

  /// True when every tabulated weight is 0 or 1; always false if the table
  /// was not fully tabulated.
  bool binary() const { return binary_; }

 private:
  const LabelledTree& g_;
  const WeightSpec& w_;
  std::vector<std::uint32_t> gid_;
  std::vector<std::uint32_t> hid_;
  std::vector<const Label*> g_distinct_;
  std::vector<const Label*> h_distinct_;
  std::vector<double> table_;  // g_labels x h_labels when tabulated
  std::vector<double> scratch_;
  std::int64_t scratch_label_ = -1;
  bool tabulated_ = false;
  bool binary_ = false;
};

/// Fixed-width blocks of one bfs level. The parents of a block are
/// nondecreasing, so they lie in a window starting at `base`; `mode` is 1 when
/// the window fits one vector, 2 when it fits two, 0 otherwise.
struct LaneChunks {
  std::vector<std::uint32_t> begin;
  std::vector<std::uint32_t> end;
  std::vector<std::uint32_t> base;
  std::vector<std::uint8_t> mode;
  std::vector<std::uint8_t> idx;  // lanes per block, parent offset from base

  LaneChunks() = default;
  LaneChunks(const std::vector<std::int32_t>& parent, const std::vector<std::uint32_t>& level_begin,
             std::size_t lanes);
};

/// Breadth-first layout of a tree: every level is a contiguous index range
/// and a parent's position precedes its children's.
struct BfsLayout {
  explicit BfsLayout(const LabelledTree& t);

  std::vector<NodeId> order;           // bfs position -> node
  std::vector<std::uint32_t> position;  // node -> bfs position
  std::vector<std::int32_t> parent;     // bfs position -> parent bfs position, -1 at root
  std::vector<std::uint32_t> level_begin;  // size levels + 1
  bool identity = true;
  LaneChunks lanes8;
  LaneChunks lanes64;
};

/// Preorder of g, used to stream rows with one buffer per depth level.
std::vector<NodeId> preorder(const LabelledTree& t);

inline bool lex_less(NodeId u1, NodeId v1, NodeId u2, NodeId v2) {
  return u1 < u2 || (u1 == u2 && v1 < v2);
}

}  // namespace pathmatch::detail
