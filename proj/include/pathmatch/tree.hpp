#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pathmatch/error.hpp"

namespace pathmatch {

/// Ordered tuple of feature strings attached to a node, e.g.
/// (process_name, user_name). Components may be empty strings.
using Label = std::vector<std::string>;

using NodeId = std::size_t;

/// Sentinel ancestor of the root. Never appears in a matching.
inline constexpr std::int64_t kNoParent = -1;

struct BuiltTree;

/// Rooted directed tree with node 0 as root and indices in topological
/// order (parent index < child index). Immutable after construction.
class LabelledTree {
 public:
  LabelledTree() = default;

  std::size_t size() const { return parent_.size(); }
  bool empty() const { return parent_.empty(); }

  /// Parent of `v`, or kNoParent for the root.
  std::int64_t parent(NodeId v) const { return parent_[v]; }
  const Label& label(NodeId v) const { return labels_[v]; }
  std::size_t depth(NodeId v) const { return depth_[v]; }
  /// Maximum node depth (0 for a single node).
  std::size_t height() const { return height_; }
  std::size_t arity() const { return labels_.empty() ? 0 : labels_[0].size(); }

  std::span<const std::int64_t> parents() const { return parent_; }
  std::span<const Label> labels() const { return labels_; }
  std::span<const NodeId> children(NodeId v) const {
    return {child_list_.data() + child_begin_[v],
            child_begin_[v + 1] - child_begin_[v]};
  }
  bool is_leaf(NodeId v) const { return child_begin_[v] == child_begin_[v + 1]; }
  std::vector<NodeId> leaves() const;

  /// Number of nodes in the subtree rooted at `v` (including `v`).
  std::size_t subtree_size(NodeId v) const { return exit_[v] - enter_[v]; }

  /// True iff `u` is a strict ancestor of `v`. Throws IndexOutOfRange.
  bool is_ancestor(NodeId u, NodeId v) const;
  /// Unchecked variant for hot loops.
  bool is_ancestor_unchecked(NodeId u, NodeId v) const {
    return u != v && enter_[u] <= enter_[v] && exit_[v] <= exit_[u];
  }

  /// Root-to-`v` chain, root first.
  std::vector<NodeId> chain_to(NodeId v) const;

  /// Same shape, new labels. `labels.size()` must equal size().
  LabelledTree with_labels(std::vector<Label> labels) const;

  /// Shape plus labels of the full subtree rooted at `v`, relabelled in
  /// breadth-first order (new index 0 is `v`).
  LabelledTree subtree(NodeId v) const;

  friend bool operator==(const LabelledTree& a, const LabelledTree& b) {
    return a.parent_ == b.parent_ && a.labels_ == b.labels_;
  }

 private:
  friend BuiltTree build_tree(std::span<const std::int64_t>, std::vector<Label>);

  void index();

  std::vector<std::int64_t> parent_;
  std::vector<Label> labels_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> child_begin_;
  std::vector<NodeId> child_list_;
  std::vector<std::size_t> enter_;
  std::vector<std::size_t> exit_;
  std::size_t height_ = 0;
};

struct BuiltTree {
  LabelledTree tree;
  /// new_index[old] is the index the input node received. Identity when the
  /// input was already topologically ordered with the root at 0.
  std::vector<NodeId> new_index;
  bool relabelled = false;
};

/// Validates a parent array plus labels and returns the canonical tree.
/// Input that is not topologically ordered is relabelled by breadth-first
/// discovery order (children visited in increasing input index).
/// Throws MultipleRoots, CycleDetected, IndexOutOfRange, ArityMismatch, EmptyInput.
BuiltTree build_tree(std::span<const std::int64_t> parents, std::vector<Label> labels);

/// Convenience for literal fixtures: single-component labels.
LabelledTree make_tree(std::span<const std::int64_t> parents,
                       const std::vector<std::string>& symbols);
LabelledTree make_path(const std::vector<std::string>& symbols);

/// Throws IndexOutOfRange for bad indices.
bool is_ancestor(const LabelledTree& t, NodeId u, NodeId v);

struct NodePair {
  NodeId g = 0;
  NodeId h = 0;
  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Ordered list of node pairs; a valid matching is strictly increasing in
/// the ancestor order of both trees.
struct Matching {
  std::vector<NodePair> pairs;

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
  friend bool operator==(const Matching&, const Matching&) = default;
};

class WeightSpec;

bool validate_matching(const LabelledTree& g, const LabelledTree& h, const Matching& m);

/// Sum of pair weights. Throws InvalidMatching if the matching is not valid.
double score_matching(const LabelledTree& g, const LabelledTree& h, const Matching& m,
                      const WeightSpec& w);

/// Sum of pair weights without the chain check (used for subtree matchings).
double sum_pair_weights(const LabelledTree& g, const LabelledTree& h,
                        std::span<const NodePair> pairs, const WeightSpec& w);

/// Labels read off the g side (or h side) of a matching.
std::vector<Label> matched_labels_g(const LabelledTree& g, const Matching& m);
std::vector<Label> matched_labels_h(const LabelledTree& h, const Matching& m);

// Text format: one node per line, `node_id<TAB>parent_id<TAB>label_1...`,
// parent_id of the root is -1, `#` lines are comments.
LabelledTree read_tree(std::istream& in, const std::string& source_name = "<stream>");
LabelledTree read_tree_file(const std::string& path);
void write_tree(std::ostream& out, const LabelledTree& t);
void write_tree_file(const std::string& path, const LabelledTree& t);

}  // namespace pathmatch
