#include "pathmatch/tree.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

#include "pathmatch/weights.hpp"

namespace pathmatch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidMatching: return "InvalidMatching";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
    case ErrorCode::PathNotChain: return "PathNotChain";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateRow: return "DegenerateRow";
    case ErrorCode::DimsTooLarge: return "DimsTooLarge";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::IntegrityWarning: return "IntegrityWarning";
  }
  return "Unknown";
}

void LabelledTree::index() {
  const std::size_t n = parent_.size();
  depth_.assign(n, 0);
  child_begin_.assign(n + 1, 0);
  for (std::size_t v = 1; v < n; ++v) {
    auto p = static_cast<std::size_t>(parent_[v]);
    depth_[v] = depth_[p] + 1;
    ++child_begin_[p + 1];
  }
  std::partial_sum(child_begin_.begin(), child_begin_.end(), child_begin_.begin());
  child_list_.assign(n > 0 ? n - 1 : 0, 0);
  std::vector<std::size_t> fill(child_begin_.begin(), child_begin_.end() - 1);
  for (std::size_t v = 1; v < n; ++v) {
    child_list_[fill[static_cast<std::size_t>(parent_[v])]++] = v;
  }
  height_ = n == 0 ? 0 : *std::max_element(depth_.begin(), depth_.end());

  // preorder numbering; exit = enter + subtree size
  enter_.assign(n, 0);
  exit_.assign(n, 0);
  std::vector<std::size_t> sizes(n, 1);
  for (std::size_t v = n; v-- > 1;) sizes[static_cast<std::size_t>(parent_[v])] += sizes[v];
  std::vector<NodeId> stack;
  if (n > 0) stack.push_back(0);
  std::size_t clock = 0;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    enter_[v] = clock++;
    exit_[v] = enter_[v] + sizes[v];
    auto kids = children(v);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
}

std::vector<NodeId> LabelledTree::leaves() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < size(); ++v) {
    if (is_leaf(v)) out.push_back(v);
  }
  return out;
}

bool LabelledTree::is_ancestor(NodeId u, NodeId v) const {
  if (u >= size() || v >= size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "node index out of range: (" + std::to_string(u) + ", " + std::to_string(v) +
                    ") in tree of size " + std::to_string(size()));
  }
  return is_ancestor_unchecked(u, v);
}

bool is_ancestor(const LabelledTree& t, NodeId u, NodeId v) { return t.is_ancestor(u, v); }

std::vector<NodeId> LabelledTree::chain_to(NodeId v) const {
  std::vector<NodeId> chain;
  for (std::int64_t x = static_cast<std::int64_t>(v); x != kNoParent;
       x = parent_[static_cast<std::size_t>(x)]) {
    chain.push_back(static_cast<NodeId>(x));
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

LabelledTree LabelledTree::with_labels(std::vector<Label> labels) const {
  return build_tree(parent_, std::move(labels)).tree;
}

LabelledTree LabelledTree::subtree(NodeId v) const {
  std::vector<std::int64_t> parents;
  std::vector<Label> labels;
  std::vector<std::int64_t> local(size(), kNoParent);
  std::deque<NodeId> queue{v};
  while (!queue.empty()) {
    NodeId x = queue.front();
    queue.pop_front();
    local[x] = static_cast<std::int64_t>(parents.size());
    parents.push_back(x == v ? kNoParent : local[static_cast<std::size_t>(parent_[x])]);
    labels.push_back(labels_[x]);
    for (NodeId c : children(x)) queue.push_back(c);
  }
  return build_tree(parents, std::move(labels)).tree;
}

BuiltTree build_tree(std::span<const std::int64_t> parents, std::vector<Label> labels) {
  const std::size_t n = parents.size();
  if (n == 0) throw Error(ErrorCode::EmptyInput, "tree must have at least one node");
  if (labels.size() != n) {
    throw Error(ErrorCode::ArityMismatch, "parent array has " + std::to_string(n) +
                                              " entries but " + std::to_string(labels.size()) +
                                              " labels were given");
  }
  const std::size_t arity = labels[0].size();
  std::size_t root = n;
  for (std::size_t v = 0; v < n; ++v) {
    if (labels[v].size() != arity) {
      throw Error(ErrorCode::ArityMismatch,
                  "node " + std::to_string(v) + " has label arity " +
                      std::to_string(labels[v].size()) + ", expected " + std::to_string(arity));
    }
    std::int64_t p = parents[v];
    if (p == kNoParent) {
      if (root != n) {
        throw Error(ErrorCode::MultipleRoots, "nodes " + std::to_string(root) + " and " +
                                                  std::to_string(v) + " both have no parent");
      }
      root = v;
    } else if (p < 0 || static_cast<std::size_t>(p) >= n) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "parent " + std::to_string(p) + " of node " + std::to_string(v) +
                      " is out of range");
    }
  }
  if (root == n) throw Error(ErrorCode::CycleDetected, "no root: every node has a parent");

  bool ordered = root == 0;
  for (std::size_t v = 1; ordered && v < n; ++v) {
    ordered = parents[v] >= 0 && static_cast<std::size_t>(parents[v]) < v;
  }

  BuiltTree out;
  if (ordered) {
    out.tree.parent_.assign(parents.begin(), parents.end());
    out.tree.labels_ = std::move(labels);
    out.new_index.resize(n);
    std::iota(out.new_index.begin(), out.new_index.end(), NodeId{0});
  } else {
    // children lists in increasing input index, then BFS from the root
    std::vector<std::vector<std::size_t>> kids(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (v != root) kids[static_cast<std::size_t>(parents[v])].push_back(v);
    }
    out.new_index.assign(n, n);
    std::vector<std::size_t> order;
    order.reserve(n);
    order.push_back(root);
    out.new_index[root] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      for (std::size_t c : kids[order[head]]) {
        out.new_index[c] = order.size();
        order.push_back(c);
      }
    }
    if (order.size() != n) {
      auto stray = std::find(out.new_index.begin(), out.new_index.end(), n) - out.new_index.begin();
      throw Error(ErrorCode::CycleDetected,
                  "node " + std::to_string(stray) + " does not reach the root");
    }
    out.tree.parent_.resize(n);
    out.tree.labels_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t old = order[i];
      out.tree.parent_[i] =
          old == root ? kNoParent
                      : static_cast<std::int64_t>(out.new_index[static_cast<std::size_t>(parents[old])]);
      out.tree.labels_[i] = std::move(labels[old]);
    }
    out.relabelled = true;
  }
  out.tree.index();
  return out;
}

LabelledTree make_tree(std::span<const std::int64_t> parents,
                       const std::vector<std::string>& symbols) {
  std::vector<Label> labels;
  labels.reserve(symbols.size());
  for (const auto& s : symbols) labels.push_back(Label{s});
  return build_tree(parents, std::move(labels)).tree;
}

LabelledTree make_path(const std::vector<std::string>& symbols) {
  std::vector<std::int64_t> parents(symbols.size());
  for (std::size_t i = 0; i < parents.size(); ++i) {
    parents[i] = static_cast<std::int64_t>(i) - 1;
  }
  return make_tree(parents, symbols);
}

bool validate_matching(const LabelledTree& g, const LabelledTree& h, const Matching& m) {
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    const auto& p = m.pairs[i];
    if (p.g >= g.size() || p.h >= h.size()) return false;
    if (i == 0) continue;
    const auto& q = m.pairs[i - 1];
    if (!g.is_ancestor_unchecked(q.g, p.g) || !h.is_ancestor_unchecked(q.h, p.h)) return false;
  }
  return true;
}

double sum_pair_weights(const LabelledTree& g, const LabelledTree& h,
                        std::span<const NodePair> pairs, const WeightSpec& w) {
  double total = 0.0;
  for (const auto& p : pairs) total += w(g.label(p.g), h.label(p.h));
  return total;
}

double score_matching(const LabelledTree& g, const LabelledTree& h, const Matching& m,
                      const WeightSpec& w) {
  if (!validate_matching(g, h, m)) {
    throw Error(ErrorCode::InvalidMatching, "matching is not a valid ancestor chain in both trees");
  }
  return sum_pair_weights(g, h, m.pairs, w);
}

std::vector<Label> matched_labels_g(const LabelledTree& g, const Matching& m) {
  std::vector<Label> out;
  out.reserve(m.size());
  for (const auto& p : m.pairs) out.push_back(g.label(p.g));
  return out;
}

std::vector<Label> matched_labels_h(const LabelledTree& h, const Matching& m) {
  std::vector<Label> out;
  out.reserve(m.size());
  for (const auto& p : m.pairs) out.push_back(h.label(p.h));
  return out;
}

}  // namespace pathmatch
