#include <algorithm>
#include <string>
#include <unordered_map>

#include "matcher_internal.hpp"
#include "pathmatch/text.hpp"

namespace pathmatch::detail {

namespace {

struct LabelHash {
  std::size_t operator()(const Label* l) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& c : *l) h = fnv1a64(c, h ^ 0x9e3779b97f4a7c15ULL);
    return static_cast<std::size_t>(h);
  }
};

struct LabelEq {
  bool operator()(const Label* a, const Label* b) const { return *a == *b; }
};

void intern(const LabelledTree& t, std::vector<std::uint32_t>& ids,
            std::vector<const Label*>& distinct) {
  std::unordered_map<const Label*, std::uint32_t, LabelHash, LabelEq> seen;
  ids.resize(t.size());
  for (NodeId v = 0; v < t.size(); ++v) {
    const Label* l = &t.label(v);
    auto [it, inserted] = seen.emplace(l, static_cast<std::uint32_t>(distinct.size()));
    if (inserted) distinct.push_back(l);
    ids[v] = it->second;
  }
}

constexpr std::size_t kMaxTabulated = std::size_t{1} << 22;

}  // namespace

PairWeights::PairWeights(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w)
    : g_(g), w_(w) {
  intern(g, gid_, g_distinct_);
  intern(h, hid_, h_distinct_);
  const std::size_t cells = g_distinct_.size() * h_distinct_.size();
  if (cells <= kMaxTabulated) {
    tabulated_ = true;
    table_.resize(cells);
    binary_ = true;
    for (std::size_t a = 0; a < g_distinct_.size(); ++a) {
      for (std::size_t b = 0; b < h_distinct_.size(); ++b) {
        double x = w_(*g_distinct_[a], *h_distinct_[b]);
        table_[a * h_distinct_.size() + b] = x;
        binary_ = binary_ && (x == 0.0 || x == 1.0);
      }
    }
  } else {
    binary_ = w.is_binary();
    scratch_.resize(h_distinct_.size());
  }
}

std::span<const double> PairWeights::row(NodeId u) {
  const std::uint32_t a = gid_[u];
  const std::size_t k = h_distinct_.size();
  if (tabulated_) return {table_.data() + a * k, k};
  if (scratch_label_ != static_cast<std::int64_t>(a)) {
    for (std::size_t b = 0; b < k; ++b) scratch_[b] = w_(*g_distinct_[a], *h_distinct_[b]);
    scratch_label_ = a;
  }
  return scratch_;
}

LaneChunks::LaneChunks(const std::vector<std::int32_t>& parent,
                       const std::vector<std::uint32_t>& level_begin, std::size_t lanes) {
  for (std::size_t l = 1; l + 1 < level_begin.size(); ++l) {
    for (std::uint32_t c0 = level_begin[l]; c0 < level_begin[l + 1];
         c0 += static_cast<std::uint32_t>(lanes)) {
      const std::uint32_t c1 =
          std::min<std::uint32_t>(c0 + static_cast<std::uint32_t>(lanes), level_begin[l + 1]);
      const auto b = static_cast<std::uint32_t>(parent[c0]);
      const std::size_t span = static_cast<std::size_t>(parent[c1 - 1]) - b + 1;
      begin.push_back(c0);
      end.push_back(c1);
      base.push_back(b);
      mode.push_back(span <= lanes ? 1 : span <= 2 * lanes ? 2 : 0);
      for (std::size_t j = 0; j < lanes; ++j) {
        const std::uint32_t c = c0 + static_cast<std::uint32_t>(j);
        idx.push_back(c < c1 && span <= 2 * lanes
                          ? static_cast<std::uint8_t>(static_cast<std::uint32_t>(parent[c]) - b)
                          : 0);
      }
    }
  }
}

BfsLayout::BfsLayout(const LabelledTree& t) {
  const std::size_t n = t.size();
  order.reserve(n);
  position.assign(n, 0);
  parent.assign(n, -1);
  if (n == 0) {
    level_begin = {0};
    return;
  }
  order.push_back(0);
  level_begin.push_back(0);
  std::size_t level_end = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    if (head == level_end) {
      level_begin.push_back(static_cast<std::uint32_t>(head));
      level_end = order.size();
    }
    for (NodeId c : t.children(order[head])) order.push_back(c);
  }
  level_begin.push_back(static_cast<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    position[order[i]] = static_cast<std::uint32_t>(i);
    identity = identity && order[i] == i;
  }
  for (std::size_t i = 1; i < n; ++i) {
    parent[i] = static_cast<std::int32_t>(position[static_cast<NodeId>(t.parent(order[i]))]);
  }
  lanes8 = LaneChunks(parent, level_begin, 8);
  lanes64 = LaneChunks(parent, level_begin, 64);
}

std::vector<NodeId> preorder(const LabelledTree& t) {
  std::vector<NodeId> out;
  out.reserve(t.size());
  if (t.empty()) return out;
  std::vector<NodeId> stack{0};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    out.push_back(v);
    auto kids = t.children(v);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

}  // namespace pathmatch::detail
