#include <algorithm>
#include <limits>
#include <queue>

#include "matcher_forward.hpp"
#include "pathmatch/matcher.hpp"

namespace pathmatch {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Cell {
  double score = kNegInf;
  NodeId u = 0;
  NodeId v = 0;
  bool set = false;

  void offer(double s, NodeId cu, NodeId cv) {
    if (!set || s > score || (s == score && detail::lex_less(cu, cv, u, v))) {
      score = s;
      u = cu;
      v = cv;
      set = true;
    }
  }
};

}  // namespace

LengthIndexedResult match_length_indexed(const LabelledTree& g, const LabelledTree& h,
                                         const WeightSpec& w, std::size_t max_len) {
  if (g.empty() || h.empty()) throw Error(ErrorCode::EmptyInput, "length-indexed match of an empty tree");
  const std::size_t bound = std::min(g.height(), h.height()) + 1;
  if (max_len < 1 || max_len > bound) {
    throw Error(ErrorCode::DomainError, "max_len must lie in [1, " + std::to_string(bound) +
                                            "], got " + std::to_string(max_len));
  }
  const std::size_t n = g.size();
  const std::size_t m = h.size();
  const std::size_t R = max_len + 1;
  detail::PairWeights pw(g, h, w);

  // A(u, v, r) streamed by depth of u; slot 0 is the sentinel row above the root
  std::vector<double> rows((g.height() + 2) * m * R, kNegInf);
  for (std::size_t v = 0; v < m; ++v) rows[v * R] = 0.0;
  std::vector<std::uint8_t> choice(n * m * R, 0);
  std::vector<Cell> best(R);

  for (NodeId u : detail::preorder(g)) {
    const std::size_t d = g.depth(u);
    const double* prev = rows.data() + d * m * R;
    double* cur = rows.data() + (d + 1) * m * R;
    auto wrow = pw.row(u);
    for (NodeId v = 0; v < m; ++v) {
      const std::int64_t pv = h.parent(v);
      const double wv = wrow[pw.h_label(v)];
      double* out = cur + v * R;
      std::uint8_t* c = choice.data() + (u * m + v) * R;
      out[0] = 0.0;
      for (std::size_t r = 1; r < R; ++r) {
        const double o1 = prev[v * R + r];
        const double o2 = pv >= 0 ? cur[static_cast<std::size_t>(pv) * R + r] : kNegInf;
        const double before =
            pv >= 0 ? prev[static_cast<std::size_t>(pv) * R + r - 1] : (r == 1 ? 0.0 : kNegInf);
        const double o3 = wv + before;
        // an exact length may need zero-weight pairs, so the match branch always competes
        const double m12 = std::max(o1, o2);
        if (o3 >= m12) {
          out[r] = o3;
          c[r] = 3;
        } else {
          out[r] = m12;
          c[r] = o2 >= o1 ? 2 : 1;
        }
        if (out[r] > kNegInf) best[r].offer(out[r], u, v);
      }
    }
  }

  LengthIndexedResult result;
  result.scores_by_length.assign(R, kNegInf);
  result.scores_by_length[0] = 0.0;
  result.matchings.resize(R);
  for (std::size_t r = 1; r < R; ++r) {
    if (!best[r].set) continue;
    result.scores_by_length[r] = best[r].score;
    Matching& mt = result.matchings[r];
    std::int64_t x = static_cast<std::int64_t>(best[r].u);
    std::int64_t y = static_cast<std::int64_t>(best[r].v);
    std::size_t left = r;
    while (left > 0) {
      const auto ux = static_cast<NodeId>(x);
      const auto vy = static_cast<NodeId>(y);
      const std::uint8_t c = choice[(ux * m + vy) * R + left];
      if (c == 3) {
        mt.pairs.push_back({ux, vy});
        x = g.parent(ux);
        y = h.parent(vy);
        --left;
      } else if (c == 2) {
        y = h.parent(vy);
      } else {
        x = g.parent(ux);
      }
    }
    std::reverse(mt.pairs.begin(), mt.pairs.end());
  }
  return result;
}

MatchResult match_gap_limited(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                              std::size_t max_gap) {
  MatchResult result;
  if (g.empty() || h.empty()) return result;
  const std::size_t n = g.size();
  const std::size_t m = h.size();
  // no chain can skip more levels than both heights together
  const std::size_t G = std::min(max_gap, g.height() + h.height());
  const std::size_t K = G + 1;
  detail::PairWeights pw(g, h, w);

  // B(u,v): best chain ending with the pair (u,v), -inf unless w(u,v) > 0.
  // E(x,y,k): best B(u',v') over ancestors-or-self with
  //           (depth x - depth u') + (depth y - depth v') <= k.
  std::vector<double> erows((g.height() + 2) * m * K, kNegInf);
  std::vector<std::uint8_t> choice(n * m * K, 0);  // 0 = B here, 1 = drop u, 2 = drop v
  std::vector<std::uint8_t> extends(n * m, 0);
  Cell best;

  for (NodeId u : detail::preorder(g)) {
    const std::size_t d = g.depth(u);
    const double* prev = erows.data() + d * m * K;
    double* cur = erows.data() + (d + 1) * m * K;
    const bool has_pu = g.parent(u) != kNoParent;
    auto wrow = pw.row(u);
    for (NodeId v = 0; v < m; ++v) {
      const std::int64_t pv = h.parent(v);
      const double wv = wrow[pw.h_label(v)];
      double b = kNegInf;
      if (wv > 0.0) {
        const double before =
            has_pu && pv >= 0 ? prev[static_cast<std::size_t>(pv) * K + G] : kNegInf;
        b = wv + std::max(0.0, before);
        extends[u * m + v] = before > 0.0;
        best.offer(b, u, v);
      }
      double* out = cur + v * K;
      std::uint8_t* c = choice.data() + (u * m + v) * K;
      out[0] = b;
      c[0] = 0;
      for (std::size_t k = 1; k < K; ++k) {
        const double o1 = prev[v * K + k - 1];
        const double o2 = pv >= 0 ? cur[static_cast<std::size_t>(pv) * K + k - 1] : kNegInf;
        if (b >= o2 && b >= o1) {
          out[k] = b;
          c[k] = 0;
        } else if (o2 >= o1) {
          out[k] = o2;
          c[k] = 2;
        } else {
          out[k] = o1;
          c[k] = 1;
        }
      }
    }
  }

  if (!best.set) return result;
  result.score = best.score;
  NodeId u = best.u;
  NodeId v = best.v;
  for (;;) {
    result.matching.pairs.push_back({u, v});
    if (!extends[u * m + v]) break;
    auto x = static_cast<NodeId>(g.parent(u));
    auto y = static_cast<NodeId>(h.parent(v));
    std::size_t k = G;
    for (;;) {
      const std::uint8_t c = choice[(x * m + y) * K + k];
      if (c == 0) break;
      if (c == 2) {
        y = static_cast<NodeId>(h.parent(y));
      } else {
        x = static_cast<NodeId>(g.parent(x));
      }
      --k;
    }
    u = x;
    v = y;
  }
  std::reverse(result.matching.pairs.begin(), result.matching.pairs.end());
  result.end_cell = result.matching.pairs.back();
  return result;
}

namespace {

struct EndCell {
  double score;
  NodeId u;
  NodeId v;
};

// Heap order: the worst retained candidate on top.
struct WorseFirst {
  bool operator()(const EndCell& a, const EndCell& b) const {
    if (a.score != b.score) return a.score > b.score;
    return detail::lex_less(a.u, a.v, b.u, b.v);
  }
};

template <class S>
std::vector<MatchResult> run_top_k(const LabelledTree& g, const LabelledTree& h,
                                   detail::PairWeights& pw, const detail::BfsLayout& hl,
                                   detail::MatchBuffers& buf, std::size_t k) {
  std::priority_queue<EndCell, std::vector<EndCell>, WorseFirst> heap;
  const std::size_t m = hl.order.size();
  auto hook = [&](NodeId u, const S* prev, const S*, const S* wrow) {
    const bool root_u = g.parent(u) == kNoParent;
    for (std::size_t vb = 0; vb < m; ++vb) {
      if (!(wrow[vb] > 0)) continue;
      const std::int32_t pb = hl.parent[vb];
      const double before = root_u || pb < 0 ? 0.0 : static_cast<double>(prev[pb]);
      EndCell e{static_cast<double>(wrow[vb]) + before, u, hl.order[vb]};
      if (heap.size() < k) {
        heap.push(e);
      } else if (WorseFirst{}(e, heap.top())) {
        heap.pop();
        heap.push(e);
      }
    }
  };
  detail::forward_pass<S, true>(g, hl, pw, buf, hook);

  std::vector<EndCell> cells;
  while (!heap.empty()) {
    cells.push_back(heap.top());
    heap.pop();
  }
  std::reverse(cells.begin(), cells.end());

  std::vector<MatchResult> out;
  for (const auto& e : cells) {
    MatchResult r;
    r.score = e.score;
    const std::int64_t pu = g.parent(e.u);
    const std::int64_t pv = h.parent(e.v);
    if (pu != kNoParent && pv != kNoParent) {
      r.matching = detail::backtrace(g, hl, buf.choice.get(), static_cast<NodeId>(pu),
                                     hl.position[static_cast<NodeId>(pv)]);
    }
    r.matching.pairs.push_back({e.u, e.v});
    r.end_cell = NodePair{e.u, e.v};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<MatchResult> match_top_k(const LabelledTree& g, const LabelledTree& h,
                                     const WeightSpec& w, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::DomainError, "top-k needs k >= 1");
  if (g.empty() || h.empty()) return {};
  detail::PairWeights pw(g, h, w);
  detail::BfsLayout hl(h);
  MatchWorkspace ws;
  auto& buf = ws.buffers();
  if (pw.binary()) {
    if (detail::fits_u8(g, h)) return run_top_k<std::uint8_t>(g, h, pw, hl, buf, k);
    return run_top_k<std::int32_t>(g, h, pw, hl, buf, k);
  }
  return run_top_k<double>(g, h, pw, hl, buf, k);
}

MatchResult brute_force_oracle(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                               std::size_t max_cells) {
  const std::size_t n = g.size();
  const std::size_t m = h.size();
  if ((n + 1) * (m + 1) > max_cells) {
    throw Error(ErrorCode::InstanceTooLarge,
                "oracle limited to " + std::to_string(max_cells) + " cells, instance has " +
                    std::to_string((n + 1) * (m + 1)));
  }
  std::vector<double> wt(n * m);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < m; ++v) wt[u * m + v] = w(g.label(u), h.label(v));
  }
  MatchResult best;
  std::vector<NodePair> chain;
  // extend the chain with every pair strictly below its last pair
  auto extend = [&](auto&& self, double score) -> void {
    if (score > best.score) {
      best.score = score;
      best.matching.pairs = chain;
    }
    const bool first = chain.empty();
    for (NodeId u = 0; u < n; ++u) {
      if (!first && !g.is_ancestor_unchecked(chain.back().g, u)) continue;
      for (NodeId v = 0; v < m; ++v) {
        if (!first && !h.is_ancestor_unchecked(chain.back().h, v)) continue;
        chain.push_back({u, v});
        self(self, score + wt[u * m + v]);
        chain.pop_back();
      }
    }
  };
  extend(extend, 0.0);
  if (!best.matching.empty()) best.end_cell = best.matching.pairs.back();
  return best;
}

}  // namespace pathmatch
