// Structure-preserving pair sets between whole subtrees.
//
//   T(u,v)  best pair set inside subtree(u) x subtree(v)
//   F(u,v)  best pair set inside (subtree(u) - u) x (subtree(v) - v)
//
//   T(u,v) = max{ w(u,v) + F(u,v), max_j T(u,d_j), max_i T(c_i,v) }
//   F(u,v) = max{ assignment of T(c_i,d_j), max_j F(u,d_j), max_i F(c_i,v) }
//
// with c_i, d_j the children of u and v. Disjoint subtrees go to disjoint
// subtrees, so ancestry is preserved in both directions.

#include <algorithm>
#include <vector>

#include "assignment.hpp"
#include "matcher_internal.hpp"
#include "pathmatch/matcher.hpp"

namespace pathmatch {

namespace {

class SubtreeSolver {
 public:
  SubtreeSolver(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w)
      : g_(g), h_(h), pw_(g, h, w), m_(h.size()), t_(g.size() * h.size(), 0.0),
        f_(g.size() * h.size(), 0.0) {
    for (NodeId u = g.size(); u-- > 0;) {
      auto wrow = pw_.row(u);
      for (NodeId v = m_; v-- > 0;) {
        const auto cu = g.children(u);
        const auto cv = h.children(v);
        double f = assign(u, v).value;
        for (NodeId d : cv) f = std::max(f, F(u, d));
        for (NodeId c : cu) f = std::max(f, F(c, v));
        f_[u * m_ + v] = f;
        double t = wrow[pw_.h_label(v)] + f;
        for (NodeId d : cv) t = std::max(t, T(u, d));
        for (NodeId c : cu) t = std::max(t, T(c, v));
        t_[u * m_ + v] = t;
      }
    }
  }

  double score() const { return T(0, 0); }

  std::vector<NodePair> pairs() {
    std::vector<NodePair> out;
    collect_t(0, 0, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  double T(NodeId u, NodeId v) const { return t_[u * m_ + v]; }
  double F(NodeId u, NodeId v) const { return f_[u * m_ + v]; }

  detail::Assignment assign(NodeId u, NodeId v) const {
    const auto cu = g_.children(u);
    const auto cv = h_.children(v);
    std::vector<double> wt(cu.size() * cv.size());
    for (std::size_t i = 0; i < cu.size(); ++i) {
      for (std::size_t j = 0; j < cv.size(); ++j) wt[i * cv.size() + j] = T(cu[i], cv[j]);
    }
    return detail::max_weight_assignment(wt, cu.size(), cv.size());
  }

  // Reconstruction replays the maximisation in the same order.
  void collect_t(NodeId u, NodeId v, std::vector<NodePair>& out) {
    const double t = T(u, v);
    if (t <= 0.0) return;
    const double wv = pw_(u, v);
    if (wv + F(u, v) == t) {
      if (wv > 0.0) out.push_back({u, v});
      collect_f(u, v, out);
      return;
    }
    for (NodeId d : h_.children(v)) {
      if (T(u, d) == t) return collect_t(u, d, out);
    }
    for (NodeId c : g_.children(u)) {
      if (T(c, v) == t) return collect_t(c, v, out);
    }
  }

  void collect_f(NodeId u, NodeId v, std::vector<NodePair>& out) {
    const double f = F(u, v);
    if (f <= 0.0) return;
    const auto a = assign(u, v);
    if (a.value == f) {
      const auto cu = g_.children(u);
      const auto cv = h_.children(v);
      for (std::size_t i = 0; i < cu.size(); ++i) {
        if (a.col_of[i] >= 0) collect_t(cu[i], cv[static_cast<std::size_t>(a.col_of[i])], out);
      }
      return;
    }
    for (NodeId d : h_.children(v)) {
      if (F(u, d) == f) return collect_f(u, d, out);
    }
    for (NodeId c : g_.children(u)) {
      if (F(c, v) == f) return collect_f(c, v, out);
    }
  }

  const LabelledTree& g_;
  const LabelledTree& h_;
  detail::PairWeights pw_;
  std::size_t m_;
  std::vector<double> t_;
  std::vector<double> f_;
};

}  // namespace

MatchResult match_subtree(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w) {
  MatchResult r;
  if (g.empty() || h.empty()) return r;
  SubtreeSolver solver(g, h, w);
  r.score = solver.score();
  r.matching.pairs = solver.pairs();
  if (!r.matching.empty()) r.end_cell = r.matching.pairs.back();
  return r;
}

bool validate_subtree_matching(const LabelledTree& g, const LabelledTree& h,
                               const std::vector<NodePair>& pairs) {
  std::vector<bool> used_g(g.size(), false);
  std::vector<bool> used_h(h.size(), false);
  for (const auto& p : pairs) {
    if (p.g >= g.size() || p.h >= h.size() || used_g[p.g] || used_h[p.h]) return false;
    used_g[p.g] = true;
    used_h[p.h] = true;
  }
  for (const auto& a : pairs) {
    for (const auto& b : pairs) {
      if (g.is_ancestor_unchecked(a.g, b.g) != h.is_ancestor_unchecked(a.h, b.h)) return false;
    }
  }
  return true;
}

}  // namespace pathmatch
