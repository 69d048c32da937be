#include <algorithm>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "matcher_forward.hpp"
#include "pathmatch/matcher.hpp"

namespace pathmatch {

MatchWorkspace::MatchWorkspace() : buffers_(std::make_unique<Buffers>()) {}
MatchWorkspace::~MatchWorkspace() = default;
MatchWorkspace::MatchWorkspace(MatchWorkspace&&) noexcept = default;
MatchWorkspace& MatchWorkspace::operator=(MatchWorkspace&&) noexcept = default;

std::uint8_t* MatchWorkspace::Buffers::choice_buffer(std::size_t cells) {
  if (cells > choice_capacity) {
    choice.reset(new std::uint8_t[cells]);
    choice_capacity = cells;
  }
  return choice.get();
}

namespace detail {

Matching backtrace(const LabelledTree& g, const BfsLayout& hl, const std::uint8_t* choice,
                   NodeId u, std::uint32_t vb) {
  const std::size_t m = hl.order.size();
  Matching out;
  std::int64_t x = static_cast<std::int64_t>(u);
  std::int64_t y = vb;
  while (x != kNoParent && y >= 0) {
    const auto c = choice[static_cast<std::size_t>(x) * m + static_cast<std::size_t>(y)];
    if (c == 3) {
      out.pairs.push_back({static_cast<NodeId>(x), hl.order[static_cast<std::size_t>(y)]});
      x = g.parent(static_cast<NodeId>(x));
      y = hl.parent[static_cast<std::size_t>(y)];
    } else if (c == 2) {
      y = hl.parent[static_cast<std::size_t>(y)];
    } else {
      x = g.parent(static_cast<NodeId>(x));
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

}  // namespace detail

namespace {

template <class S>
MatchResult run_basic(const LabelledTree& g, const LabelledTree& h, detail::PairWeights& pw,
                      const detail::BfsLayout& hl, detail::MatchBuffers& buf,
                      const MatchOptions& options) {
  MatchResult result;
  const std::size_t m = h.size();
  if (options.keep_dp_table) result.dp_table.assign(g.size() * m, 0.0);
  auto hook = [&](NodeId u, const S*, const S* cur, const S*) {
    if (!options.keep_dp_table) return;
    double* row = result.dp_table.data() + u * m;
    for (std::size_t vb = 0; vb < m; ++vb) row[hl.order[vb]] = static_cast<double>(cur[vb]);
  };
  auto best = detail::forward_pass<S, true>(g, hl, pw, buf, hook);
  result.score = static_cast<double>(best.score);
  result.matching = detail::backtrace(g, hl, buf.choice.get(), best.u, best.vb);
  if (!result.matching.empty()) result.end_cell = result.matching.pairs.back();
  return result;
}

}  // namespace

MatchResult match_basic(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                        MatchWorkspace& workspace, const MatchOptions& options) {
  if (g.empty() || h.empty()) return {};
  detail::PairWeights pw(g, h, w);
  detail::BfsLayout hl(h);
  auto& buf = workspace.buffers();
  if (pw.binary()) {
    if (detail::fits_u8(g, h)) return run_basic<std::uint8_t>(g, h, pw, hl, buf, options);
    return run_basic<std::int32_t>(g, h, pw, hl, buf, options);
  }
  return run_basic<double>(g, h, pw, hl, buf, options);
}

MatchResult match_basic(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                        const MatchOptions& options) {
  MatchWorkspace ws;
  return match_basic(g, h, w, ws, options);
}

double match_score(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                   MatchWorkspace& workspace) {
  if (g.empty() || h.empty()) return 0.0;
  detail::PairWeights pw(g, h, w);
  auto& buf = workspace.buffers();
  detail::BfsLayout hl(h);
  auto no_hook = [](NodeId, const auto*, const auto*, const auto*) {};
  if (pw.binary()) {
    if (detail::fits_u8(g, h)) {
      return detail::forward_pass<std::uint8_t, false>(g, hl, pw, buf, no_hook).score;
    }
    return detail::forward_pass<std::int32_t, false>(g, hl, pw, buf, no_hook).score;
  }
  return detail::forward_pass<double, false>(g, hl, pw, buf, no_hook).score;
}

double match_score(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w) {
  MatchWorkspace ws;
  return match_score(g, h, w, ws);
}

}  // namespace pathmatch
