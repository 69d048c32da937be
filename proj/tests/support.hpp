#pragma once

// Shared fixtures for the test binaries.

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "pathmatch/matcher.hpp"
#include "pathmatch/random.hpp"
#include "pathmatch/synthgen.hpp"
#include "pathmatch/tree.hpp"
#include "pathmatch/weights.hpp"

namespace testing {

using namespace pathmatch;

inline LabelledTree label_uniform(const LabelledTree& t, std::size_t alphabet, Rng& rng) {
  std::vector<Label> labels;
  for (std::size_t v = 0; v < t.size(); ++v) {
    labels.push_back(Label{std::string(1, static_cast<char>('A' + rng.below(alphabet)))});
  }
  return t.with_labels(std::move(labels));
}

/// GW(depth, lambda) skeleton with at most max_nodes nodes, resampled until it fits.
inline LabelledTree small_gw_tree(Rng& rng, std::size_t depth, double lambda,
                                  std::size_t max_nodes, std::size_t alphabet) {
  GwSpec spec;
  spec.max_depth = depth;
  spec.mean_children = lambda;
  for (;;) {
    auto s = sample_gw_tree(spec, rng);
    if (s.tree.size() <= max_nodes) return label_uniform(s.tree, alphabet, rng);
  }
}

struct Instance {
  LabelledTree g;
  LabelledTree h;
};

/// The seeded small-instance family used by the oracle checks.
inline std::vector<Instance> oracle_instances(std::size_t count, std::uint64_t seed = 2024) {
  std::vector<Instance> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    auto g = small_gw_tree(rng, 4, 2.0, 12, 3);
    auto h = small_gw_tree(rng, 4, 2.0, 12, 3);
    out.push_back({std::move(g), std::move(h)});
  }
  return out;
}

/// Dense textbook evaluation of the basic recurrence over original indices,
/// with the same tie rules and start cell as the library.
struct ReferenceMatch {
  std::vector<double> table;
  Matching matching;
  double score = 0.0;
};

inline ReferenceMatch reference_match(const LabelledTree& g, const LabelledTree& h,
                                      const WeightSpec& w) {
  const std::size_t n = g.size();
  const std::size_t m = h.size();
  ReferenceMatch r;
  r.table.assign(n * m, 0.0);
  std::vector<int> choice(n * m, 0);
  auto A = [&](std::int64_t u, std::int64_t v) {
    return u < 0 || v < 0 ? 0.0 : r.table[static_cast<std::size_t>(u) * m + static_cast<std::size_t>(v)];
  };
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      const double wt = w(g.label(u), h.label(v));
      const double o1 = A(g.parent(u), static_cast<std::int64_t>(v));
      const double o2 = A(static_cast<std::int64_t>(u), h.parent(v));
      const double o3 = wt + A(g.parent(u), h.parent(v));
      double best = o1;
      int c = 1;
      if (o2 >= best) {
        best = o2;
        c = 2;
      }
      if (wt > 0 && o3 >= best) {
        best = o3;
        c = 3;
      }
      r.table[u * m + v] = best;
      choice[u * m + v] = c;
    }
  }
  std::size_t bu = 0, bv = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (r.table[u * m + v] > r.table[bu * m + bv]) {
        bu = u;
        bv = v;
      }
    }
  }
  r.score = n && m ? r.table[bu * m + bv] : 0.0;
  std::int64_t x = static_cast<std::int64_t>(bu), y = static_cast<std::int64_t>(bv);
  while (n && m && x >= 0 && y >= 0) {
    const int c = choice[static_cast<std::size_t>(x) * m + static_cast<std::size_t>(y)];
    if (c == 3) {
      r.matching.pairs.push_back({static_cast<NodeId>(x), static_cast<NodeId>(y)});
      x = g.parent(static_cast<NodeId>(x));
      y = h.parent(static_cast<NodeId>(y));
    } else if (c == 2) {
      y = h.parent(static_cast<NodeId>(y));
    } else {
      x = g.parent(static_cast<NodeId>(x));
    }
  }
  std::reverse(r.matching.pairs.begin(), r.matching.pairs.end());
  return r;
}

}  // namespace testing
