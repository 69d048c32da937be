#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "support.hpp"

using namespace pathmatch;
using testing::oracle_instances;
using testing::reference_match;

namespace {

const WeightSpec kIndicator = indicator_weight();

LabelledTree star(const std::vector<std::string>& labels) {
  std::vector<std::int64_t> parents(labels.size(), 0);
  parents[0] = -1;
  return make_tree(parents, labels);
}

// Ancestor-or-self chain helper for lca on small trees.
NodeId lca(const LabelledTree& t, NodeId a, NodeId b) {
  auto ca = t.chain_to(a);
  auto cb = t.chain_to(b);
  std::size_t i = 0;
  while (i + 1 < ca.size() && i + 1 < cb.size() && ca[i + 1] == cb[i + 1]) ++i;
  return ca[i];
}

// Exhaustive best pair set under the subtree variant's structural rules.
// `constrained` adds the lca rule (disjoint subtrees go to disjoint subtrees)
// on top of two-way ancestry.
double brute_subtree(const LabelledTree& g, const LabelledTree& h, const WeightSpec& w,
                     bool constrained) {
  std::vector<NodePair> cand;
  std::vector<double> cw;
  for (NodeId u = 0; u < g.size(); ++u) {
    for (NodeId v = 0; v < h.size(); ++v) {
      const double x = w(g.label(u), h.label(v));
      if (x > 0) {
        cand.push_back({u, v});
        cw.push_back(x);
      }
    }
  }
  std::vector<NodePair> chosen;
  double best = 0.0;
  auto ok = [&](const NodePair& p) {
    for (const auto& q : chosen) {
      if (q.g == p.g || q.h == p.h) return false;
      if (g.is_ancestor_unchecked(q.g, p.g) != h.is_ancestor_unchecked(q.h, p.h)) return false;
      if (g.is_ancestor_unchecked(p.g, q.g) != h.is_ancestor_unchecked(p.h, q.h)) return false;
    }
    if (!constrained) return true;
    std::vector<NodePair> all = chosen;
    all.push_back(p);
    for (const auto& a : all) {
      for (const auto& b : all) {
        for (const auto& c : all) {
          const bool in_g = g.is_ancestor_unchecked(lca(g, a.g, b.g), c.g);
          const bool in_h = h.is_ancestor_unchecked(lca(h, a.h, b.h), c.h);
          if (in_g != in_h) return false;
        }
      }
    }
    return true;
  };
  std::function<void(std::size_t, double)> go = [&](std::size_t i, double s) {
    best = std::max(best, s);
    for (std::size_t j = i; j < cand.size(); ++j) {
      if (!ok(cand[j])) continue;
      chosen.push_back(cand[j]);
      go(j + 1, s + cw[j]);
      chosen.pop_back();
    }
  };
  go(0, 0.0);
  return best;
}

}  // namespace

TEST_CASE("single matching nodes") {
  auto g = make_path({"A"});
  auto r = match_basic(g, g, kIndicator);
  CHECK(r.score == 1.0);
  REQUIRE(r.matching.size() == 1);
  CHECK(r.matching.pairs[0] == NodePair{0, 0});
  CHECK(r.end_cell == NodePair{0, 0});
}

TEST_CASE("ABC against AXC skips the middle") {
  auto g = make_path({"A", "B", "C"});
  auto h = make_path({"A", "X", "C"});
  auto r = match_basic(g, h, kIndicator);
  CHECK(r.score == 2.0);
  CHECK(r.matching.pairs == std::vector<NodePair>{{0, 0}, {2, 2}});
}

TEST_CASE("disjoint alphabets give the empty matching") {
  auto g = make_tree(std::vector<std::int64_t>{-1, 0, 0}, {"A", "B", "C"});
  auto h = make_tree(std::vector<std::int64_t>{-1, 0, 1}, {"X", "Y", "Z"});
  auto r = match_basic(g, h, kIndicator);
  CHECK(r.score == 0.0);
  CHECK(r.matching.empty());
  CHECK_FALSE(r.end_cell.has_value());
  CHECK(match_score(g, h, kIndicator) == 0.0);
}

TEST_CASE("empty trees score zero") {
  LabelledTree e;
  auto g = make_path({"A"});
  CHECK(match_basic(e, g, kIndicator).score == 0.0);
  CHECK(match_score(g, e, kIndicator) == 0.0);
}

TEST_CASE("dp table is kept on request and matches the dense recurrence") {
  auto g = make_tree(std::vector<std::int64_t>{-1, 0, 0, 1, 1, 2}, {"A", "B", "C", "A", "C", "B"});
  auto h = make_tree(std::vector<std::int64_t>{-1, 0, 1, 1, 0}, {"B", "A", "C", "B", "C"});
  MatchOptions opt;
  opt.keep_dp_table = true;
  auto r = match_basic(g, h, kIndicator, opt);
  auto ref = reference_match(g, h, kIndicator);
  CHECK(r.dp_table == ref.table);
  CHECK(r.score == *std::max_element(r.dp_table.begin(), r.dp_table.end()));
  CHECK(r.matching == ref.matching);
}

TEST_CASE("oracle equivalence on small random instances") {
  const auto instances = oracle_instances(200);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    CAPTURE(i);
    const auto& [g, h] = instances[i];
    auto r = match_basic(g, h, kIndicator);
    auto o = brute_force_oracle(g, h, kIndicator);
    CHECK(r.score == o.score);
    CHECK(validate_matching(g, h, r.matching));
    CHECK(score_matching(g, h, r.matching, kIndicator) == r.score);
    CHECK(match_score(g, h, kIndicator) == r.score);
  }
}

TEST_CASE("oracle guard") {
  auto g = make_path(std::vector<std::string>(20, "A"));
  CHECK_THROWS_AS(brute_force_oracle(g, g, kIndicator), Error);
  auto p = make_path({"A", "B", "A", "B", "A"});
  CHECK_THROWS_AS(brute_force_oracle(p, p, kIndicator, 35), Error);
  CHECK(brute_force_oracle(p, p, kIndicator, 36).score == 5.0);
  CHECK(brute_force_oracle(make_path({"A"}), make_path({"B"}), kIndicator).score == 0.0);
}

TEST_CASE("dp table is monotone along both ancestor chains") {
  MatchOptions opt;
  opt.keep_dp_table = true;
  for (const auto& [g, h] : oracle_instances(50, 7)) {
    auto r = match_basic(g, h, kIndicator, opt);
    const std::size_t m = h.size();
    for (NodeId u = 0; u < g.size(); ++u) {
      for (NodeId v = 0; v < m; ++v) {
        const double a = r.dp_table[u * m + v];
        if (g.parent(u) >= 0) CHECK(a >= r.dp_table[static_cast<std::size_t>(g.parent(u)) * m + v]);
        if (h.parent(v) >= 0) CHECK(a >= r.dp_table[u * m + static_cast<std::size_t>(h.parent(v))]);
      }
    }
  }
}

TEST_CASE("score is symmetric for symmetric weights") {
  for (const auto& [g, h] : oracle_instances(50, 11)) {
    CHECK(match_basic(g, h, kIndicator).score == match_basic(h, g, kIndicator).score);
  }
}

TEST_CASE("vector kernels agree with the dense recurrence on wide trees") {
  Rng rng(99);
  GwSpec spec;
  spec.max_depth = 9;
  spec.mean_children = 1.8;
  std::vector<LabelledTree> trees;
  for (int i = 0; i < 6; ++i) trees.push_back(testing::label_uniform(sample_gw_tree(spec, rng).tree, 5, rng));
  // a level whose first and last parents carry all children forces the scalar fallback
  std::vector<std::int64_t> parents{-1};
  for (int i = 0; i < 300; ++i) parents.push_back(0);
  for (int i = 0; i < 40; ++i) parents.push_back(1);
  for (int i = 0; i < 40; ++i) parents.push_back(300);
  trees.push_back(testing::label_uniform(make_tree(parents, std::vector<std::string>(parents.size(), "A")), 4, rng));

  auto freq = frequency_weight(trees);
  MatchOptions opt;
  opt.keep_dp_table = true;
  MatchWorkspace ws;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    for (std::size_t j = 0; j < trees.size(); ++j) {
      CAPTURE(i);
      CAPTURE(j);
      for (const WeightSpec* w : std::vector<const WeightSpec*>{&kIndicator, &freq}) {
        auto r = match_basic(trees[i], trees[j], *w, ws, opt);
        auto ref = reference_match(trees[i], trees[j], *w);
        CHECK(r.dp_table == ref.table);
        CHECK(r.matching == ref.matching);
        CHECK(r.score == ref.score);
        CHECK(match_score(trees[i], trees[j], *w, ws) == ref.score);
      }
    }
  }
}

TEST_CASE("length-indexed scores") {
  auto g = make_path({"A", "B", "C"});
  auto h = make_path({"A", "X", "C"});
  auto r = match_length_indexed(g, h, kIndicator, 3);
  CHECK(r.scores_by_length == std::vector<double>{0.0, 1.0, 2.0, 2.0});
  CHECK(r.matchings[3].size() == 3);
  CHECK(r.matchings[2].pairs == std::vector<NodePair>{{0, 0}, {2, 2}});

  auto p = make_path({"A", "B", "C", "D"});
  auto same = match_length_indexed(p, p, kIndicator, 4);
  for (std::size_t len = 1; len <= 4; ++len) CHECK(same.scores_by_length[len] == double(len));

  CHECK_THROWS_AS(match_length_indexed(g, h, kIndicator, 4), Error);
  CHECK_THROWS_AS(match_length_indexed(g, h, kIndicator, 0), Error);

  for (const auto& [a, b] : oracle_instances(40, 5)) {
    auto one = match_length_indexed(a, b, kIndicator, 1);
    double best = 0.0;
    for (NodeId u = 0; u < a.size(); ++u) {
      for (NodeId v = 0; v < b.size(); ++v) best = std::max(best, kIndicator(a.label(u), b.label(v)));
    }
    CHECK(one.scores_by_length[1] == best);
  }
}

TEST_CASE("gap-limited matching") {
  auto g = make_path({"A", "B", "C"});
  auto h = make_path({"A", "X", "C"});
  CHECK(match_gap_limited(g, h, kIndicator, 0).score == 1.0);
  CHECK(match_gap_limited(g, h, kIndicator, 1).score == 1.0);
  CHECK(match_gap_limited(g, h, kIndicator, 2).score == 2.0);
  auto p = make_path({"A", "B", "C", "D"});
  auto full = match_gap_limited(p, p, kIndicator, 0);
  CHECK(full.score == 4.0);
  CHECK(full.matching.size() == 4);

  for (const auto& [a, b] : oracle_instances(60, 3)) {
    double last = 0.0;
    for (std::size_t gap = 0; gap <= a.height() + b.height(); ++gap) {
      auto r = match_gap_limited(a, b, kIndicator, gap);
      CHECK(r.score >= last);
      last = r.score;
      CHECK(validate_matching(a, b, r.matching));
      CHECK(score_matching(a, b, r.matching, kIndicator) == r.score);
      for (std::size_t i = 1; i < r.matching.size(); ++i) {
        const auto& x = r.matching.pairs[i - 1];
        const auto& y = r.matching.pairs[i];
        CHECK(a.depth(y.g) - a.depth(x.g) - 1 + b.depth(y.h) - b.depth(x.h) - 1 <= gap);
      }
    }
    CHECK(last == match_basic(a, b, kIndicator).score);
  }
}

TEST_CASE("top-k matchings") {
  auto p = make_path({"A", "B", "C"});
  auto top = match_top_k(p, p, kIndicator, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].score == 3.0);
  CHECK(top[0].end_cell == NodePair{2, 2});
  CHECK(top[1].score == 2.0);
  CHECK(top[1].end_cell == NodePair{1, 1});
  CHECK(p.is_ancestor(0, 2));

  CHECK(match_top_k(make_path({"A"}), make_path({"B"}), kIndicator, 3).empty());
  CHECK(match_top_k(p, p, kIndicator, 10).size() == 3);
  CHECK_THROWS_AS(match_top_k(p, p, kIndicator, 0), Error);

  for (const auto& [a, b] : oracle_instances(60, 13)) {
    auto basic = match_basic(a, b, kIndicator);
    auto list = match_top_k(a, b, kIndicator, 5);
    if (basic.matching.empty()) {
      CHECK(list.empty());
      continue;
    }
    CHECK(list[0].matching == basic.matching);
    CHECK(list[0].score == basic.score);
    for (std::size_t i = 0; i < list.size(); ++i) {
      CHECK(validate_matching(a, b, list[i].matching));
      CHECK(score_matching(a, b, list[i].matching, kIndicator) == list[i].score);
      if (i > 0) {
        CHECK(list[i].score <= list[i - 1].score);
        CHECK(list[i].end_cell != list[i - 1].end_cell);
      }
    }
  }
}

TEST_CASE("subtree variant") {
  auto s = star({"R", "A", "B", "C"});
  CHECK(match_subtree(s, s, kIndicator).score == 4.0);
  CHECK(match_basic(s, s, kIndicator).score == 2.0);
  auto st = match_subtree(s, s, kIndicator);
  CHECK(validate_subtree_matching(s, s, st.matching.pairs));
  CHECK(st.matching.size() == 4);

  auto p = make_path({"A", "B", "A", "C"});
  auto q = make_path({"B", "A", "C", "C"});
  CHECK(match_subtree(p, q, kIndicator).score == match_basic(p, q, kIndicator).score);
  auto one = make_path({"A"});
  CHECK(match_subtree(one, one, kIndicator).score == 1.0);

  CHECK_FALSE(validate_subtree_matching(s, s, {{0, 0}, {0, 1}}));
  CHECK_FALSE(validate_subtree_matching(p, q, {{0, 1}, {1, 0}}));
}

TEST_CASE("subtree variant against exhaustive search") {
  Rng rng(31);
  for (int i = 0; i < 60; ++i) {
    CAPTURE(i);
    auto g = testing::small_gw_tree(rng, 3, 2.0, 8, 3);
    auto h = testing::small_gw_tree(rng, 3, 2.0, 8, 3);
    auto r = match_subtree(g, h, kIndicator);
    CHECK(r.score == brute_subtree(g, h, kIndicator, true));
    CHECK(r.score <= brute_subtree(g, h, kIndicator, false));
    CHECK(r.score >= match_basic(g, h, kIndicator).score);
    CHECK(validate_subtree_matching(g, h, r.matching.pairs));
    CHECK(sum_pair_weights(g, h, r.matching.pairs, kIndicator) == r.score);
  }
}

TEST_CASE("match record and json") {
  auto g = make_path({"A", "B", "C"});
  auto h = make_path({"A", "X", "C"});
  auto r = match_basic(g, h, kIndicator);
  std::ostringstream out;
  write_match_record(out, g, h, kIndicator, r);
  CHECK(out.str() == "0\t0\t1\n2\t2\t1\nscore\t2\n");
  auto j = nlohmann::json::parse(match_json(r));
  CHECK(j["score"] == 2.0);
  CHECK(j["pairs"] == nlohmann::json::parse("[[0,0],[2,2]]"));
  CHECK(j["end_cell"] == nlohmann::json::parse("[2,2]"));
  auto empty = nlohmann::json::parse(match_json(MatchResult{}));
  CHECK(empty["end_cell"].is_null());
}
