#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pathmatch/text.hpp"
#include "pathmatch/workflow.hpp"

namespace pathmatch {

std::string_view to_string(MatcherVariant v) {
  switch (v) {
    case MatcherVariant::Basic: return "basic";
    case MatcherVariant::GapLimited: return "gaplim";
    case MatcherVariant::Subtree: return "subtree";
  }
  return "?";
}

MatcherVariant parse_matcher_variant(std::string_view name) {
  if (equals_ci(name, "basic")) return MatcherVariant::Basic;
  if (equals_ci(name, "gaplim")) return MatcherVariant::GapLimited;
  if (equals_ci(name, "subtree")) return MatcherVariant::Subtree;
  throw Error(ErrorCode::UsageError, "unknown matcher variant '" + std::string(name) + "'");
}

std::size_t worker_count(std::size_t count, std::size_t threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(threads, count));
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& f) {
  const std::size_t workers = worker_count(count, threads);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex first_mutex;
  auto run = [&](std::size_t worker) {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        f(i, worker);
      } catch (...) {
        std::lock_guard lock(first_mutex);
        if (!first) first = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(run, t);
  run(0);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  // rows 0..i-1 hold (n-1) + (n-2) + ... + (n-i) pairs
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

const Matching& PairwiseSimilarity::matching(std::size_t i, std::size_t j) const {
  if (matchings.empty()) throw Error(ErrorCode::DomainError, "matchings were not retained");
  if (i == j || i >= s.n || j >= s.n) {
    throw Error(ErrorCode::IndexOutOfRange, "no stored matching for pair (" + std::to_string(i) +
                                                ", " + std::to_string(j) + ")");
  }
  return matchings[pair_index(i, j, s.n)];
}

PairwiseSimilarity pairwise_similarity(std::span<const LabelledTree> trees, const WeightSpec& w,
                                       const SimilarityOptions& options) {
  const std::size_t n = trees.size();
  PairwiseSimilarity out;
  out.s = SimilarityMatrix(n);
  if (options.retain_matchings && n > 1) out.matchings.resize(n * (n - 1) / 2);

  // task t covers the pair (i, j), i <= j, in row-major order of the upper triangle
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  tasks.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) tasks.emplace_back(i, j);
  }
  std::vector<MatchWorkspace> scratch(worker_count(tasks.size(), options.threads));

  parallel_for(tasks.size(), options.threads, [&](std::size_t t, std::size_t worker) {
    const auto [i, j] = tasks[t];
    const LabelledTree& g = trees[i];
    const LabelledTree& h = trees[j];
    const bool keep = options.retain_matchings && i != j;
    MatchResult r;
    switch (options.variant) {
      case MatcherVariant::Basic:
        if (keep) {
          r = match_basic(g, h, w, scratch[worker]);
        } else {
          r.score = match_score(g, h, w, scratch[worker]);
        }
        break;
      case MatcherVariant::GapLimited: r = match_gap_limited(g, h, w, options.max_gap); break;
      case MatcherVariant::Subtree: r = match_subtree(g, h, w); break;
    }
    out.s(i, j) = r.score;
    out.s(j, i) = r.score;
    if (keep) out.matchings[pair_index(i, j, n)] = std::move(r.matching);
  });
  return out;
}

DistanceMatrix normalize_distances(const SimilarityMatrix& s) {
  const std::size_t n = s.n;
  std::vector<double> row_max(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = s.row(i);
    row_max[i] = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
    if (!(row_max[i] > 0.0)) {
      throw Error(ErrorCode::DegenerateRow,
                  "similarity row " + std::to_string(i) + " has no positive entry");
    }
  }
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      // the geometric mean of both maxima keeps D symmetric for symmetric S
      const double ratio = s(i, j) / std::sqrt(row_max[i] * row_max[j]);
      d(i, j) = std::sqrt(1.0 - std::clamp(ratio, 0.0, 1.0));
    }
  }
  return d;
}

}  // namespace pathmatch
