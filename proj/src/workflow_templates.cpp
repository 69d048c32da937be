#include "pathmatch/random.hpp"
#include "pathmatch/workflow.hpp"

namespace pathmatch {

std::vector<Template> pick_random_templates(std::span<const LabelledTree> trees, std::size_t count,
                                            std::uint64_t seed) {
  if (count == 0) throw Error(ErrorCode::DomainError, "template count must be >= 1");
  std::vector<std::pair<std::size_t, NodeId>> pool;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    for (NodeId leaf : trees[t].leaves()) pool.emplace_back(t, leaf);
  }
  Rng rng(seed);
  const auto picked = rng.subset(pool.size(), std::min(count, pool.size()));
  std::vector<Template> out;
  out.reserve(picked.size());
  for (std::size_t k : picked) {
    const auto [t, leaf] = pool[k];
    Template tp;
    tp.tree = t;
    tp.leaf = leaf;
    tp.chain = trees[t].chain_to(leaf);
    std::vector<std::int64_t> parents(tp.chain.size());
    std::vector<Label> labels;
    labels.reserve(tp.chain.size());
    for (std::size_t i = 0; i < tp.chain.size(); ++i) {
      parents[i] = static_cast<std::int64_t>(i) - 1;
      labels.push_back(trees[t].label(tp.chain[i]));
    }
    tp.path = build_tree(parents, std::move(labels)).tree;
    out.push_back(std::move(tp));
  }
  return out;
}

TemplateFeatures featurize_templates(std::span<const LabelledTree> trees,
                                     std::span<const LabelledTree> templates, const WeightSpec& w,
                                     double tau, std::size_t threads) {
  if (templates.empty()) throw Error(ErrorCode::EmptyInput, "featurization needs at least one template");
  TemplateFeatures f;
  f.rows = trees.size();
  f.cols = templates.size();
  f.tau = tau;
  f.x.assign(f.rows * f.cols, 0.0);
  f.counts.assign(f.rows, 0);
  std::vector<MatchWorkspace> scratch(worker_count(f.rows, threads));
  parallel_for(f.rows, threads, [&](std::size_t i, std::size_t worker) {
    for (std::size_t j = 0; j < f.cols; ++j) {
      const double s = match_score(trees[i], templates[j], w, scratch[worker]);
      f.x[i * f.cols + j] = s;
      if (s >= tau) ++f.counts[i];
    }
  });
  return f;
}

}  // namespace pathmatch
