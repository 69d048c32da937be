#include "pathmatch/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pathmatch/corpus.hpp"
#include "pathmatch/text.hpp"

namespace pathmatch {

void GwSpec::validate() const {
  if (!(mean_children > 1.0) || mean_children > 30.0) {
    throw Error(ErrorCode::DomainError,
                "mean_children must lie in (1, 30], got " + format_double(mean_children));
  }
  if (max_retries == 0) throw Error(ErrorCode::DomainError, "max_retries must be positive");
}

namespace {

// One attempt; empty result means the process died before max_depth.
std::vector<std::int64_t> gw_attempt(const GwSpec& spec, Rng& rng) {
  std::vector<std::int64_t> parents{kNoParent};
  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  for (std::size_t depth = 1; depth <= spec.max_depth; ++depth) {
    for (std::size_t v = level_begin; v < level_end; ++v) {
      const auto kids = rng.poisson(spec.mean_children);
      parents.insert(parents.end(), kids, static_cast<std::int64_t>(v));
    }
    if (parents.size() == level_end) return {};
    level_begin = level_end;
    level_end = parents.size();
  }
  return parents;
}

}  // namespace

GwSample sample_gw_tree(const GwSpec& spec, Rng& rng) {
  spec.validate();
  for (std::size_t attempt = 1; attempt <= spec.max_retries; ++attempt) {
    auto parents = gw_attempt(spec, rng);
    if (parents.empty()) continue;
    std::vector<Label> labels(parents.size());
    return {build_tree(parents, std::move(labels)).tree, attempt};
  }
  throw Error(ErrorCode::RetriesExhausted,
              "no Galton-Watson tree reached depth " + std::to_string(spec.max_depth) + " in " +
                  std::to_string(spec.max_retries) + " attempts");
}

bool gw_attempt_survives(const GwSpec& spec, Rng& rng, std::uint64_t saturation) {
  spec.validate();
  std::uint64_t width = 1;
  for (std::size_t depth = 1; depth <= spec.max_depth; ++depth) {
    if (width >= saturation) return true;
    std::uint64_t next = 0;
    for (std::uint64_t i = 0; i < width; ++i) next += rng.poisson(spec.mean_children);
    if (next == 0) return false;
    width = next;
  }
  return true;
}

double extinction_probability(double lambda) {
  if (!(lambda > 1.0)) {
    throw Error(ErrorCode::DomainError, "extinction probability needs lambda > 1");
  }
  double q = 0.0;
  for (int iter = 0; iter < 10'000'000; ++iter) {
    const double next = std::exp(lambda * (q - 1.0));
    if (std::abs(next - q) < 1e-10) return next;
    q = next;
  }
  return q;
}

std::vector<NodeId> sample_leaf_path(const LabelledTree& t, Rng& rng) {
  if (t.empty()) throw Error(ErrorCode::EmptyInput, "cannot sample a path from an empty tree");
  auto leaves = t.leaves();
  return t.chain_to(leaves[rng.below(leaves.size())]);
}

void PlantSpec::validate() const {
  const std::size_t s = alphabet.size();
  if (s == 0) throw Error(ErrorCode::DomainError, "alphabet is empty");
  if (distribution.size() != s || rates.size() != s) {
    throw Error(ErrorCode::DomainError, "distribution and rates must have one entry per symbol");
  }
  double total = 0.0;
  for (double x : distribution) {
    if (!(x >= 0.0)) throw Error(ErrorCode::DomainError, "distribution entries must be >= 0");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::DomainError, "distribution must sum to 1, got " + format_double(total));
  }
  for (double r : rates) {
    if (!(r > 0.0)) throw Error(ErrorCode::DomainError, "rates must be positive");
  }
  for (auto a : base_sequence) {
    if (a >= s) throw Error(ErrorCode::DomainError, "base sequence symbol out of range");
  }
  if (!(observation_probability > 0.0) || observation_probability > 1.0) {
    throw Error(ErrorCode::DomainError, "observation probability must lie in (0, 1]");
  }
}

PlantedLabels plant_labels(const LabelledTree& t, std::span<const NodeId> path,
                           const PlantSpec& spec, Rng& rng) {
  spec.validate();
  if (path.empty()) throw Error(ErrorCode::PathNotChain, "path is empty");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= t.size() || (i > 0 && !t.is_ancestor_unchecked(path[i - 1], path[i]))) {
      throw Error(ErrorCode::PathNotChain,
                  "path entry " + std::to_string(i) + " does not descend from its predecessor");
    }
  }
  const std::size_t len = path.size();
  const std::size_t k = spec.base_sequence.size();
  const std::size_t n_planted =
      std::min<std::size_t>(rng.binomial(len, spec.observation_probability), k);

  const auto on_path = rng.subset(len, n_planted);

  // sequential rate-weighted draws without replacement
  std::vector<double> weight(k);
  for (std::size_t s = 0; s < k; ++s) weight[s] = spec.rates[spec.base_sequence[s]];
  std::vector<std::size_t> in_sequence;
  in_sequence.reserve(n_planted);
  for (std::size_t i = 0; i < n_planted; ++i) {
    const std::size_t s = rng.categorical(weight);
    in_sequence.push_back(s);
    weight[s] = 0.0;
  }
  std::sort(in_sequence.begin(), in_sequence.end());

  PlantedLabels out;
  out.labels.resize(t.size());
  std::vector<bool> planted(t.size(), false);
  for (std::size_t i = 0; i < n_planted; ++i) {
    const NodeId v = path[on_path[i]];
    planted[v] = true;
    out.labels[v] = Label{spec.alphabet[spec.base_sequence[in_sequence[i]]]};
    out.planted_nodes.push_back(v);
    out.sequence_positions.push_back(in_sequence[i]);
  }
  for (NodeId v = 0; v < t.size(); ++v) {
    if (!planted[v]) out.labels[v] = Label{spec.alphabet[rng.categorical(spec.distribution)]};
  }
  return out;
}

void ToyModelSpec::validate() const {
  gw.validate();
  plant.validate();
  if (class_sizes.empty()) throw Error(ErrorCode::DomainError, "need at least one class");
  for (auto n : class_sizes) {
    if (n == 0) throw Error(ErrorCode::DomainError, "class sizes must be positive");
  }
}

std::vector<std::size_t> PlantedCorpus::class_sequence(const PlantSpec& plant, std::size_t c) const {
  std::vector<std::size_t> seq;
  for (auto i : permutations[c]) seq.push_back(plant.base_sequence[i]);
  return seq;
}

PlantedCorpus sample_toy_corpus(const ToyModelSpec& spec) {
  spec.validate();
  PlantedCorpus corpus;
  const std::size_t k = spec.plant.base_sequence.size();
  for (std::size_t c = 0; c < spec.class_sizes.size(); ++c) {
    Rng perm_rng(derive_seed(spec.seed, c + 1, 0));
    std::vector<std::size_t> sigma(k);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    perm_rng.shuffle(sigma);
    corpus.permutations.push_back(sigma);

    PlantSpec plant = spec.plant;
    plant.base_sequence = corpus.class_sequence(spec.plant, c);
    for (std::size_t j = 0; j < spec.class_sizes[c]; ++j) {
      const std::uint64_t subseed = derive_seed(spec.seed, c + 1, j + 1);
      Rng rng(subseed);
      auto sample = sample_gw_tree(spec.gw, rng);
      auto path = sample_leaf_path(sample.tree, rng);
      auto planted = plant_labels(sample.tree, path, plant, rng);
      corpus.trees.push_back(sample.tree.with_labels(std::move(planted.labels)));
      corpus.paths.push_back(std::move(path));
      corpus.planted_nodes.push_back(std::move(planted.planted_nodes));
      corpus.class_of.push_back(c);
      corpus.subseeds.push_back(subseed);
      corpus.gw_attempts.push_back(sample.attempts);
    }
  }
  return corpus;
}

RecoveryMargin recovery_margin(double p, double k, double m, double d) {
  if (!(p > 0.0 && p < 1.0) || !(k >= 2.0) || !(m >= 2.0) || !(d >= 1.0)) {
    throw Error(ErrorCode::DomainError, "recovery margin needs 0<p<1, k>=2, m>=2, d>=1");
  }
  const double keep = (1.0 - p) * (1.0 - p);
  const double q = keep + (1.0 - keep) / k;
  RecoveryMargin r;
  r.lhs = q * d;
  r.rhs = (1.0 / k + std::sqrt(2.0 * std::log(m) / k)) * d;
  r.recoverable = r.lhs > r.rhs;
  return r;
}

namespace {

std::vector<std::size_t> parse_size_list(const std::string& s, const std::string& what) {
  std::vector<std::size_t> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_uint(part, what));
  return out;
}

std::string format_list(const std::vector<double>& xs) {
  std::vector<std::string> parts;
  for (double x : xs) parts.push_back(format_double(x));
  return join(parts, ",");
}

std::string format_list(const std::vector<std::size_t>& xs) {
  std::vector<std::string> parts;
  for (auto x : xs) parts.push_back(std::to_string(x));
  return join(parts, ",");
}

}  // namespace

ToyModelSpec toy_spec_from_config(const KeyValueConfig& cfg) {
  ToyModelSpec spec;
  spec.seed = cfg.get_uint("seed", 0);
  spec.gw.max_depth = cfg.get_uint("gw.depth", 12);
  spec.gw.mean_children = cfg.get_double("gw.lambda", 1.8);
  spec.gw.max_retries = cfg.get_uint("gw.max_retries", 10000);

  auto& plant = spec.plant;
  plant.alphabet = split(cfg.get_or("alphabet", "A,B,C,D,E"), ',');
  const std::size_t s = plant.alphabet.size();
  if (auto d = cfg.get("distribution")) {
    plant.distribution = parse_double_list(*d, "distribution");
  } else {
    plant.distribution.assign(s, 1.0 / static_cast<double>(s));
  }
  if (auto r = cfg.get("rates")) {
    plant.rates = parse_double_list(*r, "rates");
  } else {
    plant.rates.assign(s, 1.0);
  }
  plant.observation_probability = cfg.get_double("p", 0.9);

  if (auto seq = cfg.get("base_sequence")) {
    for (const auto& sym : split(*seq, ',')) {
      auto it = std::find(plant.alphabet.begin(), plant.alphabet.end(), sym);
      if (it == plant.alphabet.end()) {
        throw Error(ErrorCode::ParseError, "base_sequence symbol '" + sym + "' not in alphabet");
      }
      plant.base_sequence.push_back(static_cast<std::size_t>(it - plant.alphabet.begin()));
    }
  } else {
    const auto len = cfg.get_uint("base_length", 10);
    Rng rng(derive_seed(spec.seed, 0, 0));
    for (std::uint64_t i = 0; i < len; ++i) {
      plant.base_sequence.push_back(rng.categorical(plant.distribution));
    }
  }

  if (auto sizes = cfg.get("class_sizes")) {
    spec.class_sizes = parse_size_list(*sizes, "class_sizes");
  } else {
    spec.class_sizes.assign(cfg.get_uint("classes", 2), cfg.get_uint("per_class", 100));
  }
  spec.validate();
  return spec;
}

KeyValueConfig toy_spec_config(const ToyModelSpec& spec) {
  KeyValueConfig cfg;
  cfg.add("seed", std::to_string(spec.seed));
  cfg.add("gw.depth", std::to_string(spec.gw.max_depth));
  cfg.add("gw.lambda", format_double(spec.gw.mean_children));
  cfg.add("gw.max_retries", std::to_string(spec.gw.max_retries));
  cfg.add("alphabet", join(spec.plant.alphabet, ","));
  cfg.add("distribution", format_list(spec.plant.distribution));
  std::vector<std::string> seq;
  for (auto a : spec.plant.base_sequence) seq.push_back(spec.plant.alphabet[a]);
  cfg.add("base_sequence", join(seq, ","));
  cfg.add("rates", format_list(spec.plant.rates));
  cfg.add("p", format_double(spec.plant.observation_probability));
  cfg.add("class_sizes", format_list(spec.class_sizes));
  return cfg;
}

void write_planted_corpus(const std::string& dir, const ToyModelSpec& spec,
                          const PlantedCorpus& corpus) {
  KeyValueConfig header;
  header.add("format", kCorpusFormat);
  header.add("source", "toy-model");
  header.add("rng", std::string(Rng::kAlgorithm));
  const auto spec_cfg = toy_spec_config(spec);
  for (const auto& [k, v] : spec_cfg.entries()) header.add("spec." + k, v);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < corpus.trees.size(); ++i) {
    const auto c = corpus.class_of[i];
    rows.push_back({std::to_string(c), format_list(corpus.permutations[c]),
                    format_list(corpus.paths[i]), format_list(corpus.planted_nodes[i]),
                    std::to_string(corpus.subseeds[i]), std::to_string(corpus.gw_attempts[i])});
  }
  write_corpus(dir, corpus.trees, header,
               {"class", "permutation", "path", "planted", "subseed", "attempts"}, rows, "obs_");
}

}  // namespace pathmatch
