#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pathmatch/config.hpp"
#include "pathmatch/random.hpp"
#include "pathmatch/tree.hpp"

namespace pathmatch {

/// Galton-Watson tree with Poisson(mean_children) offspring, conditioned on
/// reaching depth max_depth by restarting failed attempts.
struct GwSpec {
  std::size_t max_depth = 0;
  double mean_children = 2.0;
  std::size_t max_retries = 10000;

  /// Throws DomainError unless mean_children lies in (1, 30] and max_retries > 0.
  void validate() const;
};

struct GwSample {
  LabelledTree tree;  // labels are empty tuples
  std::size_t attempts = 0;
};

/// Tree of height exactly max_depth, nodes in breadth-first order.
/// Throws RetriesExhausted after max_retries failed attempts.
GwSample sample_gw_tree(const GwSpec& spec, Rng& rng);

/// One attempt of the level process: true when some node reaches
/// max_depth. Once a level holds `saturation` nodes the attempt is counted
/// as a success; extinction from there has probability q^saturation.
bool gw_attempt_survives(const GwSpec& spec, Rng& rng, std::uint64_t saturation = 1000);

/// Root in (0, 1) of q = exp(lambda (q - 1)), by fixed-point iteration from
/// 0 until successive iterates differ by less than 1e-10. Requires lambda > 1.
double extinction_probability(double lambda);

/// Root-to-leaf chain for a uniformly chosen leaf.
std::vector<NodeId> sample_leaf_path(const LabelledTree& t, Rng& rng);

/// Inputs of the planted-labelling procedure. Symbols are indices into
/// `alphabet`; `rates[s]` is the rate of symbol s.
struct PlantSpec {
  std::vector<std::string> alphabet;
  std::vector<double> distribution;
  std::vector<std::size_t> base_sequence;
  std::vector<double> rates;
  double observation_probability = 1.0;

  /// Throws DomainError on inconsistent sizes, a distribution that does not
  /// sum to 1, nonpositive rates, or p outside (0, 1].
  void validate() const;
};

struct PlantedLabels {
  std::vector<Label> labels;
  /// Path nodes that carry a planted symbol, root side first.
  std::vector<NodeId> planted_nodes;
  /// Positions in the planted sequence, aligned with planted_nodes.
  std::vector<std::size_t> sequence_positions;
};

/// Draws N = min(Bin(len, p), k), picks N path positions uniformly and N
/// sequence positions with probability proportional to the product of their
/// symbol rates, writes the chosen symbols onto the chosen nodes in order,
/// and labels every other node i.i.d. from the distribution.
/// Throws PathNotChain unless `path` is a parent-to-child chain in `t`.
PlantedLabels plant_labels(const LabelledTree& t, std::span<const NodeId> path,
                           const PlantSpec& spec, Rng& rng);

struct ToyModelSpec {
  GwSpec gw;
  PlantSpec plant;
  std::vector<std::size_t> class_sizes;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PlantedCorpus {
  std::vector<LabelledTree> trees;
  /// Ground-truth chains (the sampled root-to-leaf paths).
  std::vector<std::vector<NodeId>> paths;
  std::vector<std::vector<NodeId>> planted_nodes;
  std::vector<std::size_t> class_of;
  /// One permutation of sequence positions per class.
  std::vector<std::vector<std::size_t>> permutations;
  std::vector<std::uint64_t> subseeds;
  std::vector<std::size_t> gw_attempts;

  /// Symbols planted for class c: base_sequence[permutations[c][i]].
  std::vector<std::size_t> class_sequence(const PlantSpec& plant, std::size_t c) const;
};

/// Deterministic in spec.seed; each observation uses its own sub-seed
/// derived from (seed, class, observation).
PlantedCorpus sample_toy_corpus(const ToyModelSpec& spec);

struct RecoveryMargin {
  double lhs = 0.0;
  double rhs = 0.0;
  bool recoverable = false;
};

/// Heuristic comparison of the expected planted-path score against the
/// best competing path in a depth-d, m-ary tree over a k-letter alphabet
/// with resampling noise p. Throws DomainError outside 0<p<1, k>=2, m>=2, d>=1.
RecoveryMargin recovery_margin(double p, double k, double m, double d);

/// Reads a toy-model configuration block (see README for keys). A
/// `base_length` key draws the base sequence from the distribution using
/// the configured seed.
ToyModelSpec toy_spec_from_config(const KeyValueConfig& cfg);
KeyValueConfig toy_spec_config(const ToyModelSpec& spec);

/// Writes one tree file per observation plus manifest.txt.
void write_planted_corpus(const std::string& dir, const ToyModelSpec& spec,
                          const PlantedCorpus& corpus);

}  // namespace pathmatch
