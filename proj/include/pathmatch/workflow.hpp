#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pathmatch/matcher.hpp"
#include "pathmatch/tree.hpp"
#include "pathmatch/weights.hpp"

namespace pathmatch {

/// Dense row-major n x n matrix of doubles.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size, double fill = 0.0) : n(size), data(size * size, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * n, n}; }
  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;
};

/// S[i,j] >= 0, S[i,i] is the self-match score of tree i.
using SimilarityMatrix = SquareMatrix;
/// D[i,j] in [0,1], symmetric, zero diagonal.
using DistanceMatrix = SquareMatrix;

enum class MatcherVariant { Basic, GapLimited, Subtree };
std::string_view to_string(MatcherVariant v);
MatcherVariant parse_matcher_variant(std::string_view name);

struct SimilarityOptions {
  MatcherVariant variant = MatcherVariant::Basic;
  std::size_t max_gap = 0;  // GapLimited only
  /// Keep the best matching of every unordered pair i < j.
  bool retain_matchings = false;
  /// 0 means one worker per hardware thread.
  std::size_t threads = 0;
};

struct PairwiseSimilarity {
  SimilarityMatrix s;
  /// Indexed by pair_index(i, j, n) when retained, else empty.
  std::vector<Matching> matchings;

  const Matching& matching(std::size_t i, std::size_t j) const;
};

/// Slot of the unordered pair i < j among the n(n-1)/2 pairs.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);

/// Scores every unordered pair plus every tree against itself. Pairs are
/// handed out from a shared counter; each result lands in its own slot, so
/// the output does not depend on the thread count.
PairwiseSimilarity pairwise_similarity(std::span<const LabelledTree> trees, const WeightSpec& w,
                                       const SimilarityOptions& options = {});

/// D[i,j] = sqrt(1 - clamp(S[i,j] / sqrt(M[i] M[j]), 0, 1)) with M[i] the row
/// maximum; zero diagonal. Throws DegenerateRow when some M[i] = 0.
DistanceMatrix normalize_distances(const SimilarityMatrix& s);

/// Row-major n x dims coordinates.
struct Embedding {
  std::size_t n = 0;
  std::size_t dims = 0;
  std::vector<double> coords;

  double operator()(std::size_t i, std::size_t k) const { return coords[i * dims + k]; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dims, dims}; }
};

/// Classical multidimensional scaling. Each axis is oriented so that its
/// largest-magnitude coordinate (first one on ties) is positive.
/// Throws DimsTooLarge unless 1 <= dims < n.
Embedding embed_classical(const DistanceMatrix& d, std::size_t dims);

struct Partition {
  /// Cluster id in [0, k) per item.
  std::vector<std::int64_t> labels;
  std::vector<std::size_t> medoids;
  double cost = 0.0;
  /// Total within-cluster distance of the winning restart, initially and
  /// after every accepted swap. Nonincreasing.
  std::vector<double> cost_trace;
};

struct KMedoidsOptions {
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
};

/// PAM-style swap descent from `restarts` seeded random initial medoid sets;
/// the lowest total distance wins (earliest restart on ties). Clusters are
/// numbered by their smallest member. Throws DomainError unless 1 <= k <= n.
Partition cluster_kmedoids(const DistanceMatrix& d, std::size_t k,
                           const KMedoidsOptions& options = {});
/// Same on Euclidean distances between embedded points.
Partition cluster_kmedoids(const Embedding& points, std::size_t k,
                           const KMedoidsOptions& options = {});

double adjusted_rand_index(std::span<const std::int64_t> a, std::span<const std::int64_t> b);
/// Mean silhouette over items; items in singleton clusters contribute 0.
double silhouette(const DistanceMatrix& d, std::span<const std::int64_t> labels);
/// Probability that a random positive score exceeds a random negative one,
/// ties counting 1/2. Throws DomainError when either side is empty.
double roc_auc(std::span<const double> positives, std::span<const double> negatives);

struct Exemplar {
  std::vector<Label> sequence;
  /// Number of sequences aligned.
  std::size_t support = 0;
  /// Majority count / support per emitted position.
  std::vector<double> agreement;
};

/// Center-star consensus. The center maximizes the summed longest-common-
/// subsequence score against the others (lowest index on ties); every other
/// sequence is aligned to it, insertions between center positions stack
/// left-aligned into shared columns, and a column emits its majority label
/// when at least half of the sequences occupy it. Majority ties go to the
/// center's label, then to the smallest label. Throws EmptyInput.
Exemplar extract_exemplar(std::span<const std::vector<Label>> sequences);

/// Best-matched label sequences (g side) of every unordered pair drawn from
/// `members`.
std::vector<std::vector<Label>> cluster_matched_sequences(std::span<const LabelledTree> trees,
                                                          std::span<const std::size_t> members,
                                                          const WeightSpec& w,
                                                          std::size_t threads = 0);

/// One exemplar per cluster id in [0, k), from the within-cluster matchings.
/// Negative ids are skipped. A single-member cluster uses that member's
/// self-match; an id with no members yields an exemplar with support 0.
std::vector<Exemplar> cluster_exemplars(std::span<const LabelledTree> trees,
                                        std::span<const std::int64_t> labels, const WeightSpec& w,
                                        std::size_t threads = 0);

/// A chain of labels as a path tree.
LabelledTree exemplar_tree(const Exemplar& e);

struct Template {
  std::size_t tree = 0;
  std::size_t leaf = 0;
  std::vector<NodeId> chain;
  LabelledTree path;
};

/// Draws min(count, total leaves) distinct (tree, leaf) pairs uniformly and
/// returns their root-to-leaf paths. Throws DomainError when count = 0.
std::vector<Template> pick_random_templates(std::span<const LabelledTree> trees, std::size_t count,
                                            std::uint64_t seed);

struct TemplateFeatures {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;  // row-major
  std::vector<std::size_t> counts;
  double tau = 3.0;

  double operator()(std::size_t i, std::size_t j) const { return x[i * cols + j]; }
};

/// X[i,j] = match score of tree i against template j; S_i counts X[i,j] >= tau.
/// Throws EmptyInput when there are no templates.
TemplateFeatures featurize_templates(std::span<const LabelledTree> trees,
                                     std::span<const LabelledTree> templates, const WeightSpec& w,
                                     double tau = 3.0, std::size_t threads = 0);

/// Resolved worker count: `threads`, or the hardware thread count when 0,
/// never more than `count` and never less than 1.
std::size_t worker_count(std::size_t count, std::size_t threads);

/// Calls f(i, worker) for i in [0, count) from worker_count(count, threads)
/// workers pulling a shared counter; `worker` indexes per-worker scratch.
/// The first exception thrown is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& f);

// `n=<size>` then n comma-separated rows.
void write_matrix(std::ostream& out, const SquareMatrix& m);
SquareMatrix read_matrix(std::istream& in, const std::string& source_name = "<matrix>");
void write_matrix_file(const std::string& path, const SquareMatrix& m);
SquareMatrix read_matrix_file(const std::string& path);

// `id,x1,...,xd` header then one row per point.
void write_embedding(std::ostream& out, const Embedding& e);
Embedding read_embedding(std::istream& in, const std::string& source_name = "<embedding>");

// `id,cluster` header then one row per item.
void write_partition(std::ostream& out, std::span<const std::int64_t> labels);
std::vector<std::int64_t> read_partition(std::istream& in,
                                         const std::string& source_name = "<partition>");

// `support=<n>` then `position<TAB>agreement<TAB>label_1...` per position.
void write_exemplar(std::ostream& out, const Exemplar& e);
Exemplar read_exemplar(std::istream& in, const std::string& source_name = "<exemplar>");

// `id,x_1,...,x_m,count` header, tau recorded in a leading `# tau=` line.
void write_features(std::ostream& out, const TemplateFeatures& f);

}  // namespace pathmatch
