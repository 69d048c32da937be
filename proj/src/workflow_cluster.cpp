#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>

#include "pathmatch/random.hpp"
#include "pathmatch/workflow.hpp"

namespace pathmatch {

Embedding embed_classical(const DistanceMatrix& d, std::size_t dims) {
  const std::size_t n = d.n;
  if (dims < 1 || dims >= n) {
    throw Error(ErrorCode::DimsTooLarge, "embedding needs 1 <= dims < n, got dims=" +
                                             std::to_string(dims) + " n=" + std::to_string(n));
  }
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd sq(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      const double x = d(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      sq(i, j) = x * x;
    }
  }
  // B = -1/2 J D2 J with J the centering projector
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const Eigen::RowVectorXd col_mean = sq.colwise().mean();
  const double all_mean = sq.mean();
  Eigen::MatrixXd b = sq;
  b.colwise() -= row_mean;
  b.rowwise() -= col_mean;
  b.array() += all_mean;
  b *= -0.5;
  b = 0.5 * (b + b.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::DomainError, "eigendecomposition of the centered matrix failed");
  }
  // eigenvalues come back ascending
  Embedding e;
  e.n = n;
  e.dims = dims;
  e.coords.assign(n * dims, 0.0);
  for (std::size_t k = 0; k < dims; ++k) {
    const Eigen::Index col = N - 1 - static_cast<Eigen::Index>(k);
    const double scale = std::sqrt(std::max(0.0, eig.eigenvalues()(col)));
    Eigen::VectorXd axis = eig.eigenvectors().col(col) * scale;
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < N; ++i) {
      if (std::abs(axis(i)) > std::abs(axis(arg))) arg = i;
    }
    if (axis(arg) < 0.0) axis = -axis;
    for (std::size_t i = 0; i < n; ++i) e.coords[i * dims + k] = axis(static_cast<Eigen::Index>(i));
  }
  return e;
}

namespace {

// Nearest and second-nearest medoid (positions into `medoids`) of every item.
struct Assignment {
  std::vector<std::size_t> nearest;
  std::vector<double> d1;
  std::vector<double> d2;
  double cost = 0.0;
};

Assignment assign(const DistanceMatrix& d, const std::vector<std::size_t>& medoids) {
  const std::size_t n = d.n;
  Assignment a;
  a.nearest.assign(n, 0);
  a.d1.assign(n, std::numeric_limits<double>::infinity());
  a.d2.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t p = 0; p < medoids.size(); ++p) {
      const double x = d(o, medoids[p]);
      if (x < a.d1[o]) {
        a.d2[o] = a.d1[o];
        a.d1[o] = x;
        a.nearest[o] = p;
      } else if (x < a.d2[o]) {
        a.d2[o] = x;
      }
    }
    a.cost += a.d1[o];
  }
  return a;
}

struct Descent {
  std::vector<std::size_t> medoids;
  Assignment assignment;
  std::vector<double> trace;
};

Descent swap_descent(const DistanceMatrix& d, std::vector<std::size_t> medoids) {
  const std::size_t n = d.n;
  const std::size_t k = medoids.size();
  Descent run;
  run.assignment = assign(d, medoids);
  run.trace.push_back(run.assignment.cost);
  std::vector<bool> is_medoid(n, false);
  for (auto m : medoids) is_medoid[m] = true;

  for (;;) {
    const Assignment& a = run.assignment;
    double best_delta = 0.0;
    std::size_t best_p = 0;
    std::size_t best_x = n;
    for (std::size_t x = 0; x < n; ++x) {
      if (is_medoid[x]) continue;
      for (std::size_t p = 0; p < k; ++p) {
        double delta = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
          const double stay = a.nearest[o] == p ? a.d2[o] : a.d1[o];
          delta += std::min(stay, d(o, x)) - a.d1[o];
        }
        if (delta < best_delta) {
          best_delta = delta;
          best_p = p;
          best_x = x;
        }
      }
    }
    // stop once no swap improves by more than rounding noise
    if (best_x == n || best_delta > -1e-12 * (1.0 + a.cost)) break;
    is_medoid[medoids[best_p]] = false;
    is_medoid[best_x] = true;
    medoids[best_p] = best_x;
    run.assignment = assign(d, medoids);
    assert(run.assignment.cost <= run.trace.back());
    run.trace.push_back(run.assignment.cost);
  }
  run.medoids = std::move(medoids);
  return run;
}

}  // namespace

Partition cluster_kmedoids(const DistanceMatrix& d, std::size_t k, const KMedoidsOptions& options) {
  const std::size_t n = d.n;
  if (k < 1 || k > n) {
    throw Error(ErrorCode::DomainError,
                "k-medoids needs 1 <= k <= n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
  }
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  Descent best;
  bool have = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(options.seed, r + 1));
    Descent run = swap_descent(d, rng.subset(n, k));
    if (!have || run.assignment.cost < best.assignment.cost) {
      best = std::move(run);
      have = true;
    }
  }

  // number clusters by their smallest member
  std::vector<std::int64_t> id_of(k, -1);
  std::int64_t next = 0;
  Partition out;
  out.labels.assign(n, 0);
  for (std::size_t o = 0; o < n; ++o) {
    const std::size_t p = best.assignment.nearest[o];
    if (id_of[p] < 0) id_of[p] = next++;
    out.labels[o] = id_of[p];
  }
  out.medoids.assign(k, 0);
  for (std::size_t p = 0; p < k; ++p) out.medoids[static_cast<std::size_t>(id_of[p])] = best.medoids[p];
  out.cost = best.assignment.cost;
  out.cost_trace = std::move(best.trace);
  return out;
}

Partition cluster_kmedoids(const Embedding& points, std::size_t k, const KMedoidsOptions& options) {
  DistanceMatrix d(points.n);
  for (std::size_t i = 0; i < points.n; ++i) {
    for (std::size_t j = i + 1; j < points.n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < points.dims; ++c) {
        const double diff = points(i, c) - points(j, c);
        s += diff * diff;
      }
      d(i, j) = d(j, i) = std::sqrt(s);
    }
  }
  return cluster_kmedoids(d, k, options);
}

double adjusted_rand_index(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DomainError, "partitions differ in length");
  const auto n = static_cast<double>(a.size());
  std::map<std::pair<std::int64_t, std::int64_t>, double> cells;
  std::map<std::int64_t, double> rows;
  std::map<std::int64_t, double> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cells[{a[i], b[i]}] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  double index = 0, sa = 0, sb = 0;
  for (const auto& [key, c] : cells) index += c2(c);
  for (const auto& [key, c] : rows) sa += c2(c);
  for (const auto& [key, c] : cols) sb += c2(c);
  const double expected = n < 2 ? 0.0 : sa * sb / c2(n);
  const double top = 0.5 * (sa + sb);
  // both partitions trivial in the same way
  if (top == expected) return 1.0;
  return (index - expected) / (top - expected);
}

double silhouette(const DistanceMatrix& d, std::span<const std::int64_t> labels) {
  const std::size_t n = d.n;
  if (labels.size() != n) throw Error(ErrorCode::DomainError, "one label per item required");
  std::map<std::int64_t, std::size_t> size;
  for (auto l : labels) ++size[l];
  if (size.size() < 2) throw Error(ErrorCode::DomainError, "silhouette needs two or more clusters");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (size[labels[i]] == 1) continue;
    std::map<std::int64_t, double> sum;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sum[labels[j]] += d(i, j);
    }
    const double a = sum[labels[i]] / static_cast<double>(size[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [l, s] : sum) {
      if (l != labels[i]) b = std::min(b, s / static_cast<double>(size[l]));
    }
    const double m = std::max(a, b);
    total += m > 0.0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(n);
}

double roc_auc(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) throw Error(ErrorCode::DomainError, "AUC needs both classes present");
  std::vector<double> neg(negatives.begin(), negatives.end());
  std::sort(neg.begin(), neg.end());
  double wins = 0.0;
  for (double x : positives) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), x);
    const auto hi = std::upper_bound(lo, neg.end(), x);
    wins += static_cast<double>(lo - neg.begin()) + 0.5 * static_cast<double>(hi - lo);
  }
  return wins / (static_cast<double>(positives.size()) * static_cast<double>(neg.size()));
}

}  // namespace pathmatch
