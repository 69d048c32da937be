#include "assignment.hpp"

#include <limits>

namespace pathmatch::detail {

namespace {

// Shortest augmenting paths with potentials on a k x K cost matrix, k <= K.
std::vector<long> hungarian_min(const std::vector<double>& cost, std::size_t k, std::size_t K) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pot_row(k + 1, 0.0), pot_col(K + 1, 0.0);
  std::vector<std::size_t> owner(K + 1, 0), way(K + 1, 0);
  for (std::size_t i = 1; i <= k; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> slack(K + 1, inf);
    std::vector<char> used(K + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= K; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * K + (j - 1)] - pot_row[i0] - pot_col[j];
        if (cur < slack[j]) {
          slack[j] = cur;
          way[j] = j0;
        }
        if (slack[j] < delta) {
          delta = slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= K; ++j) {
        if (used[j]) {
          pot_row[owner[j]] += delta;
          pot_col[j] -= delta;
        } else {
          slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<long> col_of(k, -1);
  for (std::size_t j = 1; j <= K; ++j) {
    if (owner[j] != 0) col_of[owner[j] - 1] = static_cast<long>(j - 1);
  }
  return col_of;
}

}  // namespace

Assignment max_weight_assignment(const std::vector<double>& weights, std::size_t rows,
                                 std::size_t cols) {
  Assignment out;
  out.col_of.assign(rows, -1);
  if (rows == 0 || cols == 0) return out;
  const bool transpose = rows > cols;
  const std::size_t k = transpose ? cols : rows;
  const std::size_t K = transpose ? rows : cols;
  std::vector<double> cost(k * K);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      cost[i * K + j] = -(transpose ? weights[j * cols + i] : weights[i * cols + j]);
    }
  }
  const auto match = hungarian_min(cost, k, K);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(match[i]);
    if (transpose) {
      out.col_of[j] = static_cast<long>(i);
    } else {
      out.col_of[i] = static_cast<long>(j);
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (out.col_of[i] >= 0) out.value += weights[i * cols + static_cast<std::size_t>(out.col_of[i])];
  }
  return out;
}

}  // namespace pathmatch::detail
