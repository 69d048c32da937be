#pragma once

// Maximum-weight bipartite assignment. Not installed.

#include <cstddef>
#include <vector>

namespace pathmatch::detail {

struct Assignment {
  double value = 0.0;
  /// col_of[i] is the column given to row i, or -1.
  std::vector<long> col_of;
};

/// Rows x cols nonnegative weights, row-major. Every row of the smaller side
/// is assigned (possibly to a zero-weight partner). O(k^2 K) for k <= K.
Assignment max_weight_assignment(const std::vector<double>& weights, std::size_t rows,
                                 std::size_t cols);

}  // namespace pathmatch::detail
