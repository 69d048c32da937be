#include <algorithm>
#include <map>

#include "pathmatch/workflow.hpp"

namespace pathmatch {

namespace {

using Code = std::uint32_t;
using Codes = std::vector<Code>;

std::size_t lcs_length(const Codes& a, const Codes& b, std::vector<std::size_t>& row) {
  row.assign(b.size() + 1, 0);
  for (Code x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = x == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

// Alignment of one sequence against the center: the element placed in each
// center column (or none) and the elements inserted into each of the
// center.size() + 1 slots between center columns.
struct StarRow {
  std::vector<std::int64_t> at;
  std::vector<Codes> inserted;
};

StarRow align_to_center(const Codes& c, const Codes& s) {
  const std::size_t L = c.size();
  const std::size_t m = s.size();
  std::vector<std::size_t> dp((L + 1) * (m + 1), 0);
  auto A = [&](std::size_t i, std::size_t j) -> std::size_t& { return dp[i * (m + 1) + j]; };
  for (std::size_t i = 1; i <= L; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      A(i, j) = std::max({A(i - 1, j), A(i, j - 1), A(i - 1, j - 1) + (c[i - 1] == s[j - 1])});
    }
  }
  StarRow row;
  row.at.assign(L, -1);
  row.inserted.assign(L + 1, {});
  std::size_t i = L;
  std::size_t j = m;
  // the diagonal wins every tie, so substitutions share a column
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && A(i, j) == A(i - 1, j - 1) + (c[i - 1] == s[j - 1])) {
      row.at[i - 1] = s[j - 1];
      --i;
      --j;
    } else if (i > 0 && A(i, j) == A(i - 1, j)) {
      --i;
    } else {
      row.inserted[i].push_back(s[j - 1]);
      --j;
    }
  }
  for (auto& ins : row.inserted) std::reverse(ins.begin(), ins.end());
  return row;
}

}  // namespace

Exemplar extract_exemplar(std::span<const std::vector<Label>> sequences) {
  if (sequences.empty()) throw Error(ErrorCode::EmptyInput, "exemplar of zero sequences");
  const std::size_t n = sequences.size();

  // codes follow label order, so comparing codes compares labels
  std::map<Label, Code> code_of;
  for (const auto& seq : sequences) {
    for (const auto& l : seq) code_of.emplace(l, 0);
  }
  std::vector<const Label*> label_of;
  for (auto& [l, c] : code_of) {
    c = static_cast<Code>(label_of.size());
    label_of.push_back(&l);
  }
  std::vector<Codes> seqs(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& l : sequences[k]) seqs[k].push_back(code_of.at(l));
  }

  std::vector<std::size_t> total(n, 0);
  std::vector<std::size_t> scratch;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t s = lcs_length(seqs[a], seqs[b], scratch);
      total[a] += s;
      total[b] += s;
    }
  }
  const std::size_t center =
      static_cast<std::size_t>(std::max_element(total.begin(), total.end()) - total.begin());
  const Codes& c = seqs[center];
  const std::size_t L = c.size();

  std::vector<StarRow> rows(n);
  std::vector<std::size_t> width(L + 1, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == center) {
      rows[k].at.assign(c.begin(), c.end());
      rows[k].inserted.assign(L + 1, {});
    } else {
      rows[k] = align_to_center(c, seqs[k]);
    }
    for (std::size_t p = 0; p <= L; ++p) width[p] = std::max(width[p], rows[k].inserted[p].size());
  }

  Exemplar e;
  e.support = n;
  auto emit = [&](const std::map<Code, std::size_t>& counts, std::int64_t center_code) {
    std::size_t occupied = 0;
    for (const auto& [code, cnt] : counts) occupied += cnt;
    if (2 * occupied < n) return;
    // first maximal entry in code order is the smallest label
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    if (center_code >= 0) {
      const auto it = counts.find(static_cast<Code>(center_code));
      if (it->second == best->second) best = it;
    }
    e.sequence.push_back(*label_of[best->first]);
    e.agreement.push_back(static_cast<double>(best->second) / static_cast<double>(n));
  };
  for (std::size_t p = 0; p <= L; ++p) {
    for (std::size_t col = 0; col < width[p]; ++col) {
      std::map<Code, std::size_t> counts;
      for (const auto& r : rows) {
        if (col < r.inserted[p].size()) ++counts[r.inserted[p][col]];
      }
      emit(counts, -1);
    }
    if (p == L) break;
    std::map<Code, std::size_t> counts;
    for (const auto& r : rows) {
      if (r.at[p] >= 0) ++counts[static_cast<Code>(r.at[p])];
    }
    emit(counts, c[p]);
  }
  return e;
}

std::vector<std::vector<Label>> cluster_matched_sequences(std::span<const LabelledTree> trees,
                                                          std::span<const std::size_t> members,
                                                          const WeightSpec& w,
                                                          std::size_t threads) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) pairs.emplace_back(members[a], members[b]);
  }
  if (members.size() == 1) pairs.emplace_back(members[0], members[0]);
  std::vector<std::vector<Label>> out(pairs.size());
  std::vector<MatchWorkspace> scratch(worker_count(pairs.size(), threads));
  parallel_for(pairs.size(), threads, [&](std::size_t t, std::size_t worker) {
    const LabelledTree& g = trees[pairs[t].first];
    const MatchResult r = match_basic(g, trees[pairs[t].second], w, scratch[worker]);
    out[t] = matched_labels_g(g, r.matching);
  });
  return out;
}

std::vector<Exemplar> cluster_exemplars(std::span<const LabelledTree> trees,
                                        std::span<const std::int64_t> labels, const WeightSpec& w,
                                        std::size_t threads) {
  if (labels.size() != trees.size()) {
    throw Error(ErrorCode::DomainError, "partition has " + std::to_string(labels.size()) +
                                            " entries for " + std::to_string(trees.size()) +
                                            " trees");
  }
  std::int64_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    // negative ids mark unassigned items
    if (labels[i] >= 0) members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  std::vector<Exemplar> out;
  for (const auto& m : members) {
    if (m.empty()) {
      out.emplace_back();
      continue;
    }
    const auto seqs = cluster_matched_sequences(trees, m, w, threads);
    out.push_back(extract_exemplar(seqs));
  }
  return out;
}

LabelledTree exemplar_tree(const Exemplar& e) {
  if (e.sequence.empty()) return {};
  std::vector<std::int64_t> parents(e.sequence.size());
  for (std::size_t i = 0; i < parents.size(); ++i) parents[i] = static_cast<std::int64_t>(i) - 1;
  return build_tree(parents, e.sequence).tree;
}

}  // namespace pathmatch
