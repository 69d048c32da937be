#pragma once

// Streaming forward pass of the basic matching recurrence, shared by
// match_basic, match_score and match_top_k. Not installed.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <type_traits>
#include <vector>

#if defined(__AVX512F__) && defined(__AVX512BW__) && defined(__AVX512VBMI__)
#include <immintrin.h>
#define PATHMATCH_AVX512 1
#endif

#include "matcher_internal.hpp"
#include "pathmatch/matcher.hpp"

namespace pathmatch {

struct MatchWorkspace::Buffers {
  std::vector<double> rows_f64;
  std::vector<std::int32_t> rows_i32;
  std::vector<std::uint8_t> rows_u8;
  std::vector<double> weights_f64;
  std::vector<std::int32_t> weights_i32;
  std::vector<std::uint8_t> weights_u8;
  std::vector<std::uint8_t> weights_ready;
  std::unique_ptr<std::uint8_t[]> choice;
  std::size_t choice_capacity = 0;

  std::uint8_t* choice_buffer(std::size_t cells);

  template <class S>
  std::vector<S>& rows() {
    if constexpr (std::is_same_v<S, double>) return rows_f64;
    else if constexpr (std::is_same_v<S, std::int32_t>) return rows_i32;
    else return rows_u8;
  }
  template <class S>
  std::vector<S>& weights() {
    if constexpr (std::is_same_v<S, double>) return weights_f64;
    else if constexpr (std::is_same_v<S, std::int32_t>) return weights_i32;
    else return weights_u8;
  }
};

namespace detail {

using MatchBuffers = MatchWorkspace::Buffers;

/// 0/1 weights give scores of at most min(height) + 1, small enough for bytes.
inline bool fits_u8(const LabelledTree& g, const LabelledTree& h) {
  return std::min(g.height(), h.height()) + 1 <= 127;
}

// Rows are read up to two vectors past a window start.
inline constexpr std::size_t kRowPadding = 128;

// Choice codes: 1 = drop u (A(anc u, v)), 2 = drop v (A(u, anc v)), 3 = match.
template <class S, bool kChoice>
inline S cell(const S* prev, const S* cur, const S* wrow, std::size_t v, std::size_t p,
              std::uint8_t* choice) {
  const S w = wrow[v];
  const S o1 = prev[v];
  const S o2 = cur[p];
  const S o3 = static_cast<S>(w + prev[p]);
  const S m12 = o2 >= o1 ? o2 : o1;
  if constexpr (kChoice) {
    const std::uint8_t c12 = o2 >= o1 ? 2 : 1;
    choice[v] = (w > 0 && o3 >= m12) ? std::uint8_t{3} : c12;
  }
  return o3 > m12 ? o3 : m12;
}

template <class S, bool kChoice>
inline void scalar_block(const S* prev, S* cur, const S* wrow, const std::int32_t* hpar,
                         std::uint32_t b, std::uint32_t e, std::uint8_t* choice, S& rmax) {
  for (std::uint32_t v = b; v < e; ++v) {
    const S x = cell<S, kChoice>(prev, cur, wrow, v, static_cast<std::size_t>(hpar[v]), choice);
    cur[v] = x;
    rmax = x > rmax ? x : rmax;
  }
}

#ifdef PATHMATCH_AVX512
template <bool kChoice>
inline std::uint8_t simd_row(const std::uint8_t* prev, std::uint8_t* cur, const std::uint8_t* wrow,
                             const BfsLayout& hl, std::uint8_t* choice, std::uint8_t rmax) {
  const LaneChunks& ch = hl.lanes64;
  const __m512i one = _mm512_set1_epi8(1);
  const __m512i two = _mm512_set1_epi8(2);
  const __m512i three = _mm512_set1_epi8(3);
  const __m512i zero = _mm512_setzero_si512();
  __m512i vmax = zero;
  for (std::size_t k = 0; k < ch.begin.size(); ++k) {
    const std::uint32_t b = ch.begin[k];
    const std::uint32_t e = ch.end[k];
    if (ch.mode[k] == 0) {
      scalar_block<std::uint8_t, kChoice>(prev, cur, wrow, hl.parent.data(), b, e, choice, rmax);
      continue;
    }
    const __mmask64 live = e - b == 64 ? ~__mmask64{0} : (__mmask64{1} << (e - b)) - 1;
    const __m512i idx = _mm512_loadu_si512(ch.idx.data() + k * 64);
    const std::uint8_t* pw = prev + ch.base[k];
    const std::uint8_t* cw = cur + ch.base[k];
    __m512i pp;
    __m512i cp;
    if (ch.mode[k] == 1) {
      pp = _mm512_permutexvar_epi8(idx, _mm512_loadu_si512(pw));
      cp = _mm512_permutexvar_epi8(idx, _mm512_loadu_si512(cw));
    } else {
      pp = _mm512_permutex2var_epi8(_mm512_loadu_si512(pw), idx, _mm512_loadu_si512(pw + 64));
      cp = _mm512_permutex2var_epi8(_mm512_loadu_si512(cw), idx, _mm512_loadu_si512(cw + 64));
    }
    const __m512i o1 = _mm512_maskz_loadu_epi8(live, prev + b);
    const __m512i w = _mm512_maskz_loadu_epi8(live, wrow + b);
    const __m512i o3 = _mm512_add_epi8(w, pp);
    const __m512i m12 = _mm512_max_epu8(o1, cp);
    const __m512i out = _mm512_maskz_max_epu8(live, o3, m12);
    _mm512_mask_storeu_epi8(cur + b, live, out);
    vmax = _mm512_max_epu8(vmax, out);
    if constexpr (kChoice) {
      const __mmask64 ge21 = _mm512_cmpge_epu8_mask(cp, o1);
      const __mmask64 m3 = _mm512_cmpgt_epu8_mask(w, zero) & _mm512_cmpge_epu8_mask(o3, m12);
      const __m512i c = _mm512_mask_blend_epi8(m3, _mm512_mask_blend_epi8(ge21, one, two), three);
      _mm512_mask_storeu_epi8(choice + b, live, c);
    }
  }
  alignas(64) std::uint8_t lanes[64];
  _mm512_store_si512(lanes, vmax);
  for (auto x : lanes) rmax = x > rmax ? x : rmax;
  return rmax;
}

template <bool kChoice>
inline double simd_row(const double* prev, double* cur, const double* wrow, const BfsLayout& hl,
                       std::uint8_t* choice, double rmax) {
  const LaneChunks& ch = hl.lanes8;
  const __m512d zero = _mm512_setzero_pd();
  __m512d vmax = _mm512_set1_pd(rmax);
  for (std::size_t k = 0; k < ch.begin.size(); ++k) {
    const std::uint32_t b = ch.begin[k];
    const std::uint32_t e = ch.end[k];
    if (ch.mode[k] == 0) {
      scalar_block<double, kChoice>(prev, cur, wrow, hl.parent.data(), b, e, choice, rmax);
      continue;
    }
    const __mmask8 live = static_cast<__mmask8>((1u << (e - b)) - 1);
    const __m512i idx = _mm512_cvtepu8_epi64(
        _mm_loadl_epi64(reinterpret_cast<const __m128i*>(ch.idx.data() + k * 8)));
    const double* pw = prev + ch.base[k];
    const double* cw = cur + ch.base[k];
    __m512d pp;
    __m512d cp;
    if (ch.mode[k] == 1) {
      pp = _mm512_permutexvar_pd(idx, _mm512_loadu_pd(pw));
      cp = _mm512_permutexvar_pd(idx, _mm512_loadu_pd(cw));
    } else {
      pp = _mm512_permutex2var_pd(_mm512_loadu_pd(pw), idx, _mm512_loadu_pd(pw + 8));
      cp = _mm512_permutex2var_pd(_mm512_loadu_pd(cw), idx, _mm512_loadu_pd(cw + 8));
    }
    const __m512d o1 = _mm512_maskz_loadu_pd(live, prev + b);
    const __m512d w = _mm512_maskz_loadu_pd(live, wrow + b);
    const __m512d o3 = _mm512_add_pd(w, pp);
    // same operand order as the scalar path so ties resolve identically
    const __mmask8 ge21 = _mm512_cmp_pd_mask(cp, o1, _CMP_GE_OQ);
    const __m512d m12 = _mm512_mask_blend_pd(ge21, o1, cp);
    const __mmask8 gt3 = _mm512_cmp_pd_mask(o3, m12, _CMP_GT_OQ);
    const __m512d out = _mm512_mask_blend_pd(gt3, m12, o3);
    _mm512_mask_storeu_pd(cur + b, live, out);
    vmax = _mm512_mask_max_pd(vmax, live, vmax, out);
    if constexpr (kChoice) {
      const __mmask8 m3 = _mm512_cmp_pd_mask(w, zero, _CMP_GT_OQ) &
                          _mm512_cmp_pd_mask(o3, m12, _CMP_GE_OQ);
      const __m128i c = _mm_mask_blend_epi8(
          m3, _mm_mask_blend_epi8(ge21, _mm_set1_epi8(1), _mm_set1_epi8(2)), _mm_set1_epi8(3));
      _mm_mask_storeu_epi8(choice + b, live, c);
    }
  }
  return std::max(rmax, _mm512_reduce_max_pd(vmax));
}
#endif

/// One row A(u, .) in bfs order of h; returns the row maximum.
template <class S, bool kChoice>
inline S fill_row(const S* prev, S* cur, const S* wrow, const BfsLayout& hl,
                  std::uint8_t* choice) {
  {
    const S o1 = prev[0];
    const S o3 = wrow[0];
    cur[0] = o3 > o1 ? o3 : o1;
    if constexpr (kChoice) {
      choice[0] = (wrow[0] > 0 && o3 >= o1) ? 3 : (o1 <= 0 ? 2 : 1);
    }
  }
  S rmax = cur[0];
#ifdef PATHMATCH_AVX512
  if constexpr (std::is_same_v<S, std::uint8_t> || std::is_same_v<S, double>) {
    return simd_row<kChoice>(prev, cur, wrow, hl, choice, rmax);
  }
#endif
  const std::uint32_t n = static_cast<std::uint32_t>(hl.order.size());
  scalar_block<S, kChoice>(prev, cur, wrow, hl.parent.data(), 1, n, choice, rmax);
  return rmax;
}

template <class S>
struct Best {
  S score = 0;
  NodeId u = 0;
  std::uint32_t vb = 0;
};

/// Runs the recurrence over g in preorder, one score row per depth level.
/// Calls hook(u, prev_row, cur_row, weight_row) after every row; rows are
/// indexed by h's bfs position. With kChoice, also fills the choice table and
/// returns the lexicographically smallest argmax cell (by original indices);
/// otherwise only the score is meaningful.
template <class S, bool kChoice, class Hook>
Best<S> forward_pass(const LabelledTree& g, const BfsLayout& hl, PairWeights& pw,
                     MatchBuffers& buf, Hook&& hook) {
  const std::size_t n = g.size();
  const std::size_t m = hl.order.size();

  auto& rows = buf.rows<S>();
  rows.resize((g.height() + 2) * m + kRowPadding);
  std::fill(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(m), S{0});

  // expanded weight rows in bfs order, cached per distinct g label
  constexpr std::size_t kMaxCachedWeights = std::size_t{1} << 23;
  const bool cache_rows = pw.g_labels() * m <= kMaxCachedWeights;
  auto& wcache = buf.weights<S>();
  wcache.resize((cache_rows ? pw.g_labels() * m : m) + kRowPadding);
  buf.weights_ready.assign(cache_rows ? pw.g_labels() : 0, 0);
  std::vector<std::uint32_t> hid_bfs(m);
  for (std::size_t vb = 0; vb < m; ++vb) hid_bfs[vb] = pw.h_label(hl.order[vb]);

  std::uint8_t* choice = kChoice ? buf.choice_buffer(n * m + kRowPadding) : nullptr;

  Best<S> best;
  bool have = false;
  for (NodeId u : preorder(g)) {
    const std::size_t d = g.depth(u);
    const S* prev = rows.data() + d * m;
    S* cur = rows.data() + (d + 1) * m;

    S* wrow = wcache.data();
    if (cache_rows) {
      const std::uint32_t a = pw.g_label(u);
      wrow += static_cast<std::size_t>(a) * m;
      if (!buf.weights_ready[a]) {
        auto src = pw.row(u);
        for (std::size_t vb = 0; vb < m; ++vb) wrow[vb] = static_cast<S>(src[hid_bfs[vb]]);
        buf.weights_ready[a] = 1;
      }
    } else {
      auto src = pw.row(u);
      for (std::size_t vb = 0; vb < m; ++vb) wrow[vb] = static_cast<S>(src[hid_bfs[vb]]);
    }

    const S rmax = fill_row<S, kChoice>(prev, cur, wrow, hl, kChoice ? choice + u * m : nullptr);
    hook(u, prev, cur, wrow);

    if constexpr (kChoice) {
      if (!have || rmax > best.score || (rmax == best.score && u < best.u)) {
        std::uint32_t arg = 0;
        NodeId arg_v = static_cast<NodeId>(-1);
        for (std::size_t vb = 0; vb < m; ++vb) {
          if (cur[vb] == rmax && hl.order[vb] < arg_v) {
            arg_v = hl.order[vb];
            arg = static_cast<std::uint32_t>(vb);
          }
        }
        best = {rmax, u, arg};
        have = true;
      }
    } else {
      best.score = rmax > best.score ? rmax : best.score;
    }
  }
  return best;
}

Matching backtrace(const LabelledTree& g, const BfsLayout& hl, const std::uint8_t* choice,
                   NodeId u, std::uint32_t vb);

}  // namespace detail
}  // namespace pathmatch
