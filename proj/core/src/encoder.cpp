#include "isildpc/encoder.hpp"

#include <stdexcept>

namespace isildpc {

namespace {

inline bool get_bit(const std::vector<std::uint64_t>& bits, std::size_t i) {
  return (bits[i >> 6] >> (i & 63)) & 1;
}
inline void flip_bit(std::vector<std::uint64_t>& bits, std::size_t i) {
  bits[i >> 6] ^= 1ULL << (i & 63);
}

}  // namespace

Encoder::Encoder(const SparseBinaryMatrix& h) : h_(h) {
  const int m = h_.rows(), n = h_.cols();

  // greedy diagonal extension: repeatedly pair a residual-degree-1 column
  // with its single active row; when stuck, retire the heaviest active row
  // to the gap
  std::vector<int> col_deg(static_cast<std::size_t>(n));
  std::vector<int> row_deg(static_cast<std::size_t>(m));
  std::vector<char> row_active(static_cast<std::size_t>(m), 1);
  std::vector<char> col_active(static_cast<std::size_t>(n), 1);
  std::vector<int> degree_one;
  for (int c = 0; c < n; ++c) {
    col_deg[static_cast<std::size_t>(c)] = static_cast<int>(h_.col(c).size());
    if (col_deg[static_cast<std::size_t>(c)] == 1) degree_one.push_back(c);
  }
  for (int r = 0; r < m; ++r) row_deg[static_cast<std::size_t>(r)] = static_cast<int>(h_.row(r).size());
  col_diag_index_.assign(static_cast<std::size_t>(n), -1);
  std::vector<char> row_gapped(static_cast<std::size_t>(m), 0);
  int active_rows = m;

  auto deactivate_col = [&](int c) {
    col_active[static_cast<std::size_t>(c)] = 0;
    for (std::int32_t r : h_.col(c))
      if (row_active[static_cast<std::size_t>(r)]) --row_deg[static_cast<std::size_t>(r)];
  };
  auto deactivate_row = [&](int r) {
    row_active[static_cast<std::size_t>(r)] = 0;
    --active_rows;
    for (std::int32_t c : h_.row(r)) {
      if (!col_active[static_cast<std::size_t>(c)]) continue;
      if (--col_deg[static_cast<std::size_t>(c)] == 1) degree_one.push_back(c);
    }
  };

  while (active_rows > 0) {
    int col = -1;
    while (!degree_one.empty()) {
      int c = degree_one.back();
      degree_one.pop_back();
      if (col_active[static_cast<std::size_t>(c)] && col_deg[static_cast<std::size_t>(c)] == 1) {
        col = c;
        break;
      }
    }
    if (col >= 0) {
      int row = -1;
      for (std::int32_t r : h_.col(col))
        if (row_active[static_cast<std::size_t>(r)]) {
          row = r;
          break;
        }
      col_diag_index_[static_cast<std::size_t>(col)] = static_cast<int>(diag_cols_.size());
      diag_cols_.push_back(col);
      diag_rows_.push_back(row);
      deactivate_col(col);
      deactivate_row(row);
      continue;
    }
    // no degree-1 column: retire the heaviest active row into the gap
    int worst = -1, worst_deg = -1;
    for (int r = 0; r < m; ++r)
      if (row_active[static_cast<std::size_t>(r)] && row_deg[static_cast<std::size_t>(r)] > worst_deg) {
        worst = r;
        worst_deg = row_deg[static_cast<std::size_t>(r)];
      }
    row_gapped[static_cast<std::size_t>(worst)] = 1;
    deactivate_row(worst);
  }

  const int t = static_cast<int>(diag_cols_.size());
  std::vector<int> all_gap_rows;
  for (int r = 0; r < m; ++r)
    if (row_gapped[static_cast<std::size_t>(r)]) all_gap_rows.push_back(r);

  // reduce each gap row against the triangle, tracked as a dense bit row
  // over the non-diagonal columns plus the diagonal scratch
  const std::size_t n_words = (static_cast<std::size_t>(n) + 63) / 64;
  std::vector<std::vector<std::uint64_t>> reduced;
  reduced.reserve(all_gap_rows.size());
  for (int rg : all_gap_rows) {
    std::vector<std::uint64_t> bits(n_words, 0);
    for (std::int32_t c : h_.row(rg)) flip_bit(bits, static_cast<std::size_t>(c));
    for (int i = 0; i < t; ++i) {
      const std::size_t dc = static_cast<std::size_t>(diag_cols_[static_cast<std::size_t>(i)]);
      if (!get_bit(bits, dc)) continue;
      for (std::int32_t c : h_.row(diag_rows_[static_cast<std::size_t>(i)]))
        flip_bit(bits, static_cast<std::size_t>(c));
    }
    reduced.push_back(std::move(bits));
  }

  // pivot selection over the reduced rows (non-diagonal columns only)
  std::vector<int> pivot_row_of;  // aligned with pivot_cols_
  std::vector<char> row_used(reduced.size(), 0);
  std::vector<std::vector<std::uint64_t>> work = reduced;
  for (int c = 0; c < n && pivot_cols_.size() < reduced.size(); ++c) {
    if (col_diag_index_[static_cast<std::size_t>(c)] >= 0) continue;
    int pivot = -1;
    for (std::size_t r = 0; r < work.size(); ++r)
      if (!row_used[r] && get_bit(work[r], static_cast<std::size_t>(c))) {
        pivot = static_cast<int>(r);
        break;
      }
    if (pivot < 0) continue;
    row_used[static_cast<std::size_t>(pivot)] = 1;
    pivot_cols_.push_back(c);
    pivot_row_of.push_back(pivot);
    for (std::size_t r = 0; r < work.size(); ++r)
      if (static_cast<int>(r) != pivot && get_bit(work[r], static_cast<std::size_t>(c)))
        for (std::size_t w = 0; w < n_words; ++w) work[r][w] ^= work[static_cast<std::size_t>(pivot)][w];
  }
  rank_deficiency_ = static_cast<int>(reduced.size() - pivot_cols_.size());
  for (std::size_t r = 0; r < pivot_row_of.size(); ++r)
    gap_rows_.push_back(all_gap_rows[static_cast<std::size_t>(pivot_row_of[r])]);

  // phi = kept reduced rows restricted to pivot columns; invert by
  // Gauss-Jordan with an augmented identity
  const int g = static_cast<int>(pivot_cols_.size());
  phi_words_ = (g + 63) / 64;
  std::vector<std::uint64_t> phi(static_cast<std::size_t>(g) * phi_words_, 0);
  for (int r = 0; r < g; ++r) {
    const auto& row = reduced[static_cast<std::size_t>(pivot_row_of[static_cast<std::size_t>(r)])];
    for (int c = 0; c < g; ++c)
      if (get_bit(row, static_cast<std::size_t>(pivot_cols_[static_cast<std::size_t>(c)])))
        phi[static_cast<std::size_t>(r) * phi_words_ + (c >> 6)] ^= 1ULL << (c & 63);
  }
  phi_inv_.assign(static_cast<std::size_t>(g) * phi_words_, 0);
  for (int r = 0; r < g; ++r)
    phi_inv_[static_cast<std::size_t>(r) * phi_words_ + (r >> 6)] = 1ULL << (r & 63);
  for (int c = 0; c < g; ++c) {
    int pivot = -1;
    for (int r = c; r < g; ++r)
      if ((phi[static_cast<std::size_t>(r) * phi_words_ + (c >> 6)] >> (c & 63)) & 1) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw std::logic_error("encoder: singular phi after pivot selection");
    if (pivot != c)
      for (int w = 0; w < phi_words_; ++w) {
        std::swap(phi[static_cast<std::size_t>(c) * phi_words_ + w],
                  phi[static_cast<std::size_t>(pivot) * phi_words_ + w]);
        std::swap(phi_inv_[static_cast<std::size_t>(c) * phi_words_ + w],
                  phi_inv_[static_cast<std::size_t>(pivot) * phi_words_ + w]);
      }
    for (int r = 0; r < g; ++r) {
      if (r == c) continue;
      if ((phi[static_cast<std::size_t>(r) * phi_words_ + (c >> 6)] >> (c & 63)) & 1)
        for (int w = 0; w < phi_words_; ++w) {
          phi[static_cast<std::size_t>(r) * phi_words_ + w] ^=
              phi[static_cast<std::size_t>(c) * phi_words_ + w];
          phi_inv_[static_cast<std::size_t>(r) * phi_words_ + w] ^=
              phi_inv_[static_cast<std::size_t>(c) * phi_words_ + w];
        }
    }
  }

  col_role_.assign(static_cast<std::size_t>(n), 0);
  for (int c : diag_cols_) col_role_[static_cast<std::size_t>(c)] = -1;
  for (int c : pivot_cols_) col_role_[static_cast<std::size_t>(c)] = -2;
  for (int c = 0; c < n; ++c)
    if (col_role_[static_cast<std::size_t>(c)] == 0) {
      col_role_[static_cast<std::size_t>(c)] = static_cast<int>(systematic_cols_.size());
      systematic_cols_.push_back(c);
    }
}

std::vector<std::uint8_t> Encoder::encode(std::span<const std::uint8_t> payload) const {
  if (static_cast<int>(payload.size()) != k())
    throw std::invalid_argument("encode: payload length " + std::to_string(payload.size()) +
                                " does not match k = " + std::to_string(k()));
  const int n = h_.cols();
  const int t = static_cast<int>(diag_cols_.size());
  const int g = gap();
  std::vector<std::uint8_t> c(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < k(); ++i)
    c[static_cast<std::size_t>(systematic_cols_[static_cast<std::size_t>(i)])] = payload[static_cast<std::size_t>(i)] & 1;

  // z = T^-1 (A s): solve triangle rows against systematic bits only
  std::vector<std::uint8_t> z(static_cast<std::size_t>(t), 0);
  for (int i = t; i-- > 0;) {
    unsigned acc = 0;
    for (std::int32_t cc : h_.row(diag_rows_[static_cast<std::size_t>(i)])) {
      const int role = col_role_[static_cast<std::size_t>(cc)];
      const int di = col_diag_index_[static_cast<std::size_t>(cc)];
      if (role >= 0)
        acc ^= c[static_cast<std::size_t>(cc)];
      else if (di >= 0 && di != i)
        acc ^= z[static_cast<std::size_t>(di)];
    }
    z[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(acc & 1);
  }

  // w = C s + E z over kept gap rows, then p1 = phi^-1 w
  std::vector<std::uint64_t> w(static_cast<std::size_t>(phi_words_), 0);
  for (int r = 0; r < g; ++r) {
    unsigned acc = 0;
    for (std::int32_t cc : h_.row(gap_rows_[static_cast<std::size_t>(r)])) {
      const int role = col_role_[static_cast<std::size_t>(cc)];
      const int di = col_diag_index_[static_cast<std::size_t>(cc)];
      if (role >= 0)
        acc ^= c[static_cast<std::size_t>(cc)];
      else if (di >= 0)
        acc ^= z[static_cast<std::size_t>(di)];
    }
    if (acc & 1) w[static_cast<std::size_t>(r >> 6)] ^= 1ULL << (r & 63);
  }
  for (int r = 0; r < g; ++r) {
    unsigned parity = 0;
    for (int wd = 0; wd < phi_words_; ++wd)
      parity ^= static_cast<unsigned>(
          __builtin_popcountll(phi_inv_[static_cast<std::size_t>(r) * phi_words_ + wd] &
                               w[static_cast<std::size_t>(wd)]));
    c[static_cast<std::size_t>(pivot_cols_[static_cast<std::size_t>(r)])] =
        static_cast<std::uint8_t>(parity & 1);
  }

  // p2 by substitution in reverse pairing order; every other column is final
  for (int i = t; i-- > 0;) {
    unsigned acc = 0;
    const int own = diag_cols_[static_cast<std::size_t>(i)];
    for (std::int32_t cc : h_.row(diag_rows_[static_cast<std::size_t>(i)]))
      if (cc != own) acc ^= c[static_cast<std::size_t>(cc)];
    c[static_cast<std::size_t>(own)] = static_cast<std::uint8_t>(acc & 1);
  }
  return c;
}

}  // namespace isildpc
