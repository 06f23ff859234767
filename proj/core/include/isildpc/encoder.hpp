#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isildpc/sparse.hpp"

namespace isildpc {

// Systematic encoder built by approximate-triangular preprocessing of H:
// greedy diagonal extension pairs degree-1 residual columns with rows; the
// leftover gap rows are reduced against the triangle and solved through a
// precomputed dense inverse. Encoding costs O(nnz + gap^2).
class Encoder {
 public:
  explicit Encoder(const SparseBinaryMatrix& h);

  int n() const { return h_.cols(); }
  int k() const { return static_cast<int>(systematic_cols_.size()); }
  int gap() const { return static_cast<int>(pivot_cols_.size()); }
  // rows of H that were linearly dependent and dropped
  int rank_deficiency() const { return rank_deficiency_; }
  const std::vector<int>& systematic_positions() const { return systematic_cols_; }

  std::vector<std::uint8_t> encode(std::span<const std::uint8_t> payload) const;

 private:
  SparseBinaryMatrix h_;
  std::vector<int> diag_rows_, diag_cols_;  // triangle pairs in elimination order
  std::vector<int> col_diag_index_;         // column -> triangle position, -1 otherwise
  std::vector<int> gap_rows_;               // kept (independent) gap rows
  std::vector<int> pivot_cols_;             // p1 columns, one per kept gap row
  std::vector<int> col_role_;               // -1 diag, -2 pivot, >=0 payload index
  std::vector<int> systematic_cols_;
  std::vector<std::uint64_t> phi_inv_;      // gap x gap dense inverse, row-major words
  int phi_words_ = 0;
  int rank_deficiency_ = 0;
};

}  // namespace isildpc
