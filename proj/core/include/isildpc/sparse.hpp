#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace isildpc {

// Immutable sparse binary matrix with both row-major and column-major views.
class SparseBinaryMatrix {
 public:
  SparseBinaryMatrix() = default;
  SparseBinaryMatrix(int rows, int cols, std::vector<std::pair<int, int>> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long long nnz() const { return static_cast<long long>(row_idx_.size()); }

  std::span<const std::int32_t> row(int r) const {
    return {row_idx_.data() + row_ptr_[r], row_idx_.data() + row_ptr_[r + 1]};
  }
  std::span<const std::int32_t> col(int c) const {
    return {col_idx_.data() + col_ptr_[c], col_idx_.data() + col_ptr_[c + 1]};
  }
  // edge ids are positions in the row-major (CSR) ordering
  std::span<const std::int32_t> col_edge_ids(int c) const {
    return {col_edge_.data() + col_ptr_[c], col_edge_.data() + col_ptr_[c + 1]};
  }
  int row_of_edge(std::int32_t edge_id) const { return edge_row_[edge_id]; }
  int col_of_edge(std::int32_t edge_id) const { return row_idx_[edge_id]; }
  std::int32_t row_begin(int r) const { return row_ptr_[r]; }

  bool syndrome_zero(std::span<const std::uint8_t> word) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::int32_t> row_ptr_, row_idx_;  // CSR: columns per row, sorted
  std::vector<std::int32_t> col_ptr_, col_idx_;  // CSC: rows per column, sorted
  std::vector<std::int32_t> col_edge_;           // CSR edge id per CSC slot
  std::vector<std::int32_t> edge_row_;           // row per CSR edge id
};

}  // namespace isildpc
