#include "isildpc/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace isildpc {

SparseBinaryMatrix::SparseBinaryMatrix(int rows, int cols,
                                       std::vector<std::pair<int, int>> entries)
    : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("sparse: non-positive dimensions");
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i] == entries[i - 1]) throw std::invalid_argument("sparse: duplicate entry");
  const auto nnz = static_cast<std::int32_t>(entries.size());
  row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
  col_ptr_.assign(static_cast<std::size_t>(cols) + 1, 0);
  row_idx_.resize(entries.size());
  edge_row_.resize(entries.size());
  for (std::int32_t e = 0; e < nnz; ++e) {
    auto [r, c] = entries[static_cast<std::size_t>(e)];
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw std::invalid_argument("sparse: entry out of range");
    row_idx_[static_cast<std::size_t>(e)] = c;
    edge_row_[static_cast<std::size_t>(e)] = r;
    ++row_ptr_[static_cast<std::size_t>(r) + 1];
    ++col_ptr_[static_cast<std::size_t>(c) + 1];
  }
  for (int r = 0; r < rows; ++r) row_ptr_[static_cast<std::size_t>(r) + 1] += row_ptr_[r];
  for (int c = 0; c < cols; ++c) col_ptr_[static_cast<std::size_t>(c) + 1] += col_ptr_[c];
  col_idx_.resize(entries.size());
  col_edge_.resize(entries.size());
  std::vector<std::int32_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::int32_t e = 0; e < nnz; ++e) {
    auto [r, c] = entries[static_cast<std::size_t>(e)];
    std::int32_t slot = fill[static_cast<std::size_t>(c)]++;
    col_idx_[static_cast<std::size_t>(slot)] = r;
    col_edge_[static_cast<std::size_t>(slot)] = e;
  }
}

bool SparseBinaryMatrix::syndrome_zero(std::span<const std::uint8_t> word) const {
  if (static_cast<int>(word.size()) != cols_)
    throw std::invalid_argument("sparse: word length does not match columns");
  for (int r = 0; r < rows_; ++r) {
    unsigned parity = 0;
    for (std::int32_t c : row(r)) parity ^= word[static_cast<std::size_t>(c)];
    if (parity & 1) return false;
  }
  return true;
}

}  // namespace isildpc
