#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mel/gf.hpp"

namespace mel::linalg {

using Row = std::vector<gf::Code>;

/// Row-echelon form built one row at a time; every stored row has a leading 1 at its
/// pivot and zeros at the pivots of rows inserted before it.
class Echelon {
 public:
  Echelon(gf::FieldRef field, std::size_t ncols);

  /// Reduces `row` against the stored rows; keeps it if nonzero. Returns true on rank increase.
  bool add_row(Row row);

  std::size_t rank() const { return rows_.size(); }
  std::size_t ncols() const { return ncols_; }
  bool full_rank() const { return rows_.size() == ncols_; }

  /// Nonzero rows in reduced row-echelon form, ordered by pivot column.
  std::vector<Row> rref() const;

  /// Basis of {v : M v = 0} in reduced row-echelon form (canonical for the kernel).
  std::vector<Row> kernel() const;

 private:
  gf::FieldRef field_;
  std::size_t ncols_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;
};

/// Canonical RREF of the row space spanned by `rows`.
std::vector<Row> rref(const gf::FieldRef& field, std::span<const Row> rows, std::size_t ncols);

std::size_t rank(const gf::FieldRef& field, std::span<const Row> rows, std::size_t ncols);

}  // namespace mel::linalg
