#include "mel/linalg.hpp"

#include <algorithm>
#include <numeric>

#include "mel/error.hpp"

namespace mel::linalg {

Echelon::Echelon(gf::FieldRef field, std::size_t ncols) : field_(std::move(field)), ncols_(ncols) {}

bool Echelon::add_row(Row row) {
  if (row.size() != ncols_) throw DomainError("row length does not match the column count");
  const gf::Field& F = *field_;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const gf::Code factor = row[pivots_[r]];
    if (factor == 0) continue;
    const gf::Code minus = F.neg(factor);
    const Row& pr = rows_[r];
    for (std::size_t c = pivots_[r]; c < ncols_; ++c)
      if (pr[c] != 0) row[c] = F.add(row[c], F.mul(minus, pr[c]));
  }
  const auto lead = std::find_if(row.begin(), row.end(), [](gf::Code c) { return c != 0; });
  if (lead == row.end()) return false;
  const std::size_t pivot = static_cast<std::size_t>(lead - row.begin());
  const gf::Code inv = F.inv(*lead);
  for (std::size_t c = pivot; c < ncols_; ++c) row[c] = F.mul(row[c], inv);
  rows_.push_back(std::move(row));
  pivots_.push_back(pivot);
  return true;
}

std::vector<Row> Echelon::rref() const {
  const gf::Field& F = *field_;
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });
  std::vector<Row> out;
  std::vector<std::size_t> piv;
  out.reserve(order.size());
  for (auto i : order) {
    out.push_back(rows_[i]);
    piv.push_back(pivots_[i]);
  }
  // Clear every pivot column above and below; processing from the last pivot upward.
  for (std::size_t r = out.size(); r-- > 0;) {
    for (std::size_t o = 0; o < out.size(); ++o) {
      if (o == r) continue;
      const gf::Code factor = out[o][piv[r]];
      if (factor == 0) continue;
      const gf::Code minus = F.neg(factor);
      for (std::size_t c = piv[r]; c < ncols_; ++c)
        if (out[r][c] != 0) out[o][c] = F.add(out[o][c], F.mul(minus, out[r][c]));
    }
  }
  return out;
}

std::vector<Row> Echelon::kernel() const {
  const gf::Field& F = *field_;
  const auto reduced = rref();
  std::vector<long> pivot_row(ncols_, -1);
  for (std::size_t r = 0; r < reduced.size(); ++r) {
    const auto lead = std::find_if(reduced[r].begin(), reduced[r].end(), [](gf::Code c) { return c != 0; });
    pivot_row[static_cast<std::size_t>(lead - reduced[r].begin())] = static_cast<long>(r);
  }
  std::vector<Row> basis;
  for (std::size_t f = 0; f < ncols_; ++f) {
    if (pivot_row[f] >= 0) continue;
    Row v(ncols_, 0);
    v[f] = 1;
    for (std::size_t c = 0; c < ncols_; ++c)
      if (pivot_row[c] >= 0) v[c] = F.neg(reduced[static_cast<std::size_t>(pivot_row[c])][f]);
    basis.push_back(std::move(v));
  }
  return linalg::rref(field_, basis, ncols_);
}

std::vector<Row> rref(const gf::FieldRef& field, std::span<const Row> rows, std::size_t ncols) {
  Echelon e(field, ncols);
  for (const auto& r : rows) e.add_row(r);
  return e.rref();
}

std::size_t rank(const gf::FieldRef& field, std::span<const Row> rows, std::size_t ncols) {
  Echelon e(field, ncols);
  for (const auto& r : rows) e.add_row(r);
  return e.rank();
}

}  // namespace mel::linalg
