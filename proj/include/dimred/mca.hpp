#pragma once

// Multiple Correspondence / Canonical Analysis of m column blocks on the
// same items: concatenate the blocks transported by the inverse square root
// of their Gram matrices and decompose. Indicator blocks built from
// categorical codes make this the analysis of several qualitative variables;
// quantitative blocks go through the same Gram-inverse metric.

#include <string>
#include <utility>
#include <vector>

#include "dimred/backend.hpp"
#include "dimred/pca.hpp"
#include "dimred/types.hpp"

namespace dimred {

/// 0/1 indicator of one categorical variable: one column per category, one 1
/// per row. Categories are ordered by first appearance.
struct IndicatorMatrix {
  Matrix z;                         // n x (number of categories)
  std::vector<std::string> labels;  // category labels, column order
};

inline IndicatorMatrix indicator_from_categories(const std::vector<std::string>& codes) {
  if (codes.empty()) {
    throw DimensionMismatchError("indicator_from_categories: no observations");
  }
  IndicatorMatrix out;
  std::vector<Index> column_of(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    Index j = 0;
    for (; j < static_cast<Index>(out.labels.size()); ++j) {
      if (out.labels[static_cast<std::size_t>(j)] == codes[i]) break;
    }
    if (j == static_cast<Index>(out.labels.size())) out.labels.push_back(codes[i]);
    column_of[i] = j;
  }
  out.z = Matrix::Zero(static_cast<Index>(codes.size()), static_cast<Index>(out.labels.size()));
  for (std::size_t i = 0; i < codes.size(); ++i) {
    out.z(static_cast<Index>(i), column_of[i]) = 1.0;
  }
  return out;
}

/// Blockwise Gram matrix [[A^T A, A^T B], [B^T A, B^T B]] of two indicator
/// matrices. The off-diagonal block is the contingency table of the two
/// variables; the diagonal blocks are the category frequencies.
inline Matrix burt_table(const IndicatorMatrix& a, const IndicatorMatrix& b) {
  if (a.z.rows() != b.z.rows()) {
    throw DimensionMismatchError("burt_table: indicator matrices have different row counts");
  }
  const Index p = a.z.cols();
  const Index q = b.z.cols();
  Matrix burt(p + q, p + q);
  burt.topLeftCorner(p, p) = a.z.transpose() * a.z;
  burt.topRightCorner(p, q) = a.z.transpose() * b.z;
  burt.bottomLeftCorner(q, p) = burt.topRightCorner(p, q).transpose();
  burt.bottomRightCorner(q, q) = b.z.transpose() * b.z;
  return burt;
}

struct BlockSlice {
  Index begin = 0;
  Index size = 0;
};

struct McaResult {
  PcaResult pca;                        // decomposition of the transported concatenation
  std::vector<BlockSlice> block_slices; // column ranges of the blocks, in order
};

/// MCA of m blocks sharing their rows: decompose
/// R = [A_1 G_1^{-1/2} | ... | A_m G_m^{-1/2}] with G_l = A_l^T A_l.
/// Every diagonal block of R^T R is then an identity. A block with singular
/// Gram matrix (an empty category, collinear columns) raises SingularBlock.
inline McaResult mca(const std::vector<Matrix>& blocks, const PcaMethod& method = {}) {
  if (blocks.empty()) {
    throw DimensionMismatchError("mca: no blocks");
  }
  const Index n = blocks.front().rows();
  Index total_cols = 0;
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    if (blocks[l].rows() != n) {
      throw DimensionMismatchError("mca: block " + std::to_string(l) + " has " +
                                   std::to_string(blocks[l].rows()) + " rows, expected " +
                                   std::to_string(n));
    }
    total_cols += blocks[l].cols();
  }
  if (total_cols > n) {
    throw DimensionMismatchError("mca: total column count " + std::to_string(total_cols) +
                                 " exceeds the number of items " + std::to_string(n));
  }

  McaResult out;
  Matrix r(n, total_cols);
  Index at = 0;
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    detail::require_finite(blocks[l], "mca");
    SpdFactor gram = [&] {
      try {
        return spd_factor(Matrix(blocks[l].transpose() * blocks[l]));
      } catch (const NotSpdError&) {
        throw SingularBlockError(std::to_string(l),
                                 "mca: block " + std::to_string(l) +
                                     " has a singular Gram matrix (empty category or "
                                     "collinear columns)");
      }
    }();
    r.middleCols(at, blocks[l].cols()) = gram.apply_inv_sqrt_right(blocks[l]);
    out.block_slices.push_back({at, blocks[l].cols()});
    at += blocks[l].cols();
  }
  out.pca = pca_core(r, method);
  return out;
}

}  // namespace dimred
