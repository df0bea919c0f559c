#pragma once

#include <cstddef>
#include <vector>

#include "tjlc/dense_tensor.hpp"

namespace tjlc {

/// A mode pair (l1, l2) with 1-based modes and l1 <= l2.
struct ModePair {
    std::size_t l1;
    std::size_t l2;
    bool operator==(const ModePair&) const = default;
};

/// All mode pairs of an order-N tensor in lexicographic order:
/// (1,1), (1,2), ..., (1,N), (2,2), ..., (N,N).
std::vector<ModePair> mode_pairs(std::size_t order);

double frobenius_norm(const DenseTensor& x);

/// Sum of squared elements (avoids the sqrt/square round trip in ratios).
double squared_norm(const DenseTensor& x);

/// Mode-n unfolding to an I_n x (prod of remaining extents) matrix.
/// Tensor element (i_1..i_N) lands at row i_n, column
/// 1 + sum_{k != n} (i_k - 1) J_k with J_k = prod_{m < k, m != n} I_m
/// (1-based form; storage is 0-based).
DenseTensor unfold_mode_n(const DenseTensor& x, std::size_t n);

/// Inverse of unfold_mode_n; bit-exact round trip.
DenseTensor fold_mode_n(const DenseTensor& m, const std::vector<std::size_t>& dims,
                        std::size_t n);

/// Mode-(l1,l2) unfolding. For l1 == l2 this is unfold_mode_n (an order-2
/// result); for l1 < l2 the result is order-3 with extents
/// (I_l1, I_l2, prod of the rest), the third index enumerating the
/// remaining modes first-fastest.
DenseTensor unfold_pair(const DenseTensor& x, std::size_t l1, std::size_t l2);

/// Inverse of unfold_pair; bit-exact round trip.
DenseTensor fold_pair(const DenseTensor& y, const std::vector<std::size_t>& dims,
                      std::size_t l1, std::size_t l2);

/// Keeps entries on the observation set, zeros the rest.
DenseTensor project(const DenseTensor& x, const IndexSet& omega);

/// Percentage of unobserved entries, in [0, 100].
double missing_rate(const IndexSet& omega);

}  // namespace tjlc
