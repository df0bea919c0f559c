#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "tjlc/dense_tensor.hpp"

namespace tjlc {

/// DFT-domain view of a third-order tensor: I3 complex frontal slices of
/// size I1 x I2. Stacks produced from a real tensor satisfy conjugate
/// symmetry: slice(i) == conj(slice(I3 - i)) for i = 1..I3-1 (0-based).
struct ComplexSliceStack {
    std::size_t i1 = 0;
    std::size_t i2 = 0;
    std::vector<Eigen::MatrixXcd> slices;

    std::size_t i3() const { return slices.size(); }
    double frobenius_norm() const;
};

/// t-SVD factors: x == u * s * v^H under the t-product, with u, v
/// orthogonal and s f-diagonal (nonnegative, nonincreasing diagonals in
/// every DFT slice).
struct TSVDFactors {
    DenseTensor u;  // I1 x I1 x I3
    DenseTensor s;  // I1 x I2 x I3, f-diagonal
    DenseTensor v;  // I2 x I2 x I3
};

/// Unnormalized DFT along every mode-3 tube.
ComplexSliceStack dft_mode3(const DenseTensor& x);

/// Inverse of dft_mode3 (1/I3 scaling). Throws if the residual imaginary
/// magnitude exceeds 1e-8 times the stack norm, which signals a
/// conjugate-symmetry violation.
DenseTensor idft_mode3(const ComplexSliceStack& xbar);

/// Block-circulant matrix of a third-order tensor. Reference path for
/// testing the DFT-domain operations; not used by the solver.
DenseTensor bcirc(const DenseTensor& x);

/// Frontal slices stacked vertically into an (I1*I3) x I2 matrix, and its
/// inverse. Reference path, as with bcirc.
DenseTensor bvec(const DenseTensor& x);
DenseTensor bvfold(const DenseTensor& m, std::size_t i3);

/// Block-diagonal matrix of the frontal slices. Reference path.
DenseTensor bdiag(const DenseTensor& x);

/// t-product of (I1 x K x I3) and (K x J x I3), computed slicewise in the
/// DFT domain.
DenseTensor t_product(const DenseTensor& a, const DenseTensor& b);

/// Transpose the first frontal slice; transpose and order-reverse slices
/// 2..I3.
DenseTensor conj_transpose(const DenseTensor& a);

/// First frontal slice is the n x n identity, all other slices zero.
DenseTensor identity_tensor(std::size_t n, std::size_t i3);

/// Full t-SVD. Accepts an order-2 tensor as I1 x I2 x 1.
TSVDFactors t_svd(const DenseTensor& x);

/// Number of nonzero singular tubes: count of j with
/// max_i sigma_j(slice i of the DFT) > tol.
std::size_t tubal_rank(const DenseTensor& x, double tol);

/// Default tolerance max(I1,I2) * machine epsilon * largest singular value
/// across all DFT slices.
std::size_t tubal_rank(const DenseTensor& x);

/// Tubal ranks of all mode-pair unfoldings in lexicographic pair order.
/// Pairs with l1 == l2 reduce to the matrix-rank (I3 = 1) case.
/// tol < 0 selects the default tolerance per unfolding.
std::vector<std::size_t> joint_rank(const DenseTensor& x, double tol = -1.0);

}  // namespace tjlc
