#pragma once

// Shared internals for the DFT-domain tensor algebra. Not installed.

#include <Eigen/Dense>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "tjlc/dense_tensor.hpp"
#include "tjlc/t_algebra.hpp"

namespace tjlc::detail {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_mutex();

inline Eigen::Map<const Eigen::MatrixXd> slice_map(const DenseTensor& x, std::size_t i) {
    const std::size_t i1 = x.dim(0), i2 = x.dim(1);
    return {x.data() + i * i1 * i2, static_cast<Eigen::Index>(i1),
            static_cast<Eigen::Index>(i2)};
}

inline Eigen::Map<Eigen::MatrixXd> slice_map(DenseTensor& x, std::size_t i) {
    const std::size_t i1 = x.dim(0), i2 = x.dim(1);
    return {x.data() + i * i1 * i2, static_cast<Eigen::Index>(i1),
            static_cast<Eigen::Index>(i2)};
}

inline DenseTensor as_order3(const DenseTensor& x) {
    if (x.order() == 3) return x;
    if (x.order() == 2) return x.reshaped({x.dim(0), x.dim(1), 1});
    throw std::invalid_argument("expected an order-2 or order-3 tensor");
}

// Index of the conjugate-mirror slice; i is its own mirror at 0 and, for
// even I3, at the Nyquist slice.
inline std::size_t mirror_slice(std::size_t i, std::size_t i3) {
    return (i3 - i) % i3;
}

// Slices 0..unique_slice_count-1 determine a conjugate-symmetric stack.
inline std::size_t unique_slice_count(std::size_t i3) { return i3 / 2 + 1; }

inline bool self_mirrored(std::size_t i, std::size_t i3) {
    return mirror_slice(i, i3) == i;
}

// Descending singular values of one DFT slice. Self-mirrored slices of a
// symmetric stack are real; the real path keeps their factors exactly
// real so mirrored stacks invert to real tensors.
Eigen::VectorXd slice_singular_values(const Eigen::MatrixXcd& slice, bool real_slice);

// Per-slice singular values for slices 0..I3/2 of x's DFT stack, plus the
// stack itself. Columns are slices, rows are descending values.
struct SliceSpectrum {
    ComplexSliceStack stack;
    Eigen::MatrixXd sigma;  // min(I1,I2) x unique_slice_count
};
SliceSpectrum slice_spectrum(const DenseTensor& x3);

double default_rank_tol(std::size_t i1, std::size_t i2, double sigma_max);

}  // namespace tjlc::detail
