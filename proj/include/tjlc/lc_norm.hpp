#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "tjlc/dense_tensor.hpp"
#include "tjlc/t_algebra.hpp"

namespace tjlc {

/// Weight scheme for the adaptive singular-value weights.
/// Normalized: w = R * sigma_j / max_j sigma_j per slice.
/// Raw:        w = sigma_j.
enum class WeightScheme { Normalized, Raw };

struct LCParams {
    double nu = 1.0;
    double vartheta = 500.0;
    double c = 0.8;
    WeightScheme scheme = WeightScheme::Normalized;
};

/// Per-slice, per-singular-value weights: R rows (j = descending singular
/// values), I3 columns (DFT slices). Entries lie in (0, 1/c].
struct WeightMatrix {
    Eigen::MatrixXd values;  // R x I3

    std::size_t rank_count() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t slice_count() const { return static_cast<std::size_t>(values.cols()); }
};

/// Capped concave quadratic: nu*s - s^2/(2*vartheta) for s <= nu*vartheta,
/// constant nu^2*vartheta/2 beyond. Continuous at the boundary.
double g_cap(double sigma, const LCParams& p);

/// Weights omega_{j,i} = 1/(c + exp(-w)) from the singular values of each
/// slice of wbar under the configured scheme. A zero slice gets uniform
/// weights 1/(c+1).
WeightMatrix weights(const ComplexSliceStack& wbar, const LCParams& p);

/// (1/I3) * sum_i sum_j omega_{j,i} * log(g(sigma_j(slice i)) + 1).
/// Accepts an order-2 tensor as I1 x I2 x 1.
double lc_norm(const DenseTensor& x, const LCParams& p, const WeightMatrix& w);

/// Real roots of -l^3 + b*l^2 + c*l + d = 0 via the discriminant case
/// split on A = b^2 - 3ac, B = bc - 9ad, C = c^2 - 3bd, Delta = B^2 - 4AC
/// (a = -1 fixed). Returns 1..3 roots.
std::vector<double> cubic_real_roots(double b, double c, double d);

/// Minimizer over l >= 0 of (rho/2)(l - y)^2 + omega * log(g(l) + 1).
/// Candidates are the stationary points of the quadratic branch (cubic
/// roots clamped to [0, nu*vartheta]), the branch endpoints, and y itself
/// when y lies on the flat branch; ties pick the smallest candidate.
double scalar_prox(double y, double rho, double omega, const LCParams& p);

/// Proximal map of the weighted log-composite norm under rho: shrinks every
/// DFT-slice singular value of y by scalar_prox, with weights taken from
/// y's own singular values per the configured scheme. Accepts order 2 or 3;
/// the result has the input's order.
DenseTensor tensor_prox(const DenseTensor& y, double rho, const LCParams& p);

}  // namespace tjlc
