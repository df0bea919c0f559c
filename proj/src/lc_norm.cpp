#include "tjlc/lc_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "t_internal.hpp"

namespace tjlc {

using detail::as_order3;
using detail::mirror_slice;
using detail::self_mirrored;
using detail::unique_slice_count;

namespace {

void check_params(const LCParams& p) {
    if (!(p.nu > 0.0) || !(p.vartheta > 0.0) || !(p.c > 0.0)) {
        throw std::invalid_argument("LC parameters nu, vartheta, c must be positive");
    }
}

}  // namespace

double g_cap(double sigma, const LCParams& p) {
    check_params(p);
    if (sigma < 0.0) {
        throw std::invalid_argument("g_cap expects a nonnegative argument");
    }
    const double cap = p.nu * p.vartheta;
    if (sigma <= cap) {
        return p.nu * sigma - sigma * sigma / (2.0 * p.vartheta);
    }
    return p.nu * p.nu * p.vartheta / 2.0;
}

namespace {

// Weight of one singular value: 1/(c + exp(-w)).
double weight_of(double sigma, double slice_max, double r, const LCParams& p) {
    double w;
    if (p.scheme == WeightScheme::Normalized) {
        w = slice_max > 0.0 ? r * sigma / slice_max : 0.0;
    } else {
        w = sigma;
    }
    return 1.0 / (p.c + std::exp(-w));
}

Eigen::VectorXd slice_weights(const Eigen::VectorXd& sigma, const LCParams& p) {
    const double r = static_cast<double>(sigma.size());
    const double m = sigma.size() > 0 ? sigma(0) : 0.0;  // descending order
    Eigen::VectorXd out(sigma.size());
    for (Eigen::Index j = 0; j < sigma.size(); ++j) {
        out(j) = weight_of(sigma(j), m, r, p);
    }
    return out;
}

}  // namespace

WeightMatrix weights(const ComplexSliceStack& wbar, const LCParams& p) {
    const std::size_t r = std::min(wbar.i1, wbar.i2);
    WeightMatrix out;
    out.values.resize(static_cast<Eigen::Index>(r),
                      static_cast<Eigen::Index>(wbar.i3()));
    for (std::size_t i = 0; i < wbar.i3(); ++i) {
        const Eigen::VectorXd sigma =
            detail::slice_singular_values(wbar.slices[i], false);
        out.values.col(static_cast<Eigen::Index>(i)) = slice_weights(sigma, p);
    }
    return out;
}

double lc_norm(const DenseTensor& x, const LCParams& p, const WeightMatrix& w) {
    const DenseTensor x3 = as_order3(x);
    const std::size_t r = std::min(x3.dim(0), x3.dim(1));
    const std::size_t i3 = x3.dim(2);
    if (w.rank_count() != r || w.slice_count() != i3) {
        throw std::invalid_argument("weight matrix extents do not match the tensor");
    }
    const ComplexSliceStack xbar = dft_mode3(x3);
    double sum = 0.0;
    for (std::size_t i = 0; i < i3; ++i) {
        const Eigen::VectorXd sigma =
            detail::slice_singular_values(xbar.slices[i], self_mirrored(i, i3));
        for (Eigen::Index j = 0; j < sigma.size(); ++j) {
            sum += w.values(j, static_cast<Eigen::Index>(i)) *
                   std::log(g_cap(sigma(j), p) + 1.0);
        }
    }
    return sum / static_cast<double>(i3);
}

namespace {

double cubic_eval(double b, double c, double d, double l) {
    return ((-l + b) * l + c) * l + d;
}

// One or two guarded Newton steps; the radical and trigonometric forms
// lose a few digits to cancellation.
double polish_root(double b, double c, double d, double l) {
    for (int k = 0; k < 2; ++k) {
        const double f = cubic_eval(b, c, d, l);
        const double df = -3.0 * l * l + 2.0 * b * l + c;
        if (!std::isfinite(f) || !std::isfinite(df)) break;
        if (std::abs(df) <= 1e-12 * (3.0 * l * l + std::abs(2.0 * b * l) + std::abs(c)))
            break;
        const double next = l - f / df;
        if (!std::isfinite(next)) break;
        l = next;
    }
    return l;
}

}  // namespace

std::vector<double> cubic_real_roots(double b, double c, double d) {
    constexpr double a = -1.0;
    const double A = b * b - 3.0 * a * c;
    const double B = b * c - 9.0 * a * d;
    const double C = c * c - 3.0 * b * d;

    const double a_scale = b * b + std::abs(3.0 * a * c);
    const double b_scale = std::abs(b * c) + std::abs(9.0 * a * d);
    const double tiny = std::numeric_limits<double>::min();

    std::vector<double> roots;
    if (std::abs(A) <= 1e-12 * a_scale + tiny && std::abs(B) <= 1e-12 * b_scale + tiny) {
        // Triple root -c/b; when b vanishes the whole polynomial degenerates
        // towards -l^3 and the root is b/3 -> 0.
        roots.push_back(std::abs(b) > tiny ? -c / b : b / 3.0);
        return roots;
    }

    const double delta = B * B - 4.0 * A * C;
    if (delta > 0.0) {
        const double sq = std::sqrt(delta);
        const double k1 = A * b + 1.5 * a * (-B + sq);
        const double k2 = A * b + 1.5 * a * (-B - sq);
        roots.push_back(polish_root(b, c, d, (-b - (std::cbrt(k1) + std::cbrt(k2))) / (3.0 * a)));
    } else if (delta < 0.0) {
        const double sq_a = std::sqrt(A);
        double t = (2.0 * A * b - 3.0 * a * B) / (2.0 * A * sq_a);
        t = std::clamp(t, -1.0, 1.0);
        const double theta = std::acos(t) / 3.0;
        const double co = std::cos(theta);
        const double si = std::sqrt(3.0) * std::sin(theta);
        roots.push_back(polish_root(b, c, d, (-b - 2.0 * sq_a * co) / (3.0 * a)));
        roots.push_back(polish_root(b, c, d, (-b + sq_a * (co - si)) / (3.0 * a)));
        roots.push_back(polish_root(b, c, d, (-b + sq_a * (co + si)) / (3.0 * a)));
    } else {
        roots.push_back(polish_root(b, c, d, B / A - b / a));
        roots.push_back(polish_root(b, c, d, -B / (2.0 * A)));
    }
    return roots;
}

namespace {

double prox_objective(double l, double y, double rho, double omega, const LCParams& p) {
    const double quad = 0.5 * rho * (l - y) * (l - y);
    return quad + omega * std::log(g_cap(l, p) + 1.0);
}

}  // namespace

double scalar_prox(double y, double rho, double omega, const LCParams& p) {
    check_params(p);
    if (!(rho > 0.0)) {
        throw std::invalid_argument("scalar_prox requires rho > 0");
    }
    if (y < 0.0 || omega < 0.0) {
        throw std::invalid_argument("scalar_prox expects nonnegative y and omega");
    }
    const double cap = p.nu * p.vartheta;

    const double b = 2.0 * cap + y;
    const double c = -2.0 * omega / rho + 2.0 * p.vartheta - 2.0 * cap * y;
    const double d = 2.0 * omega * cap / rho - 2.0 * p.vartheta * y;

    std::vector<double> candidates;
    for (double root : cubic_real_roots(b, c, d)) {
        candidates.push_back(std::clamp(root, 0.0, cap));
    }
    candidates.push_back(0.0);
    candidates.push_back(cap);
    if (y > cap) candidates.push_back(y);
    std::sort(candidates.begin(), candidates.end());

    double best_l = candidates.front();
    double best_h = std::numeric_limits<double>::infinity();
    for (double l : candidates) {
        const double h = prox_objective(l, y, rho, omega, p);
        if (h < best_h) {
            best_h = h;
            best_l = l;
        }
    }
    return best_l;
}

DenseTensor tensor_prox(const DenseTensor& y, double rho, const LCParams& p) {
    const bool was_matrix = y.order() == 2;
    const DenseTensor y3 = as_order3(y);
    const std::size_t i1 = y3.dim(0), i2 = y3.dim(1), i3 = y3.dim(2);
    const ComplexSliceStack ybar = dft_mode3(y3);

    ComplexSliceStack lbar;
    lbar.i1 = i1;
    lbar.i2 = i2;
    lbar.slices.resize(i3);

    for (std::size_t i = 0; i < unique_slice_count(i3); ++i) {
        Eigen::MatrixXcd u, v;
        Eigen::VectorXd sigma;
        if (self_mirrored(i, i3)) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(
                ybar.slices[i].real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
            u = svd.matrixU().cast<std::complex<double>>();
            v = svd.matrixV().cast<std::complex<double>>();
            sigma = svd.singularValues();
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
                ybar.slices[i], Eigen::ComputeThinU | Eigen::ComputeThinV);
            u = svd.matrixU();
            v = svd.matrixV();
            sigma = svd.singularValues();
        }
        const Eigen::VectorXd w = slice_weights(sigma, p);
        Eigen::VectorXd shrunk(sigma.size());
        for (Eigen::Index j = 0; j < sigma.size(); ++j) {
            shrunk(j) = scalar_prox(sigma(j), rho, w(j), p);
        }
        lbar.slices[i] = u * shrunk.asDiagonal() * v.adjoint();
        const std::size_t m = mirror_slice(i, i3);
        if (m != i) lbar.slices[m] = lbar.slices[i].conjugate();
    }

    DenseTensor out = idft_mode3(lbar);
    if (was_matrix) {
        return out.reshaped({i1, i2});
    }
    return out;
}

}  // namespace tjlc
