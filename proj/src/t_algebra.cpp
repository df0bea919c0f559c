#include "tjlc/t_algebra.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <stdexcept>

#include "t_internal.hpp"
#include "tjlc/tensor_ops.hpp"

namespace tjlc {

namespace detail {

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

namespace {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (!ptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(ptr); }
    fftw_complex* ptr;
};

struct PlanGuard {
    explicit PlanGuard(fftw_plan p) : plan(p) {}
    ~PlanGuard() {
        std::lock_guard lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    PlanGuard(const PlanGuard&) = delete;
    PlanGuard& operator=(const PlanGuard&) = delete;
    fftw_plan plan;
};

// In-place c2c transform of every mode-3 tube: tubes are strided by
// I1*I2 with consecutive base offsets, which maps directly onto the FFTW
// advanced interface.
void transform_tubes(std::complex<double>* buf, std::size_t i1i2, std::size_t i3,
                     int sign) {
    const int n = static_cast<int>(i3);
    const int howmany = static_cast<int>(i1i2);
    fftw_complex* raw = reinterpret_cast<fftw_complex*>(buf);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_mutex());
        plan = fftw_plan_many_dft(1, &n, howmany, raw, nullptr, howmany, 1, raw,
                                  nullptr, howmany, 1, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("FFTW plan creation failed");
    PlanGuard guard(plan);
    fftw_execute(plan);
}

}  // namespace

Eigen::VectorXd slice_singular_values(const Eigen::MatrixXcd& slice, bool real_slice) {
    if (real_slice) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(slice.real());
        return svd.singularValues();
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(slice);
    return svd.singularValues();
}

SliceSpectrum slice_spectrum(const DenseTensor& x3) {
    SliceSpectrum out;
    out.stack = dft_mode3(x3);
    const std::size_t i3 = out.stack.i3();
    const std::size_t unique = unique_slice_count(i3);
    const std::size_t r = std::min(out.stack.i1, out.stack.i2);
    out.sigma.resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(unique));
    for (std::size_t i = 0; i < unique; ++i) {
        out.sigma.col(static_cast<Eigen::Index>(i)) =
            slice_singular_values(out.stack.slices[i], self_mirrored(i, i3));
    }
    return out;
}

double default_rank_tol(std::size_t i1, std::size_t i2, double sigma_max) {
    return static_cast<double>(std::max(i1, i2)) *
           std::numeric_limits<double>::epsilon() * sigma_max;
}

}  // namespace detail

using detail::as_order3;
using detail::mirror_slice;
using detail::self_mirrored;
using detail::slice_map;
using detail::unique_slice_count;

double ComplexSliceStack::frobenius_norm() const {
    double sum = 0.0;
    for (const auto& s : slices) sum += s.squaredNorm();
    return std::sqrt(sum);
}

ComplexSliceStack dft_mode3(const DenseTensor& x) {
    if (x.order() != 3) {
        throw std::invalid_argument("dft_mode3 expects an order-3 tensor");
    }
    const std::size_t i1 = x.dim(0), i2 = x.dim(1), i3 = x.dim(2);
    ComplexSliceStack out;
    out.i1 = i1;
    out.i2 = i2;
    out.slices.reserve(i3);

    if (i3 == 1) {
        out.slices.emplace_back(slice_map(x, 0).cast<std::complex<double>>());
        return out;
    }

    detail::FftwBuffer buf(x.size());
    std::complex<double>* b = buf.data();
    for (std::size_t p = 0; p < x.size(); ++p) b[p] = x[p];
    detail::transform_tubes(b, i1 * i2, i3, FFTW_FORWARD);

    for (std::size_t i = 0; i < i3; ++i) {
        out.slices.emplace_back(
            Eigen::Map<const Eigen::MatrixXcd>(b + i * i1 * i2,
                                               static_cast<Eigen::Index>(i1),
                                               static_cast<Eigen::Index>(i2)));
    }
    return out;
}

DenseTensor idft_mode3(const ComplexSliceStack& xbar) {
    const std::size_t i1 = xbar.i1, i2 = xbar.i2, i3 = xbar.i3();
    if (i3 == 0) {
        throw std::invalid_argument("empty slice stack");
    }
    for (const auto& s : xbar.slices) {
        if (s.rows() != static_cast<Eigen::Index>(i1) ||
            s.cols() != static_cast<Eigen::Index>(i2)) {
            throw std::invalid_argument("inconsistent slice extents");
        }
    }

    const double stack_norm = xbar.frobenius_norm();
    const double imag_budget = 1e-8 * stack_norm;

    detail::FftwBuffer buf(i1 * i2 * i3);
    std::complex<double>* b = buf.data();
    for (std::size_t i = 0; i < i3; ++i) {
        const auto& s = xbar.slices[i];
        std::complex<double>* dst = b + i * i1 * i2;
        for (std::size_t q = 0; q < i1 * i2; ++q) dst[q] = s.data()[q];
    }
    if (i3 > 1) {
        detail::transform_tubes(b, i1 * i2, i3, FFTW_BACKWARD);
    }

    const double scale = 1.0 / static_cast<double>(i3);
    DenseTensor out({i1, i2, i3});
    double imag_sq = 0.0;
    for (std::size_t p = 0; p < out.size(); ++p) {
        const std::complex<double> v = b[p] * scale;
        out[p] = v.real();
        imag_sq += v.imag() * v.imag();
    }
    if (std::sqrt(imag_sq) > imag_budget) {
        throw std::invalid_argument(
            "inverse DFT has a non-real result: conjugate symmetry violated");
    }
    return out;
}

DenseTensor bcirc(const DenseTensor& x) {
    if (x.order() != 3) {
        throw std::invalid_argument("bcirc expects an order-3 tensor");
    }
    const std::size_t i1 = x.dim(0), i2 = x.dim(1), i3 = x.dim(2);
    DenseTensor out({i1 * i3, i2 * i3});
    const std::size_t out_rows = i1 * i3;
    for (std::size_t bc = 0; bc < i3; ++bc) {
        for (std::size_t br = 0; br < i3; ++br) {
            const std::size_t s = (br + i3 - bc) % i3;
            const double* src = x.data() + s * i1 * i2;
            for (std::size_t j = 0; j < i2; ++j) {
                for (std::size_t i = 0; i < i1; ++i) {
                    out[(br * i1 + i) + (bc * i2 + j) * out_rows] = src[i + j * i1];
                }
            }
        }
    }
    return out;
}

DenseTensor bvec(const DenseTensor& x) {
    if (x.order() != 3) {
        throw std::invalid_argument("bvec expects an order-3 tensor");
    }
    const std::size_t i1 = x.dim(0), i2 = x.dim(1), i3 = x.dim(2);
    DenseTensor out({i1 * i3, i2});
    const std::size_t out_rows = i1 * i3;
    for (std::size_t s = 0; s < i3; ++s) {
        const double* src = x.data() + s * i1 * i2;
        for (std::size_t j = 0; j < i2; ++j) {
            for (std::size_t i = 0; i < i1; ++i) {
                out[(s * i1 + i) + j * out_rows] = src[i + j * i1];
            }
        }
    }
    return out;
}

DenseTensor bvfold(const DenseTensor& m, std::size_t i3) {
    if (m.order() != 2 || i3 == 0 || m.dim(0) % i3 != 0) {
        throw std::invalid_argument("bvfold extents inconsistent");
    }
    const std::size_t i1 = m.dim(0) / i3;
    const std::size_t i2 = m.dim(1);
    DenseTensor out({i1, i2, i3});
    const std::size_t in_rows = m.dim(0);
    for (std::size_t s = 0; s < i3; ++s) {
        double* dst = out.data() + s * i1 * i2;
        for (std::size_t j = 0; j < i2; ++j) {
            for (std::size_t i = 0; i < i1; ++i) {
                dst[i + j * i1] = m[(s * i1 + i) + j * in_rows];
            }
        }
    }
    return out;
}

DenseTensor bdiag(const DenseTensor& x) {
    if (x.order() != 3) {
        throw std::invalid_argument("bdiag expects an order-3 tensor");
    }
    const std::size_t i1 = x.dim(0), i2 = x.dim(1), i3 = x.dim(2);
    DenseTensor out({i1 * i3, i2 * i3});
    const std::size_t out_rows = i1 * i3;
    for (std::size_t s = 0; s < i3; ++s) {
        const double* src = x.data() + s * i1 * i2;
        for (std::size_t j = 0; j < i2; ++j) {
            for (std::size_t i = 0; i < i1; ++i) {
                out[(s * i1 + i) + (s * i2 + j) * out_rows] = src[i + j * i1];
            }
        }
    }
    return out;
}

DenseTensor t_product(const DenseTensor& a, const DenseTensor& b) {
    if (a.order() != 3 || b.order() != 3) {
        throw std::invalid_argument("t_product expects order-3 tensors");
    }
    if (a.dim(1) != b.dim(0) || a.dim(2) != b.dim(2)) {
        throw std::invalid_argument("t_product extents mismatch");
    }
    const std::size_t i3 = a.dim(2);
    const ComplexSliceStack abar = dft_mode3(a);
    const ComplexSliceStack bbar = dft_mode3(b);

    ComplexSliceStack cbar;
    cbar.i1 = a.dim(0);
    cbar.i2 = b.dim(1);
    cbar.slices.resize(i3);
    for (std::size_t i = 0; i < unique_slice_count(i3); ++i) {
        cbar.slices[i] = abar.slices[i] * bbar.slices[i];
        const std::size_t m = mirror_slice(i, i3);
        if (m != i) cbar.slices[m] = cbar.slices[i].conjugate();
    }
    return idft_mode3(cbar);
}

DenseTensor conj_transpose(const DenseTensor& a) {
    if (a.order() != 3) {
        throw std::invalid_argument("conj_transpose expects an order-3 tensor");
    }
    const std::size_t i1 = a.dim(0), i2 = a.dim(1), i3 = a.dim(2);
    DenseTensor out({i2, i1, i3});
    for (std::size_t s = 0; s < i3; ++s) {
        const std::size_t src = (i3 - s) % i3;
        slice_map(out, s) = slice_map(a, src).transpose();
    }
    return out;
}

DenseTensor identity_tensor(std::size_t n, std::size_t i3) {
    if (n == 0 || i3 == 0) {
        throw std::invalid_argument("identity tensor extents must be positive");
    }
    DenseTensor out({n, n, i3});
    for (std::size_t i = 0; i < n; ++i) out[i + i * n] = 1.0;
    return out;
}

TSVDFactors t_svd(const DenseTensor& x) {
    const DenseTensor x3 = as_order3(x);
    const std::size_t i1 = x3.dim(0), i2 = x3.dim(1), i3 = x3.dim(2);
    const std::size_t r = std::min(i1, i2);
    const ComplexSliceStack xbar = dft_mode3(x3);

    ComplexSliceStack ubar, sbar, vbar;
    ubar.i1 = ubar.i2 = i1;
    vbar.i1 = vbar.i2 = i2;
    sbar.i1 = i1;
    sbar.i2 = i2;
    ubar.slices.resize(i3);
    sbar.slices.resize(i3);
    vbar.slices.resize(i3);

    for (std::size_t i = 0; i < unique_slice_count(i3); ++i) {
        Eigen::MatrixXcd u, v;
        Eigen::VectorXd sv;
        if (self_mirrored(i, i3)) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(
                xbar.slices[i].real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
            u = svd.matrixU().cast<std::complex<double>>();
            v = svd.matrixV().cast<std::complex<double>>();
            sv = svd.singularValues();
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
                xbar.slices[i], Eigen::ComputeFullU | Eigen::ComputeFullV);
            u = svd.matrixU();
            v = svd.matrixV();
            sv = svd.singularValues();
        }
        Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(i1),
                                                    static_cast<Eigen::Index>(i2));
        for (std::size_t j = 0; j < r; ++j) {
            s(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) =
                sv(static_cast<Eigen::Index>(j));
        }
        ubar.slices[i] = std::move(u);
        sbar.slices[i] = std::move(s);
        vbar.slices[i] = std::move(v);
        const std::size_t m = mirror_slice(i, i3);
        if (m != i) {
            ubar.slices[m] = ubar.slices[i].conjugate();
            sbar.slices[m] = sbar.slices[i].conjugate();
            vbar.slices[m] = vbar.slices[i].conjugate();
        }
    }

    TSVDFactors out;
    out.u = idft_mode3(ubar);
    out.s = idft_mode3(sbar);
    out.v = idft_mode3(vbar);
    return out;
}

std::size_t tubal_rank(const DenseTensor& x, double tol) {
    const DenseTensor x3 = as_order3(x);
    const detail::SliceSpectrum spec = detail::slice_spectrum(x3);
    const Eigen::VectorXd tube_max = spec.sigma.rowwise().maxCoeff();
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < tube_max.size(); ++j) {
        if (tube_max(j) > tol) ++count;
    }
    return count;
}

std::size_t tubal_rank(const DenseTensor& x) {
    const DenseTensor x3 = as_order3(x);
    const detail::SliceSpectrum spec = detail::slice_spectrum(x3);
    const double sigma_max = spec.sigma.size() > 0 ? spec.sigma.maxCoeff() : 0.0;
    const double tol = detail::default_rank_tol(x3.dim(0), x3.dim(1), sigma_max);
    const Eigen::VectorXd tube_max = spec.sigma.rowwise().maxCoeff();
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < tube_max.size(); ++j) {
        if (tube_max(j) > tol) ++count;
    }
    return count;
}

std::vector<std::size_t> joint_rank(const DenseTensor& x, double tol) {
    if (x.order() < 2) {
        throw std::invalid_argument("joint_rank expects order >= 2");
    }
    std::vector<std::size_t> ranks;
    for (const ModePair& p : mode_pairs(x.order())) {
        const DenseTensor u = unfold_pair(x, p.l1, p.l2);
        ranks.push_back(tol < 0.0 ? tubal_rank(u) : tubal_rank(u, tol));
    }
    return ranks;
}

}  // namespace tjlc
