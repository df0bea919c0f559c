#include "tjlc/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tjlc {

namespace {

constexpr double kPsnrCapDb = 100.0;

void check_same_dims(const DenseTensor& a, const DenseTensor& b) {
    if (a.dims() != b.dims()) {
        throw std::invalid_argument("metric inputs have different extents");
    }
}

double mean_of(const double* v, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += v[i];
    return sum / static_cast<double>(n);
}

double mse_of(const double* a, const double* b, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum / static_cast<double>(n);
}

double psnr_from_mse(double mse, double peak) {
    if (mse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(peak * peak / mse);
}

double ssim_raw(const double* r, const double* c, std::size_t n, double peak) {
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    const double mu_r = mean_of(r, n);
    const double mu_c = mean_of(c, n);
    double var_r = 0.0, var_c = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dr = r[i] - mu_r;
        const double dc = c[i] - mu_c;
        var_r += dr * dr;
        var_c += dc * dc;
        cov += dr * dc;
    }
    var_r /= static_cast<double>(n);
    var_c /= static_cast<double>(n);
    cov /= static_cast<double>(n);
    return (2.0 * mu_c * mu_r + c1) * (2.0 * cov + c2) /
           ((mu_c * mu_c + mu_r * mu_r + c1) * (var_c + var_r + c2));
}

}  // namespace

double psnr_raw(const DenseTensor& reference, const DenseTensor& candidate, double peak) {
    check_same_dims(reference, candidate);
    if (!(peak > 0.0)) {
        throw std::invalid_argument("peak must be positive");
    }
    return psnr_from_mse(mse_of(reference.data(), candidate.data(), reference.size()),
                         peak);
}

double psnr(const DenseTensor& reference, const DenseTensor& candidate, double peak) {
    const double raw = psnr_raw(reference, candidate, peak);
    return std::min(raw, kPsnrCapDb);
}

double ssim(const DenseTensor& reference, const DenseTensor& candidate, double peak) {
    check_same_dims(reference, candidate);
    if (!(peak > 0.0)) {
        throw std::invalid_argument("peak must be positive");
    }
    return ssim_raw(reference.data(), candidate.data(), reference.size(), peak);
}

double ergas(const DenseTensor& reference, const DenseTensor& candidate,
             ErgasDenominator den) {
    check_same_dims(reference, candidate);
    if (reference.order() != 3) {
        throw std::invalid_argument("ergas expects order-3 tensors");
    }
    const std::size_t i3 = reference.dim(2);
    const std::size_t slice_n = reference.dim(0) * reference.dim(1);
    double sum = 0.0;
    for (std::size_t i = 0; i < i3; ++i) {
        const double* r = reference.data() + i * slice_n;
        const double* c = candidate.data() + i * slice_n;
        const double mean = mean_of(r, slice_n);
        if (mean == 0.0) {
            throw std::invalid_argument("ergas reference slice has zero mean");
        }
        const double mse = mse_of(r, c, slice_n);
        sum += den == ErgasDenominator::MeanSquared ? mse / (mean * mean) : mse / mean;
    }
    return 100.0 * std::sqrt(sum / static_cast<double>(i3));
}

MetricReport tensor_pqi(const DenseTensor& reference, const DenseTensor& candidate,
                        double peak, ErgasDenominator den) {
    check_same_dims(reference, candidate);
    if (reference.order() != 3) {
        throw std::invalid_argument("tensor_pqi expects order-3 tensors");
    }
    const std::size_t i3 = reference.dim(2);
    const std::size_t slice_n = reference.dim(0) * reference.dim(1);

    MetricReport report;
    report.psnr_per_slice.reserve(i3);
    report.ssim_per_slice.reserve(i3);
    double psnr_sum = 0.0, ssim_sum = 0.0;
    for (std::size_t i = 0; i < i3; ++i) {
        const double* r = reference.data() + i * slice_n;
        const double* c = candidate.data() + i * slice_n;
        const double p = std::min(psnr_from_mse(mse_of(r, c, slice_n), peak), kPsnrCapDb);
        const double s = ssim_raw(r, c, slice_n, peak);
        report.psnr_per_slice.push_back(p);
        report.ssim_per_slice.push_back(s);
        psnr_sum += p;
        ssim_sum += s;
    }
    report.psnr = psnr_sum / static_cast<double>(i3);
    report.ssim = ssim_sum / static_cast<double>(i3);
    report.ergas = ergas(reference, candidate, den);
    return report;
}

}  // namespace tjlc
