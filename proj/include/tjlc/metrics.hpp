#pragma once

#include <vector>

#include "tjlc/dense_tensor.hpp"

namespace tjlc {

enum class ErgasDenominator { MeanSquared, Mean };

struct MetricReport {
    double psnr = 0.0;
    double ssim = 0.0;
    double ergas = 0.0;
    std::vector<double> psnr_per_slice;
    std::vector<double> ssim_per_slice;
};

/// 10*log10(peak^2 * n / ||ref - cand||_F^2), capped at 100 dB for
/// identical inputs. psnr_raw returns the uncapped value (+infinity for a
/// zero error).
double psnr(const DenseTensor& reference, const DenseTensor& candidate, double peak);
double psnr_raw(const DenseTensor& reference, const DenseTensor& candidate, double peak);

/// Global-statistics structural similarity with C1 = (0.01*peak)^2,
/// C2 = (0.03*peak)^2. Population (1/n) moments.
double ssim(const DenseTensor& reference, const DenseTensor& candidate, double peak);

/// 100 * sqrt((1/I3) * sum_i mse_i / mean_i^2) over frontal slices.
/// The Mean variant divides by the plain slice mean instead of its square.
/// A reference slice with exactly zero mean is an error.
double ergas(const DenseTensor& reference, const DenseTensor& candidate,
             ErgasDenominator den = ErgasDenominator::MeanSquared);

/// Slice-averaged PSNR/SSIM plus one ERGAS over an order-3 tensor;
/// per-slice values retained.
MetricReport tensor_pqi(const DenseTensor& reference, const DenseTensor& candidate,
                        double peak, ErgasDenominator den = ErgasDenominator::MeanSquared);

}  // namespace tjlc
