#pragma once

#include <vector>

#include "starprune/tensor.hpp"

namespace starprune {

/// Reconstruction-quality numbers for one comparison. PSNR is capped at the
/// 99.0 dB sentinel; exact_match marks a zero-MSE pair.
struct QualitySummary {
    double mse = 0.0;
    double psnr = 0.0;
    double ssim = 0.0;
    bool exact_match = false;
};

double mse(const Tensor& a, const Tensor& b);

/// 10 * log10(peak^2 / mse), capped at 99.0 dB (the exact-match sentinel).
double psnr(const Tensor& a, const Tensor& b, double peak);

/// Mean SSIM over uniform square windows (stride 1, fully inside the grid),
/// averaged across channels; constants C1 = (K1*peak)^2, C2 = (K2*peak)^2
/// with K1 = 0.01, K2 = 0.03. The window shrinks to fit grids smaller than
/// `window` per axis.
double ssim(const Tensor& a, const Tensor& b, double peak, int window = 8);

QualitySummary compare(const Tensor& a, const Tensor& b, double peak);

/// Mean/variance aggregation of per-seed quality numbers.
struct QualityAggregate {
    std::vector<double> mse_values, psnr_values, ssim_values;
    double mse_mean = 0.0, mse_var = 0.0;
    double psnr_mean = 0.0, psnr_var = 0.0;
    double ssim_mean = 0.0, ssim_var = 0.0;

    void add(const QualitySummary& q);
    void finalize();
    int count() const { return static_cast<int>(mse_values.size()); }
};

}  // namespace starprune
