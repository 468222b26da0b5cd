#include "starprune/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace starprune {

namespace {
constexpr double kPsnrSentinel = 99.0;
constexpr double kSsimK1 = 0.01;
constexpr double kSsimK2 = 0.03;
}  // namespace

double mse(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "mse");
    double acc = 0.0;
    const float* pa = a.data();
    const float* pb = b.data();
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(pa[i]) - pb[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

double psnr(const Tensor& a, const Tensor& b, double peak) {
    if (peak <= 0.0)
        throw std::invalid_argument("psnr: peak must be > 0");
    const double err = mse(a, b);
    if (err == 0.0)
        return kPsnrSentinel;
    return std::min(kPsnrSentinel, 10.0 * std::log10(peak * peak / err));
}

double ssim(const Tensor& a, const Tensor& b, double peak, int window) {
    require_same_shape(a, b, "ssim");
    if (peak <= 0.0)
        throw std::invalid_argument("ssim: peak must be > 0");
    if (window < 1)
        throw std::invalid_argument("ssim: window must be >= 1");

    const int w = std::min({window, a.rows(), a.cols()});
    const double c1 = (kSsimK1 * peak) * (kSsimK1 * peak);
    const double c2 = (kSsimK2 * peak) * (kSsimK2 * peak);
    const double n = static_cast<double>(w) * w;

    double total = 0.0;
    long long windows = 0;
    for (int ch = 0; ch < a.channels(); ++ch) {
        for (int r0 = 0; r0 + w <= a.rows(); ++r0) {
            for (int c0 = 0; c0 + w <= a.cols(); ++c0) {
                double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
                for (int r = r0; r < r0 + w; ++r) {
                    for (int c = c0; c < c0 + w; ++c) {
                        const double va = a.at(r, c, ch);
                        const double vb = b.at(r, c, ch);
                        sa += va;
                        sb += vb;
                        saa += va * va;
                        sbb += vb * vb;
                        sab += va * vb;
                    }
                }
                const double mu_a = sa / n, mu_b = sb / n;
                const double var_a = saa / n - mu_a * mu_a;
                const double var_b = sbb / n - mu_b * mu_b;
                const double cov = sab / n - mu_a * mu_b;
                total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                         ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
                ++windows;
            }
        }
    }
    return total / static_cast<double>(windows);
}

QualitySummary compare(const Tensor& a, const Tensor& b, double peak) {
    QualitySummary q;
    q.mse = mse(a, b);
    q.psnr = psnr(a, b, peak);
    q.ssim = ssim(a, b, peak);
    q.exact_match = (q.mse == 0.0);
    return q;
}

void QualityAggregate::add(const QualitySummary& q) {
    mse_values.push_back(q.mse);
    psnr_values.push_back(q.psnr);
    ssim_values.push_back(q.ssim);
}

namespace {
void mean_var(const std::vector<double>& xs, double& mean, double& var) {
    mean = 0.0;
    var = 0.0;
    if (xs.empty()) return;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
}
}  // namespace

void QualityAggregate::finalize() {
    mean_var(mse_values, mse_mean, mse_var);
    mean_var(psnr_values, psnr_mean, psnr_var);
    mean_var(ssim_values, ssim_mean, ssim_var);
}

}  // namespace starprune
