#include "starprune/interpolate.hpp"

#include <algorithm>
#include <cmath>

namespace starprune {

namespace {

void check_target(Extent2 target) {
    if (target.rows < 1 || target.cols < 1)
        throw std::invalid_argument("interpolate: zero-sized target");
}

}  // namespace

AxisTap bilinear_tap(int out_index, int in_size, int out_size) {
    const double scale = static_cast<double>(in_size) / out_size;
    const double x = (out_index + 0.5) * scale - 0.5;
    const double fl = std::floor(x);
    int lo = static_cast<int>(fl);
    int hi = lo + 1;
    float t = static_cast<float>(x - fl);
    lo = std::clamp(lo, 0, in_size - 1);
    hi = std::clamp(hi, 0, in_size - 1);
    return {lo, hi, t};
}

int nearest_index(int out_index, int in_size, int out_size) {
    const double scale = static_cast<double>(in_size) / out_size;
    const double x = (out_index + 0.5) * scale - 0.5;
    // round to closest source center, half-way cases toward the lower index
    int j = static_cast<int>(std::ceil(x - 0.5));
    return std::clamp(j, 0, in_size - 1);
}

Tensor interpolate(const Tensor& src, Extent2 target, ResizeMode mode) {
    check_target(target);
    if (src.empty())
        throw std::invalid_argument("interpolate: empty source");
    if (target == src.extent())
        return src;

    const int C = src.channels();
    Tensor dst(target.rows, target.cols, C);

    if (mode == ResizeMode::Nearest) {
        std::vector<int> col_idx(target.cols);
        for (int c = 0; c < target.cols; ++c)
            col_idx[c] = nearest_index(c, src.cols(), target.cols);
        for (int r = 0; r < target.rows; ++r) {
            const int sr = nearest_index(r, src.rows(), target.rows);
            for (int c = 0; c < target.cols; ++c) {
                const float* in = src.pixel(sr, col_idx[c]);
                float* out = dst.pixel(r, c);
                for (int ch = 0; ch < C; ++ch) out[ch] = in[ch];
            }
        }
        return dst;
    }

    std::vector<AxisTap> col_taps(target.cols);
    for (int c = 0; c < target.cols; ++c)
        col_taps[c] = bilinear_tap(c, src.cols(), target.cols);
    for (int r = 0; r < target.rows; ++r) {
        const AxisTap rt = bilinear_tap(r, src.rows(), target.rows);
        for (int c = 0; c < target.cols; ++c) {
            const AxisTap& ct = col_taps[c];
            const float* p00 = src.pixel(rt.lo, ct.lo);
            const float* p01 = src.pixel(rt.lo, ct.hi);
            const float* p10 = src.pixel(rt.hi, ct.lo);
            const float* p11 = src.pixel(rt.hi, ct.hi);
            float* out = dst.pixel(r, c);
            // Nested lerps (a + t*(b-a)) keep equal taps exact, so a
            // constant region stays bitwise constant through any resize.
            for (int ch = 0; ch < C; ++ch) {
                const float top = p00[ch] + ct.t * (p01[ch] - p00[ch]);
                const float bot = p10[ch] + ct.t * (p11[ch] - p10[ch]);
                out[ch] = top + rt.t * (bot - top);
            }
        }
    }
    return dst;
}

void bilinear_sample_into(const Tensor& src, int out_r, int out_c, Extent2 out_extent,
                          float* out) {
    if (out_extent == src.extent()) {
        const float* p = src.pixel(out_r, out_c);
        for (int ch = 0; ch < src.channels(); ++ch) out[ch] = p[ch];
        return;
    }
    const AxisTap rt = bilinear_tap(out_r, src.rows(), out_extent.rows);
    const AxisTap ct = bilinear_tap(out_c, src.cols(), out_extent.cols);
    const float* p00 = src.pixel(rt.lo, ct.lo);
    const float* p01 = src.pixel(rt.lo, ct.hi);
    const float* p10 = src.pixel(rt.hi, ct.lo);
    const float* p11 = src.pixel(rt.hi, ct.hi);
    // Same nested-lerp arithmetic as interpolate(), so sampling one output
    // pixel reproduces the full resize bitwise.
    for (int ch = 0; ch < src.channels(); ++ch) {
        const float top = p00[ch] + ct.t * (p01[ch] - p00[ch]);
        const float bot = p10[ch] + ct.t * (p11[ch] - p10[ch]);
        out[ch] = top + rt.t * (bot - top);
    }
}

Field interpolate_field(const Field& src, Extent2 target, ResizeMode mode) {
    check_target(target);
    if (target == src.extent())
        return src;
    Field dst(target.rows, target.cols);
    if (mode == ResizeMode::Nearest) {
        for (int r = 0; r < target.rows; ++r) {
            const int sr = nearest_index(r, src.rows(), target.rows);
            for (int c = 0; c < target.cols; ++c)
                dst.at(r, c) = src.at(sr, nearest_index(c, src.cols(), target.cols));
        }
        return dst;
    }
    for (int r = 0; r < target.rows; ++r) {
        const AxisTap rt = bilinear_tap(r, src.rows(), target.rows);
        for (int c = 0; c < target.cols; ++c) {
            const AxisTap ct = bilinear_tap(c, src.cols(), target.cols);
            const float a00 = src.at(rt.lo, ct.lo);
            const float a01 = src.at(rt.lo, ct.hi);
            const float a10 = src.at(rt.hi, ct.lo);
            const float a11 = src.at(rt.hi, ct.hi);
            // Same nested-lerp arithmetic as the tensor path.
            const float top = a00 + ct.t * (a01 - a00);
            const float bot = a10 + ct.t * (a11 - a10);
            dst.at(r, c) = top + rt.t * (bot - top);
        }
    }
    return dst;
}

}  // namespace starprune
