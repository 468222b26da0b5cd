#pragma once

#include "starprune/tensor.hpp"

namespace starprune {

enum class ResizeMode { Bilinear, Nearest };

/// One-axis bilinear tap under the align-corners-false convention:
/// the source coordinate of output index i is (i + 0.5) * in/out - 0.5,
/// split into the two neighbouring indices (clamped) and a blend weight.
struct AxisTap {
    int lo = 0;
    int hi = 0;
    float t = 0.0f;  // weight of hi; lo gets 1 - t
};

AxisTap bilinear_tap(int out_index, int in_size, int out_size);

/// Nearest source index for output index i: the source center closest to
/// the output center, ties resolved toward the lower index.
int nearest_index(int out_index, int in_size, int out_size);

/// Resizes a channels-last tensor to `target`. Identity-shaped calls return
/// a bitwise copy. Bilinear resizes blend the 2x2 neighbouring texels;
/// nearest picks one source texel per output.
Tensor interpolate(const Tensor& src, Extent2 target, ResizeMode mode);

/// Bilinear sample of a single output position, identical tap arithmetic to
/// interpolate(); writes `channels` values into `out`.
void bilinear_sample_into(const Tensor& src, int out_r, int out_c, Extent2 out_extent,
                          float* out);

/// 2D field resize with the same conventions.
Field interpolate_field(const Field& src, Extent2 target, ResizeMode mode);

}  // namespace starprune
