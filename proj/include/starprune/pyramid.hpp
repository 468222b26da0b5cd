#pragma once

#include <vector>

#include "starprune/quantize.hpp"
#include "starprune/schedule.hpp"
#include "starprune/tensor.hpp"

namespace starprune {

/// Accumulated feature state of one clip. `feature` always lives at the
/// final-scale resolution; `history` holds one snapshot per completed
/// scale-iteration, in processing order.
struct ClipState {
    int clip_index = 0;
    Tensor feature;
    std::vector<Tensor> history;
};

/// prev + bilinear-upsample(residual embedding) at the final resolution.
/// The residual map must carry its embedded lookup.
Tensor accumulate(const Tensor& prev, const TokenMap& residual);

/// Bilinear downsample of the accumulated feature to the next scale; the
/// continuous conditioning input for the next prediction step.
Tensor next_input(const Tensor& feature, Extent2 next_scale);

}  // namespace starprune
