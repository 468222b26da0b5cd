#pragma once

#include <vector>

#include "starprune/sttp.hpp"
#include "starprune/tensor.hpp"

namespace starprune {

/// Row-major gathering of the tokens a mask keeps at one scale.
/// `features` is packed (m, C); m may be 0 (callers skip the backbone then).
struct SelectedTokens {
    std::vector<Position> positions;  // ascending row-major
    std::vector<float> features;      // (m, C) packed rows
    int channels = 0;
    BinaryMask origin_mask;           // the scale-k resampled mask

    int count() const { return static_cast<int>(positions.size()); }
    float* row(int i) { return features.data() + static_cast<size_t>(i) * channels; }
    const float* row(int i) const {
        return features.data() + static_cast<size_t>(i) * channels;
    }
};

/// Nearest-neighbour resample of a final-resolution mask down to a scale's
/// native grid. Strictly binary output; bitwise copy when shapes match.
BinaryMask resample_mask(const BinaryMask& mask, Extent2 target);

/// Gathers features at mask-1 positions in row-major order.
SelectedTokens select_tokens(const Tensor& input, const BinaryMask& mask_k);

/// Scatters packed (m, C) rows into an all-zero grid at `extent`; positions
/// not listed stay exactly zero (codebook entry 0 territory).
Tensor scatter_tokens(const std::vector<Position>& positions, const float* rows, int m,
                      int channels, Extent2 extent);

/// out = bilinear-upsample(scattered residual grid) masked by `mask` + prev.
/// Positions where mask = 0 are bitwise equal to prev: the update is applied
/// only inside the mask, so upsampling smear never leaks outside it.
Tensor partial_accumulate(const Tensor& prev, const Tensor& scattered_residual,
                          const BinaryMask& mask);

}  // namespace starprune
