#include "starprune/partial_update.hpp"

#include <cstring>

#include "starprune/interpolate.hpp"

namespace starprune {

BinaryMask resample_mask(const BinaryMask& mask, Extent2 target) {
    if (target.rows < 1 || target.cols < 1)
        throw std::invalid_argument("resample_mask: target dims must be >= 1");
    if (target.rows > mask.rows() || target.cols > mask.cols())
        throw std::invalid_argument("resample_mask: target exceeds mask resolution");
    if (target.rows == mask.rows() && target.cols == mask.cols())
        return mask;

    BinaryMask out(target.rows, target.cols);
    for (int r = 0; r < target.rows; ++r) {
        const int sr = nearest_index(r, mask.rows(), target.rows);
        for (int c = 0; c < target.cols; ++c) {
            const int sc = nearest_index(c, mask.cols(), target.cols);
            out.at(r, c) = mask.at(sr, sc);
        }
    }
    return out;
}

SelectedTokens select_tokens(const Tensor& input, const BinaryMask& mask_k) {
    if (input.rows() != mask_k.rows() || input.cols() != mask_k.cols())
        throw ShapeError("select_tokens: mask shape (" + std::to_string(mask_k.rows()) + "," +
                         std::to_string(mask_k.cols()) + ") does not match input " +
                         input.shape_str());
    SelectedTokens sel;
    sel.channels = input.channels();
    sel.origin_mask = mask_k;
    const long long m = mask_k.popcount();
    sel.positions.reserve(static_cast<size_t>(m));
    sel.features.reserve(static_cast<size_t>(m) * input.channels());
    for (int r = 0; r < input.rows(); ++r) {
        for (int c = 0; c < input.cols(); ++c) {
            if (!mask_k.at(r, c))
                continue;
            sel.positions.push_back({r, c});
            const float* px = input.pixel(r, c);
            sel.features.insert(sel.features.end(), px, px + input.channels());
        }
    }
    return sel;
}

Tensor scatter_tokens(const std::vector<Position>& positions, const float* rows, int m,
                      int channels, Extent2 extent) {
    if (static_cast<size_t>(m) != positions.size())
        throw std::invalid_argument("scatter_tokens: row count does not match positions");
    Tensor grid(extent.rows, extent.cols, channels, 0.0f);
    for (int i = 0; i < m; ++i) {
        const Position& p = positions[i];
        if (p.row < 0 || p.row >= extent.rows || p.col < 0 || p.col >= extent.cols)
            throw std::invalid_argument("scatter_tokens: position out of bounds");
        std::memcpy(grid.pixel(p.row, p.col), rows + static_cast<size_t>(i) * channels,
                    sizeof(float) * channels);
    }
    return grid;
}

Tensor partial_accumulate(const Tensor& prev, const Tensor& scattered_residual,
                          const BinaryMask& mask) {
    if (mask.rows() != prev.rows() || mask.cols() != prev.cols())
        throw ShapeError("partial_accumulate: mask shape (" + std::to_string(mask.rows()) + "," +
                         std::to_string(mask.cols()) + ") does not match feature " +
                         prev.shape_str());
    if (scattered_residual.channels() != prev.channels())
        throw ShapeError("partial_accumulate: channel mismatch " +
                         std::to_string(scattered_residual.channels()) + " vs " +
                         std::to_string(prev.channels()));

    Tensor up = interpolate(scattered_residual, prev.extent(), ResizeMode::Bilinear);

    // Copy first, then add only where the mask keeps: masked-out positions
    // stay bitwise identical to prev (no -0.0 + 0.0 style bit churn).
    Tensor out = prev;
    const int C = prev.channels();
    for (int r = 0; r < prev.rows(); ++r) {
        for (int c = 0; c < prev.cols(); ++c) {
            if (!mask.at(r, c))
                continue;
            float* o = out.pixel(r, c);
            const float* u = up.pixel(r, c);
            for (int ch = 0; ch < C; ++ch) o[ch] += u[ch];
        }
    }
    return out;
}

}  // namespace starprune
