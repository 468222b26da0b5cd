#include "starprune/pyramid.hpp"

#include "starprune/interpolate.hpp"

namespace starprune {

Tensor accumulate(const Tensor& prev, const TokenMap& residual) {
    if (!residual.embedded)
        throw std::invalid_argument("accumulate: residual.embedded not populated");
    const Tensor& emb = *residual.embedded;
    if (emb.channels() != prev.channels())
        throw ShapeError("accumulate: channel mismatch " + std::to_string(emb.channels()) +
                         " vs " + std::to_string(prev.channels()));
    Tensor up = interpolate(emb, prev.extent(), ResizeMode::Bilinear);
    Tensor out = prev;
    float* o = out.data();
    const float* u = up.data();
    for (size_t i = 0; i < out.size(); ++i) o[i] += u[i];
    return out;
}

Tensor next_input(const Tensor& feature, Extent2 next_scale) {
    if (next_scale.rows > feature.rows() || next_scale.cols > feature.cols())
        throw std::invalid_argument("next_input: target exceeds final resolution");
    return interpolate(feature, next_scale, ResizeMode::Bilinear);
}

}  // namespace starprune
