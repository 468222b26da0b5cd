#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "starprune/pyramid.hpp"
#include "starprune/tensor.hpp"

namespace starprune {

/// Per-key total received attention, scattered onto a scale's token grid.
/// Positions outside the processed set hold 0; entries sum to the query
/// count (every attention row is a probability distribution).
struct AttentionScoreMap {
    int scale_index = 0;
    Field data;
};

/// Deterministic residual predictor. Implementations map a packed
/// (m, C) set of selected-token features plus their grid positions to
/// (m, C) residuals; identical inputs and construction seed always give
/// identical output.
class Backbone {
public:
    virtual ~Backbone() = default;

    virtual std::string kind() const = 0;
    virtual int channels() const = 0;

    /// `input` is packed (m, C) row-major; `positions` are unique in-bounds
    /// grid coordinates at `scale`; `ctx` carries the clip's accumulated
    /// state. Returns packed (m, C) residuals.
    virtual std::vector<float> predict(const float* input, int m,
                                       const std::vector<Position>& positions, Extent2 scale,
                                       const ClipState& ctx) const = 0;

    /// Per-key received attention for the given token set. Only attention
    /// backbones support this; others raise UnsupportedError.
    virtual AttentionScoreMap attention_scores(const float* input, int m,
                                               const std::vector<Position>& positions,
                                               Extent2 scale) const;

protected:
    /// Shared argument validation: m >= 1, positions unique and in-bounds.
    static void check_positions(int m, const std::vector<Position>& positions, Extent2 scale);
};

/// Positionwise predictor returning the exact residual that moves the
/// accumulated feature toward a known per-clip target: it bilinearly
/// samples both target and current feature at the position's scale-k
/// footprint and subtracts. Cost is O(m * C); restricting the position set
/// never changes the value at a position (selection consistency), so every
/// quality effect of pruning is attributable to the skipped updates alone.
class OracleBackbone final : public Backbone {
public:
    /// `targets[t]` is the generation target of clip t (0 = reference clip);
    /// all at the final-scale resolution with a common channel count.
    explicit OracleBackbone(std::vector<Tensor> targets);

    std::string kind() const override { return "oracle"; }
    int channels() const override { return channels_; }
    int clip_count() const { return static_cast<int>(targets_.size()); }
    const Tensor& target(int clip_index) const;

    std::vector<float> predict(const float* input, int m,
                               const std::vector<Position>& positions, Extent2 scale,
                               const ClipState& ctx) const override;

private:
    std::vector<Tensor> targets_;
    int channels_ = 0;
};

/// Seeded multi-head self-attention stack over the selected tokens: per
/// layer, Q/K/V projections (no biases, no residual connection, no output
/// projection), softmax attention per head, heads concatenated. Weights are
/// drawn once at construction from a splitmix64 stream, uniform in
/// [-1/sqrt(C), 1/sqrt(C)] — nothing is trained. Cost is O(m^2 * C), which
/// is what makes token-count reductions measurable as wall-clock speedups.
class MixerBackbone final : public Backbone {
public:
    MixerBackbone(uint64_t seed, int channels, int heads = 2, int layers = 2);

    std::string kind() const override { return "mixer"; }
    int channels() const override { return channels_; }
    int heads() const { return heads_; }
    int layers() const { return layers_; }

    std::vector<float> predict(const float* input, int m,
                               const std::vector<Position>& positions, Extent2 scale,
                               const ClipState& ctx) const override;

    /// First-layer attention, averaged over heads, summed over the query
    /// dimension, scattered onto the scale grid at `positions`.
    AttentionScoreMap attention_scores(const float* input, int m,
                                       const std::vector<Position>& positions,
                                       Extent2 scale) const override;

private:
    struct LayerWeights {
        std::vector<float> wq, wk, wv;  // each (C, C) row-major
    };

    /// Row-stochastic (m, m) attention matrix averaged over heads for one
    /// layer, plus the layer output written to `out` (m, C).
    void apply_layer(const LayerWeights& w, const std::vector<float>& x, int m,
                     std::vector<float>& out, std::vector<double>* head_mean_attn) const;

    int channels_ = 0;
    int heads_ = 0;
    int layers_ = 0;
    int head_dim_ = 0;
    std::vector<LayerWeights> weights_;
};

}  // namespace starprune
