#include "starprune/backbone.hpp"

#include <algorithm>
#include <cmath>

#include "starprune/errors.hpp"
#include "starprune/interpolate.hpp"
#include "starprune/rng.hpp"

namespace starprune {

AttentionScoreMap Backbone::attention_scores(const float*, int, const std::vector<Position>&,
                                             Extent2) const {
    throw UnsupportedError(kind() + ": attention scores are not available for this backbone");
}

void Backbone::check_positions(int m, const std::vector<Position>& positions, Extent2 scale) {
    if (m < 1)
        throw std::invalid_argument("backbone: need at least one token");
    if (static_cast<size_t>(m) != positions.size())
        throw std::invalid_argument("backbone: position count does not match token count");
    std::vector<long long> lin(positions.size());
    for (size_t i = 0; i < positions.size(); ++i) {
        const Position& p = positions[i];
        if (p.row < 0 || p.row >= scale.rows || p.col < 0 || p.col >= scale.cols)
            throw std::invalid_argument("backbone: position out of bounds");
        lin[i] = static_cast<long long>(p.row) * scale.cols + p.col;
    }
    std::sort(lin.begin(), lin.end());
    if (std::adjacent_find(lin.begin(), lin.end()) != lin.end())
        throw std::invalid_argument("backbone: duplicate positions");
}

// ---------------------------------------------------------------------------
// OracleBackbone

OracleBackbone::OracleBackbone(std::vector<Tensor> targets) : targets_(std::move(targets)) {
    if (targets_.empty())
        throw std::invalid_argument("OracleBackbone: needs at least one clip target");
    channels_ = targets_[0].channels();
    for (const Tensor& t : targets_) {
        if (!t.same_shape(targets_[0]))
            throw ShapeError("OracleBackbone: all clip targets must share one shape");
        if (!t.all_finite())
            throw std::invalid_argument("OracleBackbone: target contains non-finite values");
    }
}

const Tensor& OracleBackbone::target(int clip_index) const {
    if (clip_index < 0 || clip_index >= static_cast<int>(targets_.size()))
        throw std::invalid_argument("OracleBackbone: no target for clip " +
                                    std::to_string(clip_index));
    return targets_[clip_index];
}

std::vector<float> OracleBackbone::predict(const float* /*input*/, int m,
                                           const std::vector<Position>& positions, Extent2 scale,
                                           const ClipState& ctx) const {
    check_positions(m, positions, scale);
    const Tensor& tgt = target(ctx.clip_index);
    if (!tgt.same_shape(ctx.feature))
        throw ShapeError("OracleBackbone: clip feature " + ctx.feature.shape_str() +
                         " does not match target " + tgt.shape_str());

    const int C = channels_;
    std::vector<float> out(static_cast<size_t>(m) * C);
    std::vector<float> want(C), have(C);
    for (int i = 0; i < m; ++i) {
        const Position& p = positions[i];
        // Sampling target and current through identical tap arithmetic makes
        // a converged position yield an exact 0.0f residual.
        bilinear_sample_into(tgt, p.row, p.col, scale, want.data());
        bilinear_sample_into(ctx.feature, p.row, p.col, scale, have.data());
        float* o = out.data() + static_cast<size_t>(i) * C;
        for (int ch = 0; ch < C; ++ch) o[ch] = want[ch] - have[ch];
    }
    return out;
}

// ---------------------------------------------------------------------------
// MixerBackbone

MixerBackbone::MixerBackbone(uint64_t seed, int channels, int heads, int layers)
    : channels_(channels), heads_(heads), layers_(layers) {
    if (channels < 1 || heads < 1 || layers < 1)
        throw std::invalid_argument("MixerBackbone: channels, heads and layers must be >= 1");
    if (channels % heads != 0)
        throw std::invalid_argument("MixerBackbone: channels must be divisible by heads");
    head_dim_ = channels / heads;

    const float bound = 1.0f / std::sqrt(static_cast<float>(channels));
    SplitMix64 g(derive_seed(seed, {0x6D69786572ULL}));  // "mixer" substream
    weights_.resize(layers);
    const size_t n = static_cast<size_t>(channels) * channels;
    for (LayerWeights& w : weights_) {
        w.wq.resize(n);
        w.wk.resize(n);
        w.wv.resize(n);
        for (float& v : w.wq) v = g.uniform(-bound, bound);
        for (float& v : w.wk) v = g.uniform(-bound, bound);
        for (float& v : w.wv) v = g.uniform(-bound, bound);
    }
}

namespace {

// y = x @ w for packed row-major x (m, C) and w (C, C).
void matmul_rows(const std::vector<float>& x, int m, int C, const std::vector<float>& w,
                 std::vector<float>& y) {
    y.assign(static_cast<size_t>(m) * C, 0.0f);
    for (int i = 0; i < m; ++i) {
        const float* xi = x.data() + static_cast<size_t>(i) * C;
        float* yi = y.data() + static_cast<size_t>(i) * C;
        for (int a = 0; a < C; ++a) {
            const float v = xi[a];
            if (v == 0.0f) continue;
            const float* wa = w.data() + static_cast<size_t>(a) * C;
            for (int b = 0; b < C; ++b) yi[b] += v * wa[b];
        }
    }
}

}  // namespace

void MixerBackbone::apply_layer(const LayerWeights& w, const std::vector<float>& x, int m,
                                std::vector<float>& out,
                                std::vector<double>* head_mean_attn) const {
    const int C = channels_;
    const int dh = head_dim_;
    std::vector<float> q, k, v;
    matmul_rows(x, m, C, w.wq, q);
    matmul_rows(x, m, C, w.wk, k);
    matmul_rows(x, m, C, w.wv, v);

    out.assign(static_cast<size_t>(m) * C, 0.0f);
    if (head_mean_attn)
        head_mean_attn->assign(static_cast<size_t>(m) * m, 0.0);

    const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));
    std::vector<double> logits(m), weights(m);
    for (int h = 0; h < heads_; ++h) {
        const int off = h * dh;
        for (int i = 0; i < m; ++i) {
            const float* qi = q.data() + static_cast<size_t>(i) * C + off;
            double mx = -1e300;
            for (int j = 0; j < m; ++j) {
                const float* kj = k.data() + static_cast<size_t>(j) * C + off;
                double dot = 0.0;
                for (int d = 0; d < dh; ++d) dot += static_cast<double>(qi[d]) * kj[d];
                logits[j] = dot * inv_sqrt_dh;
                mx = std::max(mx, logits[j]);
            }
            double denom = 0.0;
            for (int j = 0; j < m; ++j) {
                weights[j] = std::exp(logits[j] - mx);
                denom += weights[j];
            }
            float* oi = out.data() + static_cast<size_t>(i) * C + off;
            for (int j = 0; j < m; ++j) {
                const double a = weights[j] / denom;
                if (head_mean_attn)
                    (*head_mean_attn)[static_cast<size_t>(i) * m + j] += a / heads_;
                const float* vj = v.data() + static_cast<size_t>(j) * C + off;
                const float af = static_cast<float>(a);
                for (int d = 0; d < dh; ++d) oi[d] += af * vj[d];
            }
        }
    }
}

std::vector<float> MixerBackbone::predict(const float* input, int m,
                                          const std::vector<Position>& positions, Extent2 scale,
                                          const ClipState& /*ctx*/) const {
    check_positions(m, positions, scale);
    std::vector<float> x(input, input + static_cast<size_t>(m) * channels_);
    std::vector<float> y;
    for (const LayerWeights& w : weights_) {
        apply_layer(w, x, m, y, nullptr);
        x.swap(y);
    }
    return x;
}

AttentionScoreMap MixerBackbone::attention_scores(const float* input, int m,
                                                  const std::vector<Position>& positions,
                                                  Extent2 scale) const {
    check_positions(m, positions, scale);
    std::vector<float> x(input, input + static_cast<size_t>(m) * channels_);
    std::vector<float> y;
    std::vector<double> attn;
    apply_layer(weights_[0], x, m, y, &attn);

    AttentionScoreMap map;
    map.data = Field(scale.rows, scale.cols, 0.0f);
    for (int j = 0; j < m; ++j) {
        double received = 0.0;
        for (int i = 0; i < m; ++i) received += attn[static_cast<size_t>(i) * m + j];
        map.data.at(positions[j].row, positions[j].col) = static_cast<float>(received);
    }
    return map;
}

}  // namespace starprune
