#include "starprune/synthetic.hpp"

#include <cmath>

#include "starprune/rng.hpp"

namespace starprune {

Tensor bandlimited_target(Extent2 extent, int channels, uint64_t seed, double cutoff,
                          int waves, float amplitude) {
    if (cutoff <= 0.0 || cutoff > 1.0)
        throw std::invalid_argument("bandlimited_target: cutoff must be in (0, 1]");
    if (waves < 1)
        throw std::invalid_argument("bandlimited_target: waves must be >= 1");

    SplitMix64 g(derive_seed(seed, {0x62616E64ULL}));  // "band" substream
    struct Wave {
        double fr, fc, phase;
        std::vector<float> amp;  // per channel
    };
    std::vector<Wave> spec(waves);
    const double max_freq = 0.5 * cutoff;  // cycles per token
    for (Wave& w : spec) {
        w.fr = g.next_double() * max_freq;
        w.fc = g.next_double() * max_freq;
        w.phase = g.next_double() * 2.0 * M_PI;
        w.amp.resize(channels);
        for (float& a : w.amp) a = g.uniform(-amplitude, amplitude);
    }

    Tensor out(extent.rows, extent.cols, channels, 0.0f);
    for (int r = 0; r < extent.rows; ++r) {
        for (int c = 0; c < extent.cols; ++c) {
            float* px = out.pixel(r, c);
            for (const Wave& w : spec) {
                const float v = static_cast<float>(
                    std::cos(2.0 * M_PI * (w.fr * r + w.fc * c) + w.phase));
                for (int ch = 0; ch < channels; ++ch) px[ch] += w.amp[ch] * v;
            }
        }
    }
    return out;
}

std::vector<Tensor> moving_square_targets(Extent2 extent, int channels, int num_clips,
                                          uint64_t seed, int square_size, int velocity,
                                          float background, float brightness) {
    if (num_clips < 0)
        throw std::invalid_argument("moving_square_targets: num_clips must be >= 0");
    if (square_size < 1 || square_size > extent.rows || square_size > extent.cols)
        throw std::invalid_argument("moving_square_targets: square does not fit the grid");

    SplitMix64 g(derive_seed(seed, {0x7371ULL}));  // "sq" substream
    const int row0 = static_cast<int>(g.bounded(extent.rows - square_size + 1));
    const int col0 = static_cast<int>(g.bounded(extent.cols - square_size + 1));
    std::vector<float> tint(channels);
    for (float& v : tint) v = brightness * (0.5f + 0.5f * g.uniform(0.0f, 1.0f));

    std::vector<Tensor> clips;
    clips.reserve(static_cast<size_t>(num_clips) + 1);
    for (int t = 0; t <= num_clips; ++t) {
        Tensor frame(extent.rows, extent.cols, channels, background);
        const int left = (col0 + t * velocity) % extent.cols;
        for (int dr = 0; dr < square_size; ++dr) {
            const int r = row0 + dr;
            for (int dc = 0; dc < square_size; ++dc) {
                const int c = (left + dc) % extent.cols;
                float* px = frame.pixel(r, c);
                for (int ch = 0; ch < channels; ++ch) px[ch] = background + tint[ch];
            }
        }
        clips.push_back(std::move(frame));
    }
    return clips;
}

std::vector<Tensor> frozen_lowband_history(Extent2 extent, int channels, int snapshots, int k0,
                                           uint64_t seed) {
    if (snapshots < 2)
        throw std::invalid_argument("frozen_lowband_history: need at least 2 snapshots");
    if (k0 < 0 || k0 >= snapshots)
        throw std::invalid_argument("frozen_lowband_history: k0 must index a snapshot");

    SplitMix64 g(derive_seed(seed, {0x6C6F77ULL}));  // "low" substream
    std::vector<float> low_amp(channels), high_amp(channels);
    for (float& v : low_amp) v = g.uniform(0.5f, 1.5f);
    for (float& v : high_amp) v = g.uniform(0.5f, 1.5f);
    const double phase = g.next_double() * 2.0 * M_PI;

    // One cycle across the grid (lowest nonzero frequency) for the low part;
    // the (-1)^(r+c) checkerboard is the pure Nyquist component.
    auto low_value = [&](int r, int c) {
        return std::cos(2.0 * M_PI * (static_cast<double>(r) / extent.rows +
                                      static_cast<double>(c) / extent.cols) +
                        phase);
    };

    std::vector<Tensor> out;
    out.reserve(static_cast<size_t>(snapshots));
    for (int i = 0; i < snapshots; ++i) {
        // low-band gain grows until k0 then freezes; the checkerboard gain
        // keeps moving at every snapshot
        const double low_gain = 1.0 + 0.5 * std::min(i, k0);
        const double high_gain = 0.2 * (i + 1);
        Tensor snap(extent.rows, extent.cols, channels, 0.0f);
        for (int r = 0; r < extent.rows; ++r) {
            for (int c = 0; c < extent.cols; ++c) {
                const double lv = low_value(r, c) * low_gain;
                const double hv = (((r + c) & 1) ? -1.0 : 1.0) * high_gain;
                float* px = snap.pixel(r, c);
                for (int ch = 0; ch < channels; ++ch)
                    px[ch] = static_cast<float>(low_amp[ch] * lv + high_amp[ch] * hv);
            }
        }
        out.push_back(std::move(snap));
    }
    return out;
}

}  // namespace starprune
