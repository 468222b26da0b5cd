#include "starprune/sttp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace starprune {

namespace {

Field cosine_field(const Tensor& a, const Tensor& b, const char* where) {
    require_same_shape(a, b, where);
    const int C = a.channels();
    Field out(a.rows(), a.cols());
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c) {
            const float* pa = a.pixel(r, c);
            const float* pb = b.pixel(r, c);
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (int ch = 0; ch < C; ++ch) {
                dot += static_cast<double>(pa[ch]) * pb[ch];
                na += static_cast<double>(pa[ch]) * pa[ch];
                nb += static_cast<double>(pb[ch]) * pb[ch];
            }
            float s;
            if (na == 0.0 && nb == 0.0) {
                s = 1.0f;  // both zero: nothing changed, treat as converged
            } else if (na == 0.0 || nb == 0.0) {
                s = 0.0f;  // one-sided zero signals change
            } else {
                s = static_cast<float>(dot / (std::sqrt(na) * std::sqrt(nb)));
                s = std::clamp(s, -1.0f, 1.0f);
            }
            out.at(r, c) = s;
        }
    }
    return out;
}

}  // namespace

SimilarityMap spatial_similarity(const Tensor& f_prev, const Tensor& f_curr) {
    SimilarityMap m;
    m.kind = SimilarityKind::Spatial;
    m.data = cosine_field(f_prev, f_curr, "spatial_similarity");
    return m;
}

SimilarityMap temporal_similarity(const Tensor& f_prev_clip, const Tensor& f_curr_clip) {
    SimilarityMap m;
    m.kind = SimilarityKind::Temporal;
    m.data = cosine_field(f_prev_clip, f_curr_clip, "temporal_similarity");
    return m;
}

FusedScoreMap fuse_scores(const SimilarityMap& spatial, const SimilarityMap& temporal, double p) {
    if (!(p >= 1.0))  // rejects NaN as well
        throw std::invalid_argument("fuse_scores: p must be >= 1");
    if (!spatial.data.same_shape(temporal.data))
        throw ShapeError("fuse_scores: similarity map shape mismatch");

    FusedScoreMap out;
    out.clip_index = spatial.clip_index;
    out.scale_index = spatial.scale_index;
    out.p = p;
    out.data = Field(spatial.data.rows(), spatial.data.cols());
    const size_t n = spatial.data.size();
    for (size_t i = 0; i < n; ++i) {
        const double a = 1.0 - spatial.data[i];
        const double b = 1.0 - temporal.data[i];
        double score;
        if (p == kMaxNorm) {
            score = std::max(a, b);
        } else if (p == 1.0) {
            score = a + b;
        } else if (p == 2.0) {
            score = std::sqrt(a * a + b * b);
        } else {
            score = std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
        }
        out.data[i] = static_cast<float>(score);
    }
    return out;
}

long long keep_count_for(double ratio, long long n) {
    if (ratio < 0.0 || ratio > 1.0)
        throw std::invalid_argument("keep_count_for: ratio must be in [0, 1]");
    return static_cast<long long>(std::floor((1.0 - ratio) * static_cast<double>(n) + 0.5));
}

PruneMask build_mask(const FusedScoreMap& scores, double ratio) {
    const Field& f = scores.data;
    const long long n = static_cast<long long>(f.size());
    const long long keep = keep_count_for(ratio, n);

    PruneMask mask;
    mask.clip_index = scores.clip_index;
    mask.scale_index = scores.scale_index;
    mask.keep = BinaryMask(f.rows(), f.cols(), 0);
    mask.keep_count = keep;
    if (keep == 0)
        return mask;
    if (keep == n) {
        std::fill(mask.keep.storage().begin(), mask.keep.storage().end(), uint8_t{1});
        return mask;
    }

    // kth largest value as the cut, then fill: strictly greater always kept,
    // values equal to the cut admitted in row-major order until full
    std::vector<float> vals(f.storage());
    std::nth_element(vals.begin(), vals.begin() + (keep - 1), vals.end(), std::greater<float>());
    const float cut = vals[keep - 1];

    long long taken = 0;
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] > cut) {
            mask.keep[i] = 1;
            ++taken;
        }
    }
    for (size_t i = 0; i < f.size() && taken < keep; ++i) {
        if (f[i] == cut) {
            mask.keep[i] = 1;
            ++taken;
        }
    }
    return mask;
}

std::optional<PruneMask> mask_for(const ScaleSchedule& schedule,
                                  const std::vector<ClipState>& clips, int clip_index,
                                  int scale_index, int iter, double p,
                                  FusedScoreMap* scores_out) {
    if (clip_index == 0)
        return std::nullopt;  // the reference clip always runs full
    if (!prune_eligible(schedule, scale_index, iter))
        return std::nullopt;

    const ClipState& clip = clips[clip_index];
    const long long done = completed_snapshots(schedule, scale_index, iter);
    if (done < 2 || static_cast<long long>(clip.history.size()) < done)
        throw StateError("mask_for: missing history snapshot for clip " +
                         std::to_string(clip_index) + " scale " + std::to_string(scale_index));

    const Tensor& curr = clip.history[done - 1];
    const Tensor& prev = clip.history[done - 2];
    SimilarityMap sp = spatial_similarity(prev, curr);
    sp.clip_index = clip_index;
    sp.scale_index = scale_index;

    const ClipState& prev_clip = clips[clip_index - 1];
    const Tensor* temporal_ref = nullptr;
    if (clip_index == 1) {
        // the reference clip contributes its final-scale feature
        if (prev_clip.history.empty())
            throw StateError("mask_for: reference clip has no history");
        temporal_ref = &prev_clip.history.back();
    } else {
        if (static_cast<long long>(prev_clip.history.size()) < done)
            throw StateError("mask_for: predecessor clip history too short");
        temporal_ref = &prev_clip.history[done - 1];
    }
    SimilarityMap tm = temporal_similarity(*temporal_ref, curr);
    tm.clip_index = clip_index;
    tm.scale_index = scale_index;

    FusedScoreMap scores = fuse_scores(sp, tm, p);
    if (scores_out)
        *scores_out = scores;
    return build_mask(scores, schedule.prune_ratios[scale_index]);
}

std::vector<MaskPlanEntry> schedule_masks(const ScaleSchedule& schedule,
                                          const std::vector<ClipState>& clips, double p) {
    std::vector<MaskPlanEntry> plan;
    for (int t = 1; t <= schedule.clips; ++t) {
        for (int k = 0; k < schedule.num_scales(); ++k) {
            for (int it = 1; it <= schedule.iterations[k]; ++it) {
                MaskPlanEntry e;
                e.clip_index = t;
                e.scale_index = k;
                e.iter = it;
                e.mask = mask_for(schedule, clips, t, k, it, p);
                plan.push_back(std::move(e));
            }
        }
    }
    return plan;
}

ScoreStats field_stats(const Field& f) {
    ScoreStats s;
    if (f.size() == 0)
        return s;
    double sum = 0.0, sum2 = 0.0;
    s.min = f[0];
    s.max = f[0];
    for (size_t i = 0; i < f.size(); ++i) {
        const double v = f[i];
        sum += v;
        sum2 += v * v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    const double n = static_cast<double>(f.size());
    s.mean = sum / n;
    s.variance = std::max(0.0, sum2 / n - s.mean * s.mean);
    return s;
}

Histogram score_histogram(const FusedScoreMap& scores, int bins) {
    if (bins < 2)
        throw std::invalid_argument("score_histogram: bins must be >= 2");
    Histogram h;
    h.stats = field_stats(scores.data);
    h.edges.resize(bins + 1);
    h.counts.assign(bins, 0);
    const double lo = h.stats.min;
    const double hi = h.stats.max;
    const double width = (hi - lo) / bins;
    for (int i = 0; i <= bins; ++i) h.edges[i] = lo + width * i;
    for (size_t i = 0; i < scores.data.size(); ++i) {
        int b = 0;
        if (width > 0.0)
            b = std::clamp(static_cast<int>((scores.data[i] - lo) / width), 0, bins - 1);
        ++h.counts[b];
    }
    return h;
}

}  // namespace starprune
