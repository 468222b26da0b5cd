#include "starprune/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "starprune/backbone.hpp"
#include "starprune/errors.hpp"
#include "starprune/metrics.hpp"
#include "starprune/pipeline.hpp"
#include "starprune/rng.hpp"
#include "starprune/synthetic.hpp"

namespace starprune {

PruneMask random_mask(Extent2 shape, double ratio, uint64_t seed) {
    const long long n = shape.count();
    const long long keep = keep_count_for(ratio, n);

    std::vector<long long> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0LL);
    SplitMix64 g(derive_seed(seed, {0x6D61736BULL}));  // "mask" substream
    for (long long i = n - 1; i > 0; --i)
        std::swap(perm[static_cast<size_t>(i)],
                  perm[static_cast<size_t>(g.bounded(static_cast<uint64_t>(i) + 1))]);

    PruneMask mask;
    mask.keep = BinaryMask(shape.rows, shape.cols, 0);
    mask.keep_count = keep;
    for (long long i = 0; i < keep; ++i) mask.keep[static_cast<size_t>(perm[i])] = 1;
    return mask;
}

namespace {

SimilarityMap neutral_temporal(const SimilarityMap& like) {
    SimilarityMap m;
    m.kind = SimilarityKind::Temporal;
    m.clip_index = like.clip_index;
    m.scale_index = like.scale_index;
    m.data = Field(like.data.rows(), like.data.cols(), 1.0f);
    return m;
}

}  // namespace

PruneMask spatial_only_mask(const Tensor& f_prev, const Tensor& f_curr, double ratio, double p) {
    SimilarityMap sp = spatial_similarity(f_prev, f_curr);
    FusedScoreMap scores = fuse_scores(sp, neutral_temporal(sp), p);
    return build_mask(scores, ratio);
}

std::optional<PruneMask> spatial_only_mask_for(const ScaleSchedule& schedule,
                                               const std::vector<ClipState>& clips,
                                               int clip_index, int scale_index, int iter,
                                               double p, FusedScoreMap* scores_out) {
    if (clip_index == 0)
        return std::nullopt;
    if (!prune_eligible(schedule, scale_index, iter))
        return std::nullopt;

    const ClipState& clip = clips[clip_index];
    const long long done = completed_snapshots(schedule, scale_index, iter);
    if (done < 2 || static_cast<long long>(clip.history.size()) < done)
        throw StateError("spatial_only_mask_for: missing history snapshot for clip " +
                         std::to_string(clip_index) + " scale " + std::to_string(scale_index));

    SimilarityMap sp = spatial_similarity(clip.history[done - 2], clip.history[done - 1]);
    sp.clip_index = clip_index;
    sp.scale_index = scale_index;
    FusedScoreMap scores = fuse_scores(sp, neutral_temporal(sp), p);
    if (scores_out)
        *scores_out = scores;
    PruneMask mask = build_mask(scores, schedule.prune_ratios[scale_index]);
    mask.clip_index = clip_index;
    mask.scale_index = scale_index;
    return mask;
}

// ---------------------------------------------------------------------------
// Token merging

namespace {

double cosine_rows(const float* a, const float* b, int C) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int ch = 0; ch < C; ++ch) {
        dot += static_cast<double>(a[ch]) * b[ch];
        na += static_cast<double>(a[ch]) * a[ch];
        nb += static_cast<double>(b[ch]) * b[ch];
    }
    if (na == 0.0 && nb == 0.0) return 1.0;
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

MergeResult merge_tokens(const Tensor& input, double ratio) {
    if (ratio < 0.0 || ratio > 0.5)
        throw std::invalid_argument("merge_tokens: ratio must be in [0, 0.5]");

    const int rows = input.rows(), cols = input.cols(), C = input.channels();
    const long long n = static_cast<long long>(rows) * cols;
    const float* base = input.data();

    MergeResult out;
    out.channels = C;
    out.extent = {rows, cols};
    out.row_of.assign(static_cast<size_t>(n), -1);

    // destinations = even linear indices, sources = odd
    std::vector<long long> dst, src;
    for (long long i = 0; i < n; ++i) ((i & 1) ? src : dst).push_back(i);

    long long r = static_cast<long long>(std::floor(ratio * static_cast<double>(n) + 0.5));
    r = std::min<long long>(r, static_cast<long long>(src.size()));

    struct Match {
        long long src_idx = 0;
        long long dst_idx = 0;
        double sim = -2.0;
    };
    std::vector<Match> matches(src.size());
    for (size_t si = 0; si < src.size(); ++si) {
        const float* sv = base + static_cast<size_t>(src[si]) * C;
        Match best;
        best.src_idx = src[si];
        for (long long d : dst) {
            const double sim = cosine_rows(sv, base + static_cast<size_t>(d) * C, C);
            if (sim > best.sim) {
                best.sim = sim;
                best.dst_idx = d;
            }
        }
        matches[si] = best;
    }
    // most similar pairs merge first; ties fall to the lower source index
    std::stable_sort(matches.begin(), matches.end(),
                     [](const Match& a, const Match& b) { return a.sim > b.sim; });

    std::vector<long long> merged_into(static_cast<size_t>(n), -1);  // src -> dst
    std::vector<std::vector<long long>> group(static_cast<size_t>(n));
    out.merged_pairs = static_cast<int>(r);
    for (long long i = 0; i < r; ++i) {
        merged_into[static_cast<size_t>(matches[i].src_idx)] = matches[i].dst_idx;
        group[static_cast<size_t>(matches[i].dst_idx)].push_back(matches[i].src_idx);
    }

    for (long long i = 0; i < n; ++i) {
        if (merged_into[static_cast<size_t>(i)] >= 0)
            continue;  // this source was absorbed by its destination
        const int row = static_cast<int>(out.positions.size());
        out.positions.push_back({static_cast<int>(i / cols), static_cast<int>(i % cols)});
        out.row_of[static_cast<size_t>(i)] = row;

        const std::vector<long long>& members = group[static_cast<size_t>(i)];
        if (members.empty()) {
            const float* v = base + static_cast<size_t>(i) * C;
            out.features.insert(out.features.end(), v, v + C);
        } else {
            std::vector<double> mean(static_cast<size_t>(C), 0.0);
            const double count = 1.0 + static_cast<double>(members.size());
            const float* v = base + static_cast<size_t>(i) * C;
            for (int ch = 0; ch < C; ++ch) mean[ch] = v[ch];
            for (long long s : members) {
                const float* sv = base + static_cast<size_t>(s) * C;
                for (int ch = 0; ch < C; ++ch) mean[ch] += sv[ch];
            }
            for (int ch = 0; ch < C; ++ch)
                out.features.push_back(static_cast<float>(mean[ch] / count));
            for (long long s : members) out.row_of[static_cast<size_t>(s)] = row;
        }
    }
    return out;
}

Tensor unmerge(const std::vector<float>& outputs, const MergeResult& map) {
    if (outputs.size() != static_cast<size_t>(map.count()) * map.channels)
        throw ShapeError("unmerge: output rows do not match the merge map");
    Tensor grid(map.extent.rows, map.extent.cols, map.channels);
    const long long n = map.extent.count();
    for (long long i = 0; i < n; ++i) {
        const int row = map.row_of[static_cast<size_t>(i)];
        const float* src = outputs.data() + static_cast<size_t>(row) * map.channels;
        float* dstp = grid.data() + static_cast<size_t>(i) * map.channels;
        for (int ch = 0; ch < map.channels; ++ch) dstp[ch] = src[ch];
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Pruning-vs-merging error propagation

StudyResult error_propagation_study(const ScaleSchedule& schedule, double ratio, int num_seeds,
                                    uint64_t base_seed, int codebook_size, float codebook_spread,
                                    double target_cutoff) {
    if (num_seeds < 1)
        throw std::invalid_argument("error_propagation_study: num_seeds must be >= 1");
    if (ratio < 0.0 || ratio > 0.5)
        throw std::invalid_argument(
            "error_propagation_study: ratio must be in [0, 0.5] (merging caps at half)");

    ScaleSchedule sched = schedule;
    for (int k = sched.warmup_scales; k < sched.num_scales(); ++k) sched.prune_ratios[k] = ratio;
    sched.validate();
    const Extent2 final_scale = sched.final_scale();

    StudyResult result;
    result.ratio = ratio;
    result.seeds = num_seeds;
    result.target_kind = "bandlimited cosine fields, cutoff " + std::to_string(target_cutoff);

    const int K = sched.num_scales();
    // history index of each scale's last snapshot
    std::vector<size_t> last_snap(static_cast<size_t>(K));
    {
        size_t acc = 0;
        for (int k = 0; k < K; ++k) {
            acc += static_cast<size_t>(sched.iterations[k]);
            last_snap[static_cast<size_t>(k)] = acc - 1;
        }
    }

    auto scale_mse = [&](const PipelineResult& run, const PipelineResult& base, int k) {
        double total = 0.0;
        for (int t = 1; t <= sched.clips; ++t)
            total += mse(run.clips[t].history[last_snap[static_cast<size_t>(k)]],
                         base.clips[t].history[last_snap[static_cast<size_t>(k)]]);
        return total / sched.clips;
    };

    for (int s = 0; s < num_seeds; ++s) {
        const uint64_t su = static_cast<uint64_t>(s);
        std::vector<Tensor> targets;
        targets.reserve(static_cast<size_t>(sched.clips) + 1);
        for (int t = 0; t <= sched.clips; ++t)
            targets.push_back(bandlimited_target(final_scale, sched.channels,
                                                 derive_seed(base_seed, {su, 1, static_cast<uint64_t>(t)}),
                                                 target_cutoff));
        OracleBackbone backbone(std::move(targets));
        Codebook codebook = build_codebook(derive_seed(base_seed, {su, 2}), codebook_size,
                                           sched.channels, codebook_spread);

        PipelineResult base = run_pipeline(sched, backbone, codebook, {ReducerKind::None});
        ReducerConfig prune_cfg{ReducerKind::Random, 2.0, derive_seed(base_seed, {su, 3})};
        PipelineResult pruned = run_pipeline(sched, backbone, codebook, prune_cfg);
        PipelineResult merged = run_pipeline(sched, backbone, codebook, {ReducerKind::Merge});

        for (int k = 0; k < K; ++k) {
            result.prune_cells.push_back({k, s, scale_mse(pruned, base, k)});
            result.merge_cells.push_back({k, s, scale_mse(merged, base, k)});
        }
    }

    auto summarize = [&](const std::vector<StudyCell>& cells) {
        std::vector<StudyScaleStat> stats(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) stats[static_cast<size_t>(k)].scale_index = k;
        for (const StudyCell& c : cells)
            stats[static_cast<size_t>(c.scale_index)].mean_mse += c.mse;
        for (StudyScaleStat& st : stats) st.mean_mse /= num_seeds;
        for (const StudyCell& c : cells) {
            const double d = c.mse - stats[static_cast<size_t>(c.scale_index)].mean_mse;
            stats[static_cast<size_t>(c.scale_index)].var_mse += d * d;
        }
        for (StudyScaleStat& st : stats) st.var_mse /= num_seeds;
        return stats;
    };
    result.prune = summarize(result.prune_cells);
    result.merge = summarize(result.merge_cells);
    return result;
}

}  // namespace starprune
