#include "starprune/pipeline.hpp"

#include <chrono>
#include <cstring>

#include "starprune/baselines.hpp"
#include "starprune/errors.hpp"
#include "starprune/interpolate.hpp"
#include "starprune/partial_update.hpp"
#include "starprune/rng.hpp"

namespace starprune {

std::string reducer_kind_name(ReducerKind kind) {
    switch (kind) {
        case ReducerKind::None: return "none";
        case ReducerKind::Sttp: return "sttp";
        case ReducerKind::SpatialOnly: return "spatial_only";
        case ReducerKind::Random: return "random";
        case ReducerKind::Merge: return "merge";
    }
    return "none";
}

ReducerKind reducer_kind_from_name(const std::string& name) {
    if (name == "none") return ReducerKind::None;
    if (name == "sttp") return ReducerKind::Sttp;
    if (name == "spatial_only") return ReducerKind::SpatialOnly;
    if (name == "random") return ReducerKind::Random;
    if (name == "merge") return ReducerKind::Merge;
    throw std::invalid_argument("reducer: unknown kind '" + name + "'");
}

long long PipelineResult::total_backbone_ns() const {
    long long n = 0;
    for (const auto& r : records) n += r.backbone_ns;
    return n;
}

long long PipelineResult::total_reduce_ns() const {
    long long n = 0;
    for (const auto& r : records) n += r.reduce_ns;
    return n;
}

long long PipelineResult::total_processed_tokens() const {
    long long n = 0;
    for (const auto& r : records) n += r.processed_tokens;
    return n;
}

long long PipelineResult::total_full_tokens() const {
    long long n = 0;
    for (const auto& r : records) n += r.full_tokens;
    return n;
}

namespace {

using Clock = std::chrono::steady_clock;

long long ns_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
}

std::vector<Position> all_positions(Extent2 extent) {
    std::vector<Position> out;
    out.reserve(static_cast<size_t>(extent.count()));
    for (int r = 0; r < extent.rows; ++r)
        for (int c = 0; c < extent.cols; ++c) out.push_back({r, c});
    return out;
}

void check_prediction_size(const std::vector<float>& pred, int m, int channels) {
    if (pred.size() != static_cast<size_t>(m) * channels)
        throw ShapeError("pipeline: backbone returned " + std::to_string(pred.size()) +
                         " values for " + std::to_string(m) + " tokens x " +
                         std::to_string(channels) + " channels");
}

}  // namespace

PipelineResult run_pipeline(const ScaleSchedule& schedule, const Backbone& backbone,
                            const Codebook& codebook, const ReducerConfig& reducer,
                            const PipelineOptions& options) {
    schedule.validate();
    codebook.validate();
    if (backbone.channels() != schedule.channels)
        throw std::invalid_argument("pipeline: backbone channels " +
                                    std::to_string(backbone.channels()) +
                                    " do not match schedule channels " +
                                    std::to_string(schedule.channels));
    if (codebook.channels != schedule.channels)
        throw std::invalid_argument("pipeline: codebook channels " +
                                    std::to_string(codebook.channels) +
                                    " do not match schedule channels " +
                                    std::to_string(schedule.channels));
    if (reducer.kind == ReducerKind::Sttp || reducer.kind == ReducerKind::SpatialOnly)
        if (!(reducer.p >= 1.0))
            throw std::invalid_argument("pipeline: fusion degree p must be >= 1");

    const Extent2 final_scale = schedule.final_scale();
    const long long full_tokens = final_scale.count();
    const int C = schedule.channels;

    PipelineResult result;
    result.clips.resize(schedule.clips + 1);

    for (int t = 0; t <= schedule.clips; ++t) {
        ClipState& clip = result.clips[t];
        clip.clip_index = t;
        clip.feature = Tensor(final_scale.rows, final_scale.cols, C, 0.0f);
        clip.history.reserve(static_cast<size_t>(schedule.total_iterations()));

        for (int k = 0; k < schedule.num_scales(); ++k) {
            const Extent2 scale = schedule.scales[k];
            for (int it = 1; it <= schedule.iterations[k]; ++it) {
                IterationRecord rec;
                rec.clip_index = t;
                rec.scale_index = k;
                rec.iter = it;
                rec.full_tokens = full_tokens;
                rec.grid_tokens = scale.count();

                Tensor input = next_input(clip.feature, scale);

                // --- reduction decision -----------------------------------
                auto t_reduce = Clock::now();
                std::optional<PruneMask> mask;
                std::optional<FusedScoreMap> scores;
                bool merge_step = false;
                if (t > 0) {
                    FusedScoreMap score_map;
                    switch (reducer.kind) {
                        case ReducerKind::None:
                            break;
                        case ReducerKind::Sttp:
                            mask = mask_for(schedule, result.clips, t, k, it, reducer.p,
                                            &score_map);
                            if (mask) scores = std::move(score_map);
                            break;
                        case ReducerKind::SpatialOnly:
                            mask = spatial_only_mask_for(schedule, result.clips, t, k, it,
                                                         reducer.p, &score_map);
                            if (mask) scores = std::move(score_map);
                            break;
                        case ReducerKind::Random:
                            if (prune_eligible(schedule, k, it)) {
                                // one stream per clip so masks nest across scales
                                mask = random_mask(final_scale, schedule.prune_ratios[k],
                                                   derive_seed(reducer.seed,
                                                               {static_cast<uint64_t>(t)}));
                                mask->clip_index = t;
                                mask->scale_index = k;
                            }
                            break;
                        case ReducerKind::Merge:
                            merge_step = prune_eligible(schedule, k, it);
                            break;
                    }
                }
                rec.reduce_ns += ns_since(t_reduce);

                if (scores) {
                    rec.has_scores = true;
                    rec.score_stats = field_stats(scores->data);
                }

                // --- predict / quantize / accumulate ----------------------
                if (mask) {
                    rec.pruned = true;
                    rec.processed_tokens = mask->keep_count;

                    t_reduce = Clock::now();
                    BinaryMask mask_k = resample_mask(mask->keep, scale);
                    SelectedTokens sel = select_tokens(input, mask_k);
                    rec.reduce_ns += ns_since(t_reduce);
                    rec.backbone_tokens = sel.count();

                    if (sel.count() == 0) {
                        // nothing selected: the feature is carried over unchanged
                        clip.history.push_back(clip.feature);
                    } else {
                        auto t_backbone = Clock::now();
                        std::vector<float> pred = backbone.predict(
                            sel.features.data(), sel.count(), sel.positions, scale, clip);
                        check_prediction_size(pred, sel.count(), C);
                        std::vector<int32_t> codes(sel.count());
                        quantize_rows(pred.data(), sel.count(), codebook, codes.data());
                        rec.backbone_ns += ns_since(t_backbone);

                        t_reduce = Clock::now();
                        Tensor scattered =
                            scatter_tokens(sel.positions, pred.data(), sel.count(), C, scale);
                        rec.reduce_ns += ns_since(t_reduce);

                        t_backbone = Clock::now();
                        clip.feature = partial_accumulate(clip.feature, scattered, mask->keep);
                        rec.backbone_ns += ns_since(t_backbone);
                        clip.history.push_back(clip.feature);
                    }
                } else if (merge_step) {
                    rec.merged = true;
                    rec.processed_tokens = full_tokens;  // every position still gets updated

                    t_reduce = Clock::now();
                    MergeResult merged = merge_tokens(input, schedule.prune_ratios[k]);
                    rec.reduce_ns += ns_since(t_reduce);
                    rec.backbone_tokens = merged.count();

                    auto t_backbone = Clock::now();
                    std::vector<float> pred = backbone.predict(
                        merged.features.data(), merged.count(), merged.positions, scale, clip);
                    check_prediction_size(pred, merged.count(), C);
                    rec.backbone_ns += ns_since(t_backbone);

                    t_reduce = Clock::now();
                    Tensor residual_grid = unmerge(pred, merged);
                    rec.reduce_ns += ns_since(t_reduce);

                    t_backbone = Clock::now();
                    TokenMap tokens = quantize(residual_grid, codebook, k);
                    clip.feature = accumulate(clip.feature, tokens);
                    rec.backbone_ns += ns_since(t_backbone);
                    clip.history.push_back(clip.feature);
                } else {
                    rec.processed_tokens = full_tokens;
                    rec.backbone_tokens = scale.count();

                    auto t_backbone = Clock::now();
                    const int m = static_cast<int>(scale.count());
                    std::vector<Position> positions = all_positions(scale);
                    std::vector<float> pred =
                        backbone.predict(input.data(), m, positions, scale, clip);
                    check_prediction_size(pred, m, C);
                    TokenMap tokens;
                    tokens.scale_index = k;
                    tokens.rows = scale.rows;
                    tokens.cols = scale.cols;
                    tokens.codes.resize(static_cast<size_t>(m));
                    quantize_rows(pred.data(), m, codebook, tokens.codes.data());
                    Tensor embedded(scale.rows, scale.cols, C);
                    std::memcpy(embedded.data(), pred.data(), sizeof(float) * pred.size());
                    tokens.embedded = std::move(embedded);
                    clip.feature = accumulate(clip.feature, tokens);
                    rec.backbone_ns += ns_since(t_backbone);
                    clip.history.push_back(clip.feature);
                }

                if (options.capture) {
                    StepCapture cap;
                    cap.clip_index = t;
                    cap.scale_index = k;
                    cap.iter = it;
                    cap.mask = mask;
                    cap.scores = scores;
                    result.captures.push_back(std::move(cap));
                }
                result.records.push_back(rec);
            }
        }
    }
    return result;
}

}  // namespace starprune
