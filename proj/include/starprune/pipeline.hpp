#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starprune/backbone.hpp"
#include "starprune/pyramid.hpp"
#include "starprune/quantize.hpp"
#include "starprune/schedule.hpp"
#include "starprune/sttp.hpp"

namespace starprune {

enum class ReducerKind { None, Sttp, SpatialOnly, Random, Merge };

std::string reducer_kind_name(ReducerKind kind);
ReducerKind reducer_kind_from_name(const std::string& name);

/// Token-reduction strategy applied to generated clips (the reference clip
/// always runs full). `p` is the fusion norm degree for the score-based
/// kinds; `seed` feeds the random kind's mask stream.
struct ReducerConfig {
    ReducerKind kind = ReducerKind::None;
    double p = 2.0;
    uint64_t seed = 0;

    bool operator==(const ReducerConfig&) const = default;
};

/// One scale-iteration's accounting. Token counts are reported in two
/// domains: processed_tokens / full_tokens count updated positions in
/// final-resolution mask units (processed == keep_count when a mask was
/// applied), while backbone_tokens / grid_tokens count what the backbone
/// actually saw at the scale's native grid.
struct IterationRecord {
    int clip_index = 0;
    int scale_index = 0;
    int iter = 0;  // 1-based
    long long processed_tokens = 0;
    long long full_tokens = 0;
    long long backbone_tokens = 0;
    long long grid_tokens = 0;
    bool pruned = false;
    bool merged = false;
    bool has_scores = false;
    long long backbone_ns = 0;  // predict + quantize
    long long reduce_ns = 0;    // scoring, mask build, resample, select, scatter
    ScoreStats score_stats;
};

/// Optional per-step capture of the mask decision and fused scores, for
/// tests and artifact emission.
struct StepCapture {
    int clip_index = 0;
    int scale_index = 0;
    int iter = 0;
    std::optional<PruneMask> mask;
    std::optional<FusedScoreMap> scores;
};

struct PipelineOptions {
    bool capture = false;  // retain masks and score maps per step
};

struct PipelineResult {
    std::vector<ClipState> clips;  // index 0 = reference clip
    std::vector<IterationRecord> records;
    std::vector<StepCapture> captures;  // populated when options.capture

    long long total_backbone_ns() const;
    long long total_reduce_ns() const;
    long long total_processed_tokens() const;
    long long total_full_tokens() const;
};

/// Generates clips 0..N sequentially, scales coarse-to-fine, iterations in
/// order: downsample the accumulated feature to the scale (the conditioning
/// input), predict residual tokens, optionally reduce them, quantize, and
/// accumulate — partially under a mask so skipped positions stay bitwise
/// untouched. Deterministic for fixed inputs and seeds.
PipelineResult run_pipeline(const ScaleSchedule& schedule, const Backbone& backbone,
                            const Codebook& codebook, const ReducerConfig& reducer = {},
                            const PipelineOptions& options = {});

}  // namespace starprune
