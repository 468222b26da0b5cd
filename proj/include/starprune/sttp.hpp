#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "starprune/pyramid.hpp"
#include "starprune/schedule.hpp"
#include "starprune/tensor.hpp"

namespace starprune {

constexpr double kMaxNorm = std::numeric_limits<double>::infinity();

enum class SimilarityKind { Spatial, Temporal };

/// Per-position cosine similarity map at final resolution, values in [-1, 1].
struct SimilarityMap {
    SimilarityKind kind = SimilarityKind::Spatial;
    int clip_index = 0;
    int scale_index = 0;
    Field data;
};

/// lp-fusion of the two dissimilarity terms; nonnegative scores.
struct FusedScoreMap {
    int clip_index = 0;
    int scale_index = 0;
    double p = 2.0;
    Field data;
};

/// Binary keep/skip decision at final resolution. popcount(keep) is exactly
/// keep_count == round_half_up((1 - rho) * rows * cols).
struct PruneMask {
    int clip_index = 0;
    int scale_index = 0;
    BinaryMask keep;
    long long keep_count = 0;
};

struct ScoreStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

struct Histogram {
    std::vector<double> edges;       // bins + 1 monotone edges
    std::vector<long long> counts;   // per bin
    ScoreStats stats;
};

/// Per-position channel-axis cosine between two equal-shape feature maps.
/// Both vectors zero -> 1 (converged); exactly one zero -> 0.
SimilarityMap spatial_similarity(const Tensor& f_prev, const Tensor& f_curr);

/// Same computation across clips; the caller passes the predecessor clip's
/// feature (the reference clip's final-scale feature for clip 1).
SimilarityMap temporal_similarity(const Tensor& f_prev_clip, const Tensor& f_curr_clip);

/// Per position: [(1-s_sp)^p + (1-s_tmp)^p]^(1/p); max of the two
/// dissimilarities for p = inf. Requires p >= 1.
FusedScoreMap fuse_scores(const SimilarityMap& spatial, const SimilarityMap& temporal, double p);

/// Keeps the keep_count highest-scoring positions, ties broken by ascending
/// row-major index. rho = 0 keeps everything, rho = 1 keeps nothing.
PruneMask build_mask(const FusedScoreMap& scores, double ratio);

/// round-half-up count of kept positions for a ratio over n tokens.
long long keep_count_for(double ratio, long long n);

/// Mask decision for one (clip, scale, iteration) given the states generated
/// so far. Returns nullopt when the step runs full (warmup scale, final
/// iteration of a multi-iteration scale, or rho = 0). `iter` is 1-based.
/// When a mask is produced and `scores_out` is non-null the fused map is
/// copied there. Throws StateError when required history is missing.
std::optional<PruneMask> mask_for(const ScaleSchedule& schedule,
                                  const std::vector<ClipState>& clips, int clip_index,
                                  int scale_index, int iter, double p,
                                  FusedScoreMap* scores_out = nullptr);

/// All mask decisions of a completed run, ordered (clip, scale, iteration)
/// with clips 1..N (clip 0 never prunes).
struct MaskPlanEntry {
    int clip_index = 0;
    int scale_index = 0;
    int iter = 0;
    std::optional<PruneMask> mask;
};
std::vector<MaskPlanEntry> schedule_masks(const ScaleSchedule& schedule,
                                          const std::vector<ClipState>& clips, double p = 2.0);

/// Equal-width histogram over [min, max] of the scores plus spread
/// statistics; a constant map occupies a single bin.
Histogram score_histogram(const FusedScoreMap& scores, int bins);

ScoreStats field_stats(const Field& f);

}  // namespace starprune
