#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "starprune/schedule.hpp"
#include "starprune/sttp.hpp"
#include "starprune/tensor.hpp"

namespace starprune {

/// Seeded uniform keep-mask with the same count rule as build_mask. The
/// kept set is the first keep_count entries of one seeded permutation, so
/// masks drawn from the same seed nest across ratios: the positions kept at
/// a higher ratio are a subset of those kept at a lower one, and equal
/// ratios reproduce the identical mask (the draw-once behaviour the
/// pruning-vs-merging comparison requires).
PruneMask random_mask(Extent2 shape, double ratio, uint64_t seed);

/// Pruning mask from the cross-scale similarity alone: the temporal term is
/// forced to similarity 1 (dissimilarity 0) before fusion.
PruneMask spatial_only_mask(const Tensor& f_prev, const Tensor& f_curr, double ratio,
                            double p = 2.0);

/// Scheduled variant mirroring mask_for: same eligibility, history indexing
/// and ratio lookup, with the temporal term neutralized.
std::optional<PruneMask> spatial_only_mask_for(const ScaleSchedule& schedule,
                                               const std::vector<ClipState>& clips,
                                               int clip_index, int scale_index, int iter,
                                               double p, FusedScoreMap* scores_out = nullptr);

/// Bipartite soft matching over one scale's token grid. Tokens are split by
/// alternating row-major parity (even linear index = destination, odd =
/// source); each source is matched to its most-similar destination by
/// channel cosine; the top round(ratio * N) pairs merge into their group's
/// arithmetic mean. `row_of` maps every grid token to the merged-set row
/// that now represents it.
struct MergeResult {
    std::vector<Position> positions;  // representative position per merged row
    std::vector<float> features;      // (m', C) packed group means
    int channels = 0;
    Extent2 extent;
    std::vector<int> row_of;          // grid linear index -> merged row
    int merged_pairs = 0;

    int count() const { return static_cast<int>(positions.size()); }
};

MergeResult merge_tokens(const Tensor& input, double ratio);

/// Copies each merged row's output back to every grid position it
/// represents. With ratio 0 this is a bitwise identity round trip.
Tensor unmerge(const std::vector<float>& outputs, const MergeResult& map);

/// Per-scale reconstruction-error statistics of random pruning vs token
/// merging at one matched ratio, across seeds. Each seed draws its own
/// band-limited target, codebook and mask stream; errors are MSE against
/// the same seed's unreduced pipeline, measured at each scale's last
/// snapshot on the generated clips.
struct StudyCell {
    int scale_index = 0;
    int seed_index = 0;
    double mse = 0.0;
};

struct StudyScaleStat {
    int scale_index = 0;
    double mean_mse = 0.0;
    double var_mse = 0.0;
};

struct StudyResult {
    double ratio = 0.0;
    int seeds = 0;
    std::string target_kind;  // names the synthetic input family the study ran on
    std::vector<StudyCell> prune_cells;
    std::vector<StudyCell> merge_cells;
    std::vector<StudyScaleStat> prune;
    std::vector<StudyScaleStat> merge;
};

StudyResult error_propagation_study(const ScaleSchedule& schedule, double ratio, int num_seeds,
                                    uint64_t base_seed, int codebook_size, float codebook_spread,
                                    double target_cutoff);

}  // namespace starprune
