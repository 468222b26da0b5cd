#pragma once

#include <vector>

#include "starprune/tensor.hpp"

namespace starprune {

/// Pyramid definition: ordered scale resolutions, per-scale repeat counts,
/// per-scale pruning ratios, warmup boundary, plus the clip/channel layout.
struct ScaleSchedule {
    std::vector<Extent2> scales;        // nondecreasing in both axes
    std::vector<int> iterations;        // per-scale repeat count, >= 1
    std::vector<double> prune_ratios;   // rho_k in [0, 1], 0 for k < warmup_scales
    int warmup_scales = 0;              // leading scales forced to rho = 0
    int channels = 0;                   // feature dimension C
    int clips = 1;                      // generated clip count N (clip 0 is the reference)
    int clip_frames = 1;                // temporal extent T per clip (metadata)

    int num_scales() const { return static_cast<int>(scales.size()); }
    Extent2 final_scale() const { return scales.back(); }

    long long total_iterations() const {
        long long n = 0;
        for (int it : iterations) n += it;
        return n;
    }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const ScaleSchedule&) const = default;
};

/// Number of scale-iterations a clip has completed before iteration `iter`
/// (1-based) of scale `scale_index` runs; equals the clip's history length
/// at that moment.
long long completed_snapshots(const ScaleSchedule& s, int scale_index, int iter);

/// True when iteration `iter` (1-based) of scale k is eligible for pruning.
/// Full (unpruned) passes are forced for warmup scales, for rho = 0, for the
/// last iteration of a multi-iteration scale, and for the first two
/// scale-iterations overall (cross-scale scoring needs two snapshots).
bool prune_eligible(const ScaleSchedule& s, int scale_index, int iter);

}  // namespace starprune
