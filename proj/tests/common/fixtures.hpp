#pragma once

// Randomized pipeline fixtures shared by the unit tests and the acceptance
// suite: seeded schedules, targets, codebooks and assembled runs.

#include <algorithm>
#include <memory>
#include <vector>

#include "starprune/backbone.hpp"
#include "starprune/pipeline.hpp"
#include "starprune/quantize.hpp"
#include "starprune/rng.hpp"
#include "starprune/schedule.hpp"
#include "starprune/synthetic.hpp"

namespace fixtures {

// A valid random schedule: 2-4 scales doubling both axes up to the final
// resolution (8 or 16 per axis), iteration counts 1-3, prune ratios up to
// 0.7 outside the warmup range.
inline starprune::ScaleSchedule random_schedule(uint64_t seed, bool with_ratios) {
    starprune::SplitMix64 g(seed);
    const int num_scales = 2 + static_cast<int>(g.bounded(3));
    const int final_rows = 8 << g.bounded(2);
    const int final_cols = 8 << g.bounded(2);

    starprune::ScaleSchedule s;
    for (int k = 0; k < num_scales; ++k) {
        const int shift = num_scales - 1 - k;
        s.scales.push_back(
            {std::max(1, final_rows >> shift), std::max(1, final_cols >> shift)});
    }
    s.warmup_scales = static_cast<int>(g.bounded(static_cast<uint64_t>(num_scales)));
    for (int k = 0; k < num_scales; ++k) {
        s.iterations.push_back(1 + static_cast<int>(g.bounded(3)));
        double rho = 0.0;
        if (with_ratios && k >= s.warmup_scales)
            rho = 0.1 * static_cast<double>(g.bounded(8));  // 0.0 .. 0.7
        s.prune_ratios.push_back(rho);
    }
    s.channels = 4 << g.bounded(2);  // 4 or 8
    s.clips = 1 + static_cast<int>(g.bounded(2));
    s.validate();
    return s;
}

struct RunSetup {
    starprune::ScaleSchedule schedule;
    std::unique_ptr<starprune::OracleBackbone> backbone;
    starprune::Codebook codebook;
};

inline RunSetup oracle_setup(const starprune::ScaleSchedule& schedule, uint64_t seed,
                             double cutoff = 0.25) {
    RunSetup setup;
    setup.schedule = schedule;
    std::vector<starprune::Tensor> targets;
    for (int t = 0; t <= schedule.clips; ++t)
        targets.push_back(starprune::bandlimited_target(
            schedule.final_scale(), schedule.channels,
            starprune::derive_seed(seed, {1, static_cast<uint64_t>(t)}), cutoff, 8));
    setup.backbone = std::make_unique<starprune::OracleBackbone>(std::move(targets));
    setup.codebook = starprune::build_codebook(starprune::derive_seed(seed, {2}), 64,
                                               schedule.channels, 0.5f);
    return setup;
}

}  // namespace fixtures
