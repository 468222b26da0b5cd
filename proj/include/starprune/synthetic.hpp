#pragma once

#include <cstdint>
#include <vector>

#include "starprune/tensor.hpp"

namespace starprune {

/// Seeded sum of 2D cosine waves with spatial frequencies at or below
/// `cutoff` (a fraction of the Nyquist rate 0.5 cycles/token): low cutoffs
/// give smooth fields whose energy coarse scales can capture early. Works
/// at any resolution; deterministic per seed.
Tensor bandlimited_target(Extent2 extent, int channels, uint64_t seed, double cutoff,
                          int waves = 8, float amplitude = 1.0f);

/// Per-clip targets for a synthetic scene: a near-zero background with one
/// bright square that shifts `velocity` tokens to the right per clip
/// (wrapping). Index 0 is the reference clip. The localized, moving
/// structure produces genuine spatial detail and temporal change.
std::vector<Tensor> moving_square_targets(Extent2 extent, int channels, int num_clips,
                                          uint64_t seed, int square_size, int velocity,
                                          float background = 0.0f, float brightness = 1.0f);

/// Analytic snapshot sequence whose low-frequency content freezes after
/// snapshot k0 while a Nyquist checkerboard keeps changing at every step:
/// consecutive-snapshot deltas beyond k0 carry energy only in the outermost
/// frequency band. `snapshots` must be >= 2.
std::vector<Tensor> frozen_lowband_history(Extent2 extent, int channels, int snapshots, int k0,
                                           uint64_t seed);

}  // namespace starprune
