#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "starprune/pipeline.hpp"
#include "starprune/schedule.hpp"

namespace starprune {

/// Everything a run needs, loadable from a flat key = value text file.
/// serialize() emits a canonical form that parse() reads back losslessly
/// (round trip is exact, including doubles and the "inf" norm degree).
struct RunConfig {
    // schedule
    std::vector<Extent2> scales = {{4, 4}, {8, 8}, {16, 16}, {32, 32}};
    std::vector<int> iterations = {1, 1, 1, 1};
    std::vector<double> ratios = {0.0, 0.0, 0.0, 0.0};
    int warmup = 2;
    int channels = 8;
    int clips = 2;
    int clip_frames = 1;

    // backbone
    std::string backbone = "oracle";  // oracle | mixer
    uint64_t backbone_seed = 7;
    int mixer_heads = 2;
    int mixer_layers = 2;

    // reducer
    std::string reducer = "none";  // none | sttp | spatial_only | random | merge
    double p = 2.0;                // fusion norm degree; may be inf
    uint64_t reducer_seed = 0;

    // codebook
    int codebook_size = 64;
    uint64_t codebook_seed = 9;
    double codebook_spread = 0.5;

    // target for the oracle backbone
    std::string target = "bandlimited";  // bandlimited | moving_square | frozen_lowband | fst1
    std::string target_path;             // FST1 file for target = fst1
    uint64_t target_seed = 3;
    double target_cutoff = 0.25;         // band-limited generator cutoff
    int target_waves = 8;

    // metrics / outputs
    double peak = 2.0;
    std::string out_dir = "out";

    // benchmarking and sweeps
    int repetitions = 5;
    int seeds = 20;
    int bands = 4;
    double highfreq_cutoff = 0.35;
    std::vector<double> ratio_axis = {0.2, 0.4, 0.6};
    std::vector<double> p_axis = {1.0, 2.0, kMaxNorm};
    std::vector<std::string> method_axis = {"random", "spatial_only", "sttp"};
    double study_ratio = 0.4;

    bool operator==(const RunConfig&) const = default;

    ScaleSchedule to_schedule() const;
    ReducerConfig to_reducer() const;

    /// Field-level validation with named errors (schedule checks included).
    void validate() const;
};

/// Round-trip-exact double formatting (shortest form that reparses equal).
std::string format_double(double v);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);
void save_config(const std::string& path, const RunConfig& config);

}  // namespace starprune
