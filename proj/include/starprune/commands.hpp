#pragma once

#include <memory>
#include <string>
#include <vector>

#include "starprune/backbone.hpp"
#include "starprune/config.hpp"
#include "starprune/report.hpp"

namespace starprune {

/// Oracle targets for clips 0..N per the config's target source; every
/// tensor is at the final scale with the schedule's channel count.
std::vector<Tensor> build_targets(const RunConfig& config);

/// Backbone per config (oracle backbones own their targets).
std::unique_ptr<Backbone> make_backbone(const RunConfig& config);

/// Two-pass generation: unpruned reference plus the configured reducer.
/// Emits report.json, final features and reference features as FST1, and
/// per-step mask/score artifacts (FST1 + PGM) into `out_dir`.
RunReport cmd_generate(const RunConfig& config, const std::string& out_dir);

/// One pipeline run per axis value per seed; axis is "ratio", "p" or
/// "method". Writes ablate.csv and ablate.json.
void cmd_ablate(const RunConfig& config, const std::string& axis, const std::string& out_dir);

/// Random-pruning vs token-merging error propagation at the config's
/// study_ratio; writes study.csv and study.json.
void cmd_study(const RunConfig& config, const std::string& out_dir);

/// Unpruned run + per-scale delta spectra and high-frequency energy maps;
/// writes spectrum.json, spectrum.csv and per-scale PGM maps. For the
/// frozen_lowband target the analytic construction's spectra are emitted
/// alongside as spectrum_construction.json.
void cmd_spectrum(const RunConfig& config, const std::string& out_dir);

/// Median-of-R timing comparison between the unpruned and configured runs;
/// writes bench.json and bench.csv (one row per scale).
void cmd_bench(const RunConfig& config, const std::string& out_dir);

}  // namespace starprune
