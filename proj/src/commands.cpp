#include "starprune/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "starprune/baselines.hpp"
#include "starprune/errors.hpp"
#include "starprune/fst1.hpp"
#include "starprune/image_io.hpp"
#include "starprune/metrics.hpp"
#include "starprune/pipeline.hpp"
#include "starprune/rng.hpp"
#include "starprune/spectral.hpp"
#include "starprune/synthetic.hpp"

namespace starprune {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<Tensor> build_targets(const RunConfig& config) {
    const ScaleSchedule schedule = config.to_schedule();
    const Extent2 final_scale = schedule.final_scale();
    const int C = schedule.channels;
    std::vector<Tensor> targets;

    if (config.target == "bandlimited") {
        targets.reserve(static_cast<size_t>(config.clips) + 1);
        for (int t = 0; t <= config.clips; ++t)
            targets.push_back(
                bandlimited_target(final_scale, C,
                                   derive_seed(config.target_seed, {static_cast<uint64_t>(t)}),
                                   config.target_cutoff, config.target_waves));
    } else if (config.target == "moving_square") {
        const int side = std::max(1, std::min(final_scale.rows, final_scale.cols) / 4);
        targets = moving_square_targets(final_scale, C, config.clips, config.target_seed, side,
                                        /*velocity=*/std::max(1, side / 2));
    } else if (config.target == "frozen_lowband") {
        // the last analytic snapshot doubles as a static generation target
        std::vector<Tensor> seq = frozen_lowband_history(
            final_scale, C, std::max(2, schedule.num_scales()),
            std::max(1, schedule.warmup_scales), config.target_seed);
        targets.assign(static_cast<size_t>(config.clips) + 1, seq.back());
    } else if (config.target == "fst1") {
        Tensor loaded = fst1_load_tensor(config.target_path);
        if (loaded.rows() != final_scale.rows || loaded.cols() != final_scale.cols ||
            loaded.channels() != C)
            throw std::invalid_argument("target: FST1 tensor " + loaded.shape_str() +
                                        " does not match the schedule's final scale (" +
                                        std::to_string(final_scale.rows) + "," +
                                        std::to_string(final_scale.cols) + "," +
                                        std::to_string(C) + ")");
        targets.assign(static_cast<size_t>(config.clips) + 1, loaded);
    } else {
        throw std::invalid_argument("target: unknown generator '" + config.target + "'");
    }
    return targets;
}

std::unique_ptr<Backbone> make_backbone(const RunConfig& config) {
    if (config.backbone == "oracle")
        return std::make_unique<OracleBackbone>(build_targets(config));
    if (config.backbone == "mixer")
        return std::make_unique<MixerBackbone>(config.backbone_seed, config.channels,
                                               config.mixer_heads, config.mixer_layers);
    throw std::invalid_argument("backbone: unknown kind '" + config.backbone + "'");
}

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

QualitySummary mean_quality(const PipelineResult& run, const PipelineResult& reference,
                            int clips, double peak) {
    QualitySummary total;
    bool exact = true;
    for (int t = 1; t <= clips; ++t) {
        const QualitySummary q =
            compare(run.clips[t].feature, reference.clips[t].feature, peak);
        total.mse += q.mse;
        total.psnr += q.psnr;
        total.ssim += q.ssim;
        exact = exact && q.exact_match;
    }
    total.mse /= clips;
    total.psnr /= clips;
    total.ssim /= clips;
    total.exact_match = exact;
    return total;
}

std::string step_tag(const StepCapture& cap) {
    return "c" + std::to_string(cap.clip_index) + "_s" + std::to_string(cap.scale_index) +
           "_i" + std::to_string(cap.iter);
}

double median(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    const size_t mid = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
    double hi = xs[mid];
    if (xs.size() % 2 == 0) {
        std::nth_element(xs.begin(), xs.begin() + mid - 1, xs.end());
        return 0.5 * (hi + xs[mid - 1]);
    }
    return hi;
}

/// Derives a per-seed config: independent targets, codebook and mask
/// streams while the structural fields stay fixed.
RunConfig seed_variant(const RunConfig& base, int seed_index) {
    RunConfig c = base;
    const uint64_t s = static_cast<uint64_t>(seed_index);
    c.target_seed = derive_seed(base.target_seed, {s, 1});
    c.codebook_seed = derive_seed(base.codebook_seed, {s, 2});
    c.reducer_seed = derive_seed(base.reducer_seed, {s, 3});
    return c;
}

}  // namespace

RunReport cmd_generate(const RunConfig& config, const std::string& out_dir) {
    config.validate();
    ensure_dir(out_dir);
    const ScaleSchedule schedule = config.to_schedule();
    const Codebook codebook =
        build_codebook(config.codebook_seed, config.codebook_size, config.channels,
                       static_cast<float>(config.codebook_spread));
    std::unique_ptr<Backbone> backbone = make_backbone(config);

    PipelineResult reference = run_pipeline(schedule, *backbone, codebook, {ReducerKind::None});
    PipelineOptions opts;
    opts.capture = true;
    PipelineResult reduced =
        run_pipeline(schedule, *backbone, codebook, config.to_reducer(), opts);

    RunReport report;
    report.config = config;
    report.records = reduced.records;
    report.has_quality = true;
    report.quality = mean_quality(reduced, reference, config.clips, config.peak);

    write_json(out_dir + "/report.json", report_to_json(report));
    save_config(out_dir + "/config.cfg", config);
    for (int t = 0; t <= config.clips; ++t) {
        fst1_save_tensor(out_dir + "/features_clip" + std::to_string(t) + ".fst1",
                         reduced.clips[t].feature);
        fst1_save_tensor(out_dir + "/reference_clip" + std::to_string(t) + ".fst1",
                         reference.clips[t].feature);
    }
    for (const StepCapture& cap : reduced.captures) {
        if (cap.mask) {
            fst1_save_mask(out_dir + "/mask_" + step_tag(cap) + ".fst1", cap.mask->keep);
            write_pgm(out_dir + "/mask_" + step_tag(cap) + ".pgm", cap.mask->keep);
        }
        if (cap.scores) {
            fst1_save_field(out_dir + "/scores_" + step_tag(cap) + ".fst1", cap.scores->data);
            write_pgm(out_dir + "/scores_" + step_tag(cap) + ".pgm", cap.scores->data);
        }
    }
    return report;
}

void cmd_ablate(const RunConfig& config, const std::string& axis, const std::string& out_dir) {
    config.validate();
    if (axis != "ratio" && axis != "p" && axis != "method")
        throw std::invalid_argument("ablate: axis must be ratio, p or method, got '" + axis +
                                    "'");
    ensure_dir(out_dir);

    struct AxisValue {
        std::string label;
        RunConfig config;
    };
    std::vector<AxisValue> values;
    if (axis == "ratio") {
        if (config.ratio_axis.empty())
            throw std::invalid_argument("ablate: ratio_axis is empty");
        for (double r : config.ratio_axis) {
            RunConfig c = config;
            if (c.reducer == "none") c.reducer = "sttp";
            for (int k = c.warmup; k < static_cast<int>(c.ratios.size()); ++k) c.ratios[k] = r;
            values.push_back({format_double(r), c});
        }
    } else if (axis == "p") {
        if (config.p_axis.empty())
            throw std::invalid_argument("ablate: p_axis is empty");
        for (double pv : config.p_axis) {
            RunConfig c = config;
            if (c.reducer == "none") c.reducer = "sttp";
            c.p = pv;
            values.push_back({format_double(pv), c});
        }
    } else {
        if (config.method_axis.empty())
            throw std::invalid_argument("ablate: method_axis is empty");
        for (const std::string& m : config.method_axis) {
            RunConfig c = config;
            c.reducer = m;
            values.push_back({m, c});
        }
    }

    std::ofstream csv(out_dir + "/ablate.csv");
    if (!csv)
        throw IoError("ablate: cannot write '" + out_dir + "/ablate.csv'");
    csv << "axis,value,seed,mse,psnr,ssim,processed_tokens,full_tokens,wall_ns\n";

    json rows = json::array();
    json aggregates = json::array();
    for (const AxisValue& v : values) {
        v.config.validate();
        QualityAggregate agg;
        for (int s = 0; s < config.seeds; ++s) {
            const RunConfig run_cfg = seed_variant(v.config, s);
            const ScaleSchedule schedule = run_cfg.to_schedule();
            const Codebook codebook =
                build_codebook(run_cfg.codebook_seed, run_cfg.codebook_size, run_cfg.channels,
                               static_cast<float>(run_cfg.codebook_spread));
            std::unique_ptr<Backbone> backbone = make_backbone(run_cfg);
            PipelineResult reference =
                run_pipeline(schedule, *backbone, codebook, {ReducerKind::None});
            PipelineResult reduced =
                run_pipeline(schedule, *backbone, codebook, run_cfg.to_reducer());
            const QualitySummary q =
                mean_quality(reduced, reference, run_cfg.clips, run_cfg.peak);
            agg.add(q);

            const long long wall = reduced.total_backbone_ns() + reduced.total_reduce_ns();
            csv << axis << "," << v.label << "," << s << "," << format_double(q.mse) << ","
                << format_double(q.psnr) << "," << format_double(q.ssim) << ","
                << reduced.total_processed_tokens() << "," << reduced.total_full_tokens() << ","
                << wall << "\n";
            rows.push_back({{"axis", axis},
                            {"value", v.label},
                            {"seed", s},
                            {"mse", q.mse},
                            {"psnr", q.psnr},
                            {"ssim", q.ssim},
                            {"processed_tokens", reduced.total_processed_tokens()},
                            {"full_tokens", reduced.total_full_tokens()},
                            {"wall_ns", wall}});
        }
        agg.finalize();
        aggregates.push_back({{"value", v.label},
                              {"mse_mean", agg.mse_mean},
                              {"psnr_mean", agg.psnr_mean},
                              {"psnr_var", agg.psnr_var},
                              {"ssim_mean", agg.ssim_mean},
                              {"seeds", agg.count()}});
    }

    json out;
    out["schema"] = "starprune.ablation.v1";
    out["axis"] = axis;
    out["rows"] = rows;
    out["aggregates"] = aggregates;
    write_json(out_dir + "/ablate.json", out);
}

void cmd_study(const RunConfig& config, const std::string& out_dir) {
    config.validate();
    ensure_dir(out_dir);
    const StudyResult study = error_propagation_study(
        config.to_schedule(), config.study_ratio, config.seeds, config.reducer_seed,
        config.codebook_size, static_cast<float>(config.codebook_spread), config.target_cutoff);

    std::ofstream csv(out_dir + "/study.csv");
    if (!csv)
        throw IoError("study: cannot write '" + out_dir + "/study.csv'");
    csv << "scale,reducer,seed,mse\n";
    for (const StudyCell& c : study.prune_cells)
        csv << c.scale_index << ",prune," << c.seed_index << "," << format_double(c.mse) << "\n";
    for (const StudyCell& c : study.merge_cells)
        csv << c.scale_index << ",merge," << c.seed_index << "," << format_double(c.mse) << "\n";

    auto stats_json = [](const std::vector<StudyScaleStat>& stats) {
        json arr = json::array();
        for (const StudyScaleStat& s : stats)
            arr.push_back({{"scale", s.scale_index},
                           {"mean_mse", s.mean_mse},
                           {"var_mse", s.var_mse}});
        return arr;
    };
    json out;
    out["schema"] = "starprune.study.v1";
    out["ratio"] = study.ratio;
    out["seeds"] = study.seeds;
    out["target_kind"] = study.target_kind;
    out["prune"] = stats_json(study.prune);
    out["merge"] = stats_json(study.merge);
    write_json(out_dir + "/study.json", out);
}

void cmd_spectrum(const RunConfig& config, const std::string& out_dir) {
    config.validate();
    ensure_dir(out_dir);
    const ScaleSchedule schedule = config.to_schedule();
    const Codebook codebook =
        build_codebook(config.codebook_seed, config.codebook_size, config.channels,
                       static_cast<float>(config.codebook_spread));
    std::unique_ptr<Backbone> backbone = make_backbone(config);
    PipelineResult run = run_pipeline(schedule, *backbone, codebook, {ReducerKind::None});

    // one snapshot per scale (each scale's last iteration), first generated clip
    const ClipState& clip = run.clips[std::min(1, config.clips)];
    std::vector<Tensor> per_scale;
    size_t acc = 0;
    for (int k = 0; k < schedule.num_scales(); ++k) {
        acc += static_cast<size_t>(schedule.iterations[k]);
        per_scale.push_back(clip.history[acc - 1]);
    }
    const SpectralReport report = scale_delta_spectrum(per_scale, config.bands);

    std::ofstream csv(out_dir + "/spectrum.csv");
    if (!csv)
        throw IoError("spectrum: cannot write '" + out_dir + "/spectrum.csv'");
    csv << "scale,band,delta_energy\n";
    for (size_t i = 0; i < report.delta_bands.size(); ++i)
        for (int b = 0; b < report.bands; ++b)
            csv << (i + 1) << "," << b << ","
                << format_double(report.delta_bands[i][static_cast<size_t>(b)]) << "\n";

    auto report_json = [](const SpectralReport& r) {
        json j;
        j["bands"] = r.bands;
        j["edges"] = r.edges;
        j["padded"] = r.padded;
        j["delta_bands"] = r.delta_bands;
        j["snapshot_bands"] = r.snapshot_bands;
        return j;
    };
    json out;
    out["schema"] = "starprune.spectrum.v1";
    out["clip"] = clip.clip_index;
    out["pipeline"] = report_json(report);
    write_json(out_dir + "/spectrum.json", out);

    for (int k = 0; k < schedule.num_scales(); ++k)
        write_pgm(out_dir + "/highfreq_s" + std::to_string(k) + ".pgm",
                  highfreq_energy_map(per_scale[static_cast<size_t>(k)],
                                      config.highfreq_cutoff));

    if (config.target == "frozen_lowband") {
        const std::vector<Tensor> seq = frozen_lowband_history(
            schedule.final_scale(), schedule.channels, std::max(2, schedule.num_scales()),
            std::max(1, schedule.warmup_scales), config.target_seed);
        json cj;
        cj["schema"] = "starprune.spectrum.v1";
        cj["clip"] = -1;  // analytic construction, not a pipeline clip
        cj["pipeline"] = report_json(scale_delta_spectrum(seq, config.bands));
        write_json(out_dir + "/spectrum_construction.json", cj);
    }
}

void cmd_bench(const RunConfig& config, const std::string& out_dir) {
    config.validate();
    if (config.repetitions < 3)
        throw std::invalid_argument("bench: repetitions must be >= 3");
    ensure_dir(out_dir);
    const ScaleSchedule schedule = config.to_schedule();
    const Codebook codebook =
        build_codebook(config.codebook_seed, config.codebook_size, config.channels,
                       static_cast<float>(config.codebook_spread));
    std::unique_ptr<Backbone> backbone = make_backbone(config);
    const int K = schedule.num_scales();
    const int R = config.repetitions;

    std::vector<std::vector<double>> base_ns(static_cast<size_t>(K)),
        reduced_ns(static_cast<size_t>(K)), overhead_ns(static_cast<size_t>(K));
    std::vector<double> speedups;
    long long processed = 0, full = 0;

    for (int r = 0; r < R; ++r) {
        PipelineResult reference =
            run_pipeline(schedule, *backbone, codebook, {ReducerKind::None});
        PipelineResult reduced =
            run_pipeline(schedule, *backbone, codebook, config.to_reducer());
        std::vector<long long> per_scale_base(static_cast<size_t>(K), 0),
            per_scale_red(static_cast<size_t>(K), 0), per_scale_ovh(static_cast<size_t>(K), 0);
        for (const IterationRecord& rec : reference.records)
            per_scale_base[static_cast<size_t>(rec.scale_index)] += rec.backbone_ns;
        for (const IterationRecord& rec : reduced.records) {
            per_scale_red[static_cast<size_t>(rec.scale_index)] += rec.backbone_ns;
            per_scale_ovh[static_cast<size_t>(rec.scale_index)] += rec.reduce_ns;
        }
        for (int k = 0; k < K; ++k) {
            base_ns[static_cast<size_t>(k)].push_back(
                static_cast<double>(per_scale_base[static_cast<size_t>(k)]));
            reduced_ns[static_cast<size_t>(k)].push_back(
                static_cast<double>(per_scale_red[static_cast<size_t>(k)]));
            overhead_ns[static_cast<size_t>(k)].push_back(
                static_cast<double>(per_scale_ovh[static_cast<size_t>(k)]));
        }
        const double base_total = static_cast<double>(reference.total_backbone_ns());
        const double red_total = static_cast<double>(reduced.total_backbone_ns());
        speedups.push_back(red_total > 0.0 ? base_total / red_total : 1.0);
        processed = reduced.total_processed_tokens();
        full = reduced.total_full_tokens();
    }

    std::ofstream csv(out_dir + "/bench.csv");
    if (!csv)
        throw IoError("bench: cannot write '" + out_dir + "/bench.csv'");
    csv << "scale,rows,cols,median_backbone_ns,median_reduce_ns,median_unpruned_backbone_ns,"
           "overhead_fraction\n";
    json scales = json::array();
    for (int k = 0; k < K; ++k) {
        const double mb = median(reduced_ns[static_cast<size_t>(k)]);
        const double mr = median(overhead_ns[static_cast<size_t>(k)]);
        const double mu = median(base_ns[static_cast<size_t>(k)]);
        const double frac = mb > 0.0 ? mr / mb : 0.0;
        csv << k << "," << schedule.scales[k].rows << "," << schedule.scales[k].cols << ","
            << static_cast<long long>(mb) << "," << static_cast<long long>(mr) << ","
            << static_cast<long long>(mu) << "," << format_double(frac) << "\n";
        scales.push_back({{"scale", k},
                          {"rows", schedule.scales[k].rows},
                          {"cols", schedule.scales[k].cols},
                          {"median_backbone_ns", static_cast<long long>(mb)},
                          {"median_reduce_ns", static_cast<long long>(mr)},
                          {"median_unpruned_backbone_ns", static_cast<long long>(mu)},
                          {"overhead_fraction", frac}});
    }

    json out;
    out["schema"] = "starprune.bench.v1";
    out["repetitions"] = R;
    out["scales"] = scales;
    out["measured_speedup_median"] = median(speedups);
    out["analytic_token_factor"] =
        full > 0 ? static_cast<double>(processed) / static_cast<double>(full) : 1.0;
    write_json(out_dir + "/bench.json", out);
}

}  // namespace starprune
