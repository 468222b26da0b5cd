#include "starprune/report.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "starprune/errors.hpp"

namespace starprune {

using nlohmann::json;

json config_to_json(const RunConfig& c) {
    json scales = json::array();
    for (const Extent2& s : c.scales) scales.push_back({s.rows, s.cols});
    json j;
    j["scales"] = scales;
    j["iterations"] = c.iterations;
    j["ratios"] = c.ratios;
    j["warmup"] = c.warmup;
    j["channels"] = c.channels;
    j["clips"] = c.clips;
    j["clip_frames"] = c.clip_frames;
    j["backbone"] = c.backbone;
    j["backbone_seed"] = c.backbone_seed;
    j["mixer_heads"] = c.mixer_heads;
    j["mixer_layers"] = c.mixer_layers;
    j["reducer"] = c.reducer;
    j["p"] = format_double(c.p);  // string form keeps inf representable
    j["reducer_seed"] = c.reducer_seed;
    j["codebook_size"] = c.codebook_size;
    j["codebook_seed"] = c.codebook_seed;
    j["codebook_spread"] = c.codebook_spread;
    j["target"] = c.target;
    j["target_path"] = c.target_path;
    j["target_seed"] = c.target_seed;
    j["target_cutoff"] = c.target_cutoff;
    j["target_waves"] = c.target_waves;
    j["peak"] = c.peak;
    j["out_dir"] = c.out_dir;
    j["repetitions"] = c.repetitions;
    j["seeds"] = c.seeds;
    j["bands"] = c.bands;
    j["highfreq_cutoff"] = c.highfreq_cutoff;
    j["ratio_axis"] = c.ratio_axis;
    json p_axis = json::array();
    for (double v : c.p_axis) p_axis.push_back(format_double(v));
    j["p_axis"] = p_axis;
    j["method_axis"] = c.method_axis;
    j["study_ratio"] = c.study_ratio;
    return j;
}

namespace {

json record_to_json(const IterationRecord& r) {
    json j;
    j["clip"] = r.clip_index;
    j["scale"] = r.scale_index;
    j["iter"] = r.iter;
    j["processed_tokens"] = r.processed_tokens;
    j["full_tokens"] = r.full_tokens;
    j["backbone_tokens"] = r.backbone_tokens;
    j["grid_tokens"] = r.grid_tokens;
    j["pruned"] = r.pruned;
    j["merged"] = r.merged;
    j["backbone_ns"] = r.backbone_ns;
    j["reduce_ns"] = r.reduce_ns;
    j["has_scores"] = r.has_scores;
    j["score_stats"] = {{"min", r.score_stats.min},
                        {"max", r.score_stats.max},
                        {"mean", r.score_stats.mean},
                        {"variance", r.score_stats.variance}};
    return j;
}

}  // namespace

json report_to_json(const RunReport& report) {
    json j;
    j["schema"] = report.schema;
    j["config"] = config_to_json(report.config);
    json records = json::array();
    long long processed = 0, full = 0, backbone_ns = 0, reduce_ns = 0;
    for (const IterationRecord& r : report.records) {
        records.push_back(record_to_json(r));
        processed += r.processed_tokens;
        full += r.full_tokens;
        backbone_ns += r.backbone_ns;
        reduce_ns += r.reduce_ns;
    }
    j["records"] = records;
    j["totals"] = {{"processed_tokens", processed},
                   {"full_tokens", full},
                   {"token_factor", full > 0 ? static_cast<double>(processed) / full : 1.0},
                   {"backbone_ns", backbone_ns},
                   {"reduce_ns", reduce_ns}};
    if (report.has_quality) {
        j["quality"] = {{"mse", report.quality.mse},
                        {"psnr", report.quality.psnr},
                        {"ssim", report.quality.ssim},
                        {"exact_match", report.quality.exact_match}};
    } else {
        j["quality"] = nullptr;
    }
    return j;
}

json strip_timings(json report) {
    if (report.contains("records"))
        for (json& r : report["records"]) {
            r["backbone_ns"] = 0;
            r["reduce_ns"] = 0;
        }
    if (report.contains("totals")) {
        report["totals"]["backbone_ns"] = 0;
        report["totals"]["reduce_ns"] = 0;
    }
    return report;
}

void write_json(const std::string& path, const json& value) {
    std::ofstream out(path);
    if (!out)
        throw IoError("report: cannot write '" + path + "'");
    out << value.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("report: cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

}  // namespace starprune
