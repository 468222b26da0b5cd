#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "starprune/config.hpp"
#include "starprune/metrics.hpp"
#include "starprune/pipeline.hpp"

namespace starprune {

inline constexpr const char* kReportSchemaId = "starprune.run_report.v1";

/// Serializable account of one run: config echo, per-iteration token and
/// timing records, aggregate totals, and (when a reference run exists) the
/// quality of the reduced output against it.
struct RunReport {
    std::string schema = kReportSchemaId;
    RunConfig config;
    std::vector<IterationRecord> records;
    bool has_quality = false;
    QualitySummary quality;  // reduced vs unpruned reference, clips 1..N mean
};

nlohmann::json config_to_json(const RunConfig& config);
nlohmann::json report_to_json(const RunReport& report);

/// Zeroes every wall-time field; after stripping, two reports of the same
/// run are byte-identical.
nlohmann::json strip_timings(nlohmann::json report);

void write_json(const std::string& path, const nlohmann::json& value);
nlohmann::json read_json(const std::string& path);

}  // namespace starprune
