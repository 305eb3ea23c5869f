#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpustress/stress.hpp"

namespace gpustress {

// Rounds to `digits` significant decimal digits. Report floats pass through
// this before serialization so emitted files are short and byte-stable.
double round_sig(double value, int digits = 6);

// JSON number for a report: rounded, or null when non-finite.
nlohmann::json report_number(double value);

// Analysis report for one workload: metrics, thermal fit, roofline placement,
// and accumulated warnings. Keys are sorted; floats carry 6 significant
// digits; content is a pure function of the inputs.
nlohmann::json analysis_report(const std::string& workload, const std::string& category,
                               const AnalysisResult& result, const HardwareSpec& hw);

// Reads the fields of an analysis report needed to compare workloads.
struct LoadedReport {
    std::string name;
    std::string category;
    MetricSet metrics;
};
LoadedReport load_report(const std::filesystem::path& file);

// Comparison report: ranked profiles with their radar polygons. `categories`
// maps workload name to category for annotation (missing entries are fine).
nlohmann::json compare_report(const std::vector<StressProfile>& ranked,
                              const std::map<std::string, std::string>& categories,
                              const NormalizeOptions& options,
                              const AxisMap& weights,
                              const std::vector<std::string>& warnings);

// Same ranking as CSV: one row per workload, normalized axes as columns.
std::string compare_csv(const std::vector<StressProfile>& ranked);

// Serializes with 2-space indent, trailing newline, atomic replace.
void write_report(const nlohmann::json& report, const std::filesystem::path& path);

}  // namespace gpustress
