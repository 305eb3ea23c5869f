#include "gpustress/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "gpustress/ingest.hpp"
#include "gpustress/roofline.hpp"

namespace gpustress {

using nlohmann::json;

double round_sig(double value, int digits) {
    if (!std::isfinite(value)) return value;
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
    return std::strtod(buffer, nullptr);
}

json report_number(double value) {
    if (!std::isfinite(value)) return nullptr;
    return round_sig(value);
}

namespace {

json optional_number(const std::optional<double>& value) {
    if (!value) return nullptr;
    return report_number(*value);
}

json metrics_block(const MetricSet& m) {
    json out = json::object();
    out["sm_busy_rate_pct"] = optional_number(m.sm_busy_rate_pct);
    out["aii_pct"] = optional_number(m.aii_pct);
    out["s_act_pct"] = optional_number(m.s_act_pct);
    out["t_inf_c"] = report_number(m.t_inf_c);
    out["t_r_s"] = report_number(m.t_r_s);
    out["energy_kj"] = report_number(m.energy_kj);
    out["energy_rate_w"] = report_number(m.energy_rate_w);
    out["delta_cf_mhz"] = report_number(m.delta_cf_mhz);
    out["throughput_gflops"] = optional_number(m.throughput_gflops);
    out["arithmetic_intensity"] = optional_number(m.arithmetic_intensity);
    return out;
}

}  // namespace

json analysis_report(const std::string& workload, const std::string& category,
                     const AnalysisResult& result, const HardwareSpec& hw) {
    json out = json::object();
    out["workload"] = workload;
    out["category"] = category;
    out["hardware"] = hw.name;
    out["metrics"] = metrics_block(result.metrics);

    json thermal = json::object();
    thermal["t_inf_c"] = report_number(result.thermal.t_inf_c);
    thermal["t0_c"] = report_number(result.thermal.t0_c);
    thermal["tau_s"] = report_number(result.thermal.tau_s);
    thermal["t_r_s"] = report_number(result.thermal.t_r_s);
    thermal["rmse_c"] = report_number(result.thermal.rmse_c);
    thermal["steady_window_s"] = json::array({report_number(result.thermal.steady_start_s),
                                              report_number(result.thermal.steady_end_s)});
    thermal["converged"] = result.thermal.converged;
    thermal["flags"] = result.thermal.flags;
    out["thermal_fit"] = thermal;

    if (result.roofline) {
        json roof = json::object();
        roof["arithmetic_intensity"] = report_number(result.roofline->arithmetic_intensity);
        roof["throughput_gflops"] = report_number(result.roofline->throughput_gflops);
        roof["attainable_gflops"] = report_number(result.roofline->attainable_gflops);
        roof["efficiency_pct"] = report_number(result.roofline->efficiency_pct);
        roof["bound"] = to_string(result.roofline->bound);
        roof["above_roof"] = result.roofline->above_roof;
        roof["ridge_point"] = report_number(ridge_point(hw));
        roof["peak_gflops"] = report_number(hw.peak_gflops);
        roof["peak_bandwidth_gbps"] = report_number(hw.peak_bandwidth_gbps);
        out["roofline"] = roof;
    } else {
        out["roofline"] = nullptr;
    }

    out["warnings"] = result.warnings;
    return out;
}

namespace {

double required_metric(const json& metrics, const char* key,
                       const std::filesystem::path& file) {
    const auto it = metrics.find(key);
    if (it == metrics.end() || !it->is_number()) {
        throw std::runtime_error(file.string() + ": metrics." + key +
                                 ": missing or non-numeric");
    }
    return it->get<double>();
}

std::optional<double> optional_metric(const json& metrics, const char* key,
                                      const std::filesystem::path& file) {
    const auto it = metrics.find(key);
    if (it == metrics.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) {
        throw std::runtime_error(file.string() + ": metrics." + key + ": expected a number");
    }
    return it->get<double>();
}

}  // namespace

LoadedReport load_report(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + file.string());
    }
    json obj;
    try {
        obj = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(file.string() + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("workload") || !obj.contains("metrics")) {
        throw std::runtime_error(file.string() +
                                 ": not an analysis report (need workload and metrics)");
    }

    LoadedReport report;
    report.name = obj.at("workload").get<std::string>();
    if (obj.contains("category") && obj.at("category").is_string()) {
        report.category = obj.at("category").get<std::string>();
    }
    const json& metrics = obj.at("metrics");
    report.metrics.sm_busy_rate_pct = optional_metric(metrics, "sm_busy_rate_pct", file);
    report.metrics.aii_pct = optional_metric(metrics, "aii_pct", file);
    report.metrics.s_act_pct = optional_metric(metrics, "s_act_pct", file);
    report.metrics.t_inf_c = required_metric(metrics, "t_inf_c", file);
    report.metrics.t_r_s = required_metric(metrics, "t_r_s", file);
    report.metrics.energy_kj = required_metric(metrics, "energy_kj", file);
    report.metrics.energy_rate_w = required_metric(metrics, "energy_rate_w", file);
    report.metrics.delta_cf_mhz = required_metric(metrics, "delta_cf_mhz", file);
    report.metrics.throughput_gflops = optional_metric(metrics, "throughput_gflops", file);
    report.metrics.arithmetic_intensity =
        optional_metric(metrics, "arithmetic_intensity", file);
    return report;
}

json compare_report(const std::vector<StressProfile>& ranked,
                    const std::map<std::string, std::string>& categories,
                    const NormalizeOptions& options,
                    const AxisMap& weights,
                    const std::vector<std::string>& warnings) {
    json out = json::object();
    out["axes"] = json::array();
    for (const std::string_view axis : kRadarAxes) {
        out["axes"].push_back(std::string(axis));
    }
    out["energy_axis"] = options.energy_axis_uses_rate ? "rate_w" : "total_kj";

    json weight_block = json::object();
    for (const std::string_view axis : kRadarAxes) {
        const auto it = weights.find(axis);
        weight_block[std::string(axis)] =
            report_number(it != weights.end() ? it->second : 1.0);
    }
    out["weights"] = weight_block;

    json items = json::array();
    for (const StressProfile& p : ranked) {
        json item = json::object();
        item["name"] = p.name;
        const auto cat = categories.find(p.name);
        if (cat != categories.end()) item["category"] = cat->second;
        json axes = json::object();
        for (const auto& [axis, value] : p.normalized_axes) {
            axes[axis] = report_number(value);
        }
        item["normalized_axes"] = axes;
        item["composite_index"] = report_number(p.composite_index);
        item["rank"] = p.rank;
        items.push_back(item);
    }
    out["workloads"] = items;
    out["warnings"] = warnings;
    return out;
}

std::string compare_csv(const std::vector<StressProfile>& ranked) {
    std::string out = "rank,workload,composite_index";
    for (const std::string_view axis : kRadarAxes) {
        out += ',';
        out += axis;
    }
    out += '\n';
    for (const StressProfile& p : ranked) {
        out += std::to_string(p.rank);
        out += ',';
        out += p.name;
        out += ',';
        out += format_double(round_sig(p.composite_index));
        for (const std::string_view axis : kRadarAxes) {
            out += ',';
            const auto it = p.normalized_axes.find(axis);
            out += it != p.normalized_axes.end() ? format_double(round_sig(it->second))
                                                 : std::string("");
        }
        out += '\n';
    }
    return out;
}

void write_report(const json& report, const std::filesystem::path& path) {
    write_file_atomic(path, report.dump(2) + "\n");
}

}  // namespace gpustress
