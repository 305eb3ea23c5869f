#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpustress/core.hpp"
#include "gpustress/synthgen.hpp"

namespace gpustress {

// One on-disk trace: a directory with manifest.json, telemetry.csv, and
// (unless the bundle is telemetry-only) counters.csv.
struct TraceBundle {
    std::string workload_name;
    std::string category;
    std::string hardware;  // informational tag from collection, may be empty
    std::filesystem::path telemetry_path;
    std::filesystem::path counters_path;  // empty for telemetry-only bundles
    std::optional<double> ambient_c;      // default: first telemetry sample
};

// Published values for one workload in the reference dataset. Optional
// MetricSet fields stay unset where the source reports nothing.
struct ReferenceWorkload {
    std::string name;
    std::string category;
    MetricSet metrics;
    std::vector<std::string> estimated_fields;  // interpolated, not published
};

// A single published statement to check the dataset (and analyses) against:
// an exact value or an interval, scoped to one workload or to a whole
// category (exactly one of `workload` and `category` is set).
struct PaperCheck {
    std::string workload;
    std::string category;
    std::string metric;
    std::optional<double> value;
    std::optional<std::pair<double, double>> range;
};

struct ReferenceDataset {
    HardwareSpec hardware;
    std::vector<ReferenceWorkload> workloads;
    std::vector<PaperCheck> checks;
};

// Manifest + CSV readers. Parse errors throw std::runtime_error naming the
// file, line, and column; semantic violations throw std::invalid_argument.
TraceBundle read_manifest(const std::filesystem::path& bundle_dir);
std::vector<TelemetrySample> read_telemetry_csv(const std::filesystem::path& file);
std::vector<KernelCounters> read_counters_csv(const std::filesystem::path& file);

// Loads and validates a whole bundle; throws on validation errors.
WorkloadTrace load_trace(const TraceBundle& bundle);
WorkloadTrace load_trace_dir(const std::filesystem::path& bundle_dir);

// Writes a trace as a bundle directory (manifest.json, telemetry.csv, and
// counters.csv when kernels exist). Doubles use shortest round-trip
// formatting, so load_trace_dir(write_trace_dir(t)) == t exactly.
void write_trace_dir(const WorkloadTrace& trace, const std::filesystem::path& bundle_dir,
                     const std::string& hardware = "");

// Reference dataset (ten fixed workloads) and hardware spec files.
ReferenceDataset load_reference(const std::filesystem::path& file);
HardwareSpec load_hardware(const std::filesystem::path& file);

// Synthetic profile description from JSON; omitted fields keep defaults,
// omitted throttle_temp_c means no throttling.
SynthProfile load_profile(const std::filesystem::path& file);

// The ten canonical workload names the reference dataset must carry.
const std::vector<std::string>& reference_workload_names();

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

// Writes via a temp file in the same directory plus an atomic rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gpustress
