#include "gpustress/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace gpustress {

using nlohmann::json;

namespace {

constexpr char kTelemetryHeader[] = "t_s,temp_c,power_w,energy_j,sm_clock_mhz";
constexpr char kCountersHeader[] =
    "kernel,invocation,alu,fp16,fp64,dmma,hmma,imma,xu,issued,active_cycles,"
    "elapsed_cycles,dram_bytes,stall_mem,stall_sched,stall_throttle,stall_other,"
    "duration_s";

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string_view> split_lines(const std::string& content) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        std::string_view line(content.data() + start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

[[noreturn]] void fail_cell(const std::filesystem::path& file, std::size_t line_no,
                            const char* column, std::string_view text,
                            const char* reason) {
    throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                             ": column " + column + ": " + reason + " '" +
                             std::string(text) + "'");
}

double parse_double_cell(std::string_view text, const std::filesystem::path& file,
                         std::size_t line_no, const char* column) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        fail_cell(file, line_no, column, text, "cannot parse number");
    }
    if (!std::isfinite(value)) {
        fail_cell(file, line_no, column, text, "non-finite value");
    }
    return value;
}

std::uint64_t parse_u64_cell(std::string_view text, const std::filesystem::path& file,
                             std::size_t line_no, const char* column) {
    std::uint64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        fail_cell(file, line_no, column, text, "cannot parse count");
    }
    return value;
}

void check_header(std::string_view got, const char* expected,
                  const std::filesystem::path& file) {
    if (got != expected) {
        throw std::runtime_error(file.string() + ":1: header mismatch: expected '" +
                                 expected + "', got '" + std::string(got) + "'");
    }
}

json parse_json_file(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    try {
        return json::parse(content);
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::filesystem::path& file, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw std::runtime_error(file.string() + ": " + where + ": unknown key '" +
                                     key + "'");
        }
    }
}

double as_double(const json& v, const std::filesystem::path& file,
                 const std::string& where) {
    if (!v.is_number()) {
        throw std::runtime_error(file.string() + ": " + where + ": expected a number");
    }
    return v.get<double>();
}

std::string as_string(const json& v, const std::filesystem::path& file,
                      const std::string& where) {
    if (!v.is_string()) {
        throw std::runtime_error(file.string() + ": " + where + ": expected a string");
    }
    return v.get<std::string>();
}

const json& require_key(const json& obj, const char* key,
                        const std::filesystem::path& file, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw std::runtime_error(file.string() + ": " + where + ": missing key '" +
                                 std::string(key) + "'");
    }
    return *it;
}

HardwareSpec parse_hardware(const json& obj, const std::filesystem::path& file,
                            const std::string& where) {
    if (!obj.is_object()) {
        throw std::runtime_error(file.string() + ": " + where + ": expected an object");
    }
    reject_unknown_keys(obj,
                        {"name", "peak_gflops", "peak_bandwidth_gbps", "warp_size",
                         "num_sms", "subpartitions_per_sm", "peak_ipc_per_sm",
                         "peak_issue_per_subpartition", "flop_weights"},
                        file, where);
    HardwareSpec hw = default_hardware();
    hw.name = as_string(require_key(obj, "name", file, where), file, where + ".name");
    hw.peak_gflops = as_double(require_key(obj, "peak_gflops", file, where), file,
                               where + ".peak_gflops");
    hw.peak_bandwidth_gbps = as_double(
        require_key(obj, "peak_bandwidth_gbps", file, where), file,
        where + ".peak_bandwidth_gbps");
    if (obj.contains("warp_size")) {
        hw.warp_size = static_cast<int>(
            as_double(obj.at("warp_size"), file, where + ".warp_size"));
    }
    if (obj.contains("num_sms")) {
        hw.num_sms = static_cast<int>(as_double(obj.at("num_sms"), file, where + ".num_sms"));
    }
    if (obj.contains("subpartitions_per_sm")) {
        hw.subpartitions_per_sm = static_cast<int>(as_double(
            obj.at("subpartitions_per_sm"), file, where + ".subpartitions_per_sm"));
    }
    if (obj.contains("peak_ipc_per_sm")) {
        hw.peak_ipc_per_sm =
            as_double(obj.at("peak_ipc_per_sm"), file, where + ".peak_ipc_per_sm");
    }
    if (obj.contains("peak_issue_per_subpartition")) {
        hw.peak_issue_per_subpartition =
            as_double(obj.at("peak_issue_per_subpartition"), file,
                      where + ".peak_issue_per_subpartition");
    }
    if (obj.contains("flop_weights")) {
        const json& weights = obj.at("flop_weights");
        if (!weights.is_object()) {
            throw std::runtime_error(file.string() + ": " + where +
                                     ".flop_weights: expected an object");
        }
        for (const auto& [key, value] : weights.items()) {
            const auto c = instruction_class_from_string(key);
            if (!c) {
                throw std::runtime_error(file.string() + ": " + where +
                                         ".flop_weights: unknown instruction class '" +
                                         key + "'");
            }
            at(hw.flop_weights, *c) =
                as_double(value, file, where + ".flop_weights." + key);
        }
    }
    const auto findings = validate_hardware(hw);
    if (!findings.empty()) {
        throw std::invalid_argument(file.string() + ": " + where + ": " +
                                    findings.front().path + ": " +
                                    findings.front().message);
    }
    return hw;
}

void parse_metric(MetricSet& m, const std::string& key, double value,
                  const std::filesystem::path& file, const std::string& where) {
    if (key == "sm_busy_rate_pct") m.sm_busy_rate_pct = value;
    else if (key == "aii_pct") m.aii_pct = value;
    else if (key == "s_act_pct") m.s_act_pct = value;
    else if (key == "t_inf_c") m.t_inf_c = value;
    else if (key == "t_r_s") m.t_r_s = value;
    else if (key == "energy_kj") m.energy_kj = value;
    else if (key == "energy_rate_w") m.energy_rate_w = value;
    else if (key == "delta_cf_mhz") m.delta_cf_mhz = value;
    else if (key == "throughput_gflops") m.throughput_gflops = value;
    else if (key == "arithmetic_intensity") m.arithmetic_intensity = value;
    else {
        throw std::runtime_error(file.string() + ": " + where + ": unknown metric '" +
                                 key + "'");
    }
}

bool is_known_metric(const std::string& key) {
    static const std::set<std::string> kKnown = {
        "sm_busy_rate_pct", "aii_pct",          "s_act_pct",
        "t_inf_c",          "t_r_s",            "energy_kj",
        "energy_rate_w",    "delta_cf_mhz",     "throughput_gflops",
        "arithmetic_intensity"};
    return kKnown.contains(key);
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.flush()) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::vector<TelemetrySample> read_telemetry_csv(const std::filesystem::path& file) {
    const std::string content = read_file(file);
    const auto lines = split_lines(content);
    if (lines.empty()) {
        throw std::runtime_error(file.string() + ": empty telemetry file");
    }
    check_header(lines[0], kTelemetryHeader, file);

    std::vector<TelemetrySample> samples;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::size_t line_no = i + 1;
        const auto fields = split_fields(lines[i]);
        if (fields.size() != 5) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": expected 5 columns, got " +
                                     std::to_string(fields.size()));
        }
        TelemetrySample s;
        s.t_s = parse_double_cell(fields[0], file, line_no, "t_s");
        s.temp_c = parse_double_cell(fields[1], file, line_no, "temp_c");
        s.power_w = parse_double_cell(fields[2], file, line_no, "power_w");
        s.energy_j = parse_double_cell(fields[3], file, line_no, "energy_j");
        s.sm_clock_mhz = parse_double_cell(fields[4], file, line_no, "sm_clock_mhz");
        samples.push_back(s);
    }
    if (samples.empty()) {
        throw std::runtime_error(file.string() + ": empty telemetry");
    }
    return samples;
}

std::vector<KernelCounters> read_counters_csv(const std::filesystem::path& file) {
    const std::string content = read_file(file);
    const auto lines = split_lines(content);
    if (lines.empty()) {
        throw std::runtime_error(file.string() + ": empty counters file");
    }
    check_header(lines[0], kCountersHeader, file);

    std::vector<KernelCounters> kernels;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::size_t line_no = i + 1;
        const auto fields = split_fields(lines[i]);
        if (fields.size() != 18) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": expected 18 columns, got " +
                                     std::to_string(fields.size()));
        }
        KernelCounters k;
        if (fields[0].empty()) {
            fail_cell(file, line_no, "kernel", fields[0], "empty kernel name");
        }
        k.kernel_name = std::string(fields[0]);
        k.invocation_index = parse_u64_cell(fields[1], file, line_no, "invocation");
        static constexpr const char* kClassColumns[] = {"alu",  "fp16", "fp64", "dmma",
                                                        "hmma", "imma", "xu"};
        for (std::size_t c = 0; c < kNumInstructionClasses; ++c) {
            k.executed_by_class[c] =
                parse_u64_cell(fields[2 + c], file, line_no, kClassColumns[c]);
        }
        k.issued_instructions = parse_u64_cell(fields[9], file, line_no, "issued");
        k.active_cycles = parse_u64_cell(fields[10], file, line_no, "active_cycles");
        k.elapsed_cycles = parse_u64_cell(fields[11], file, line_no, "elapsed_cycles");
        k.dram_bytes = parse_u64_cell(fields[12], file, line_no, "dram_bytes");
        k.stalls.memory = parse_u64_cell(fields[13], file, line_no, "stall_mem");
        k.stalls.scheduler = parse_u64_cell(fields[14], file, line_no, "stall_sched");
        k.stalls.throttle = parse_u64_cell(fields[15], file, line_no, "stall_throttle");
        k.stalls.other = parse_u64_cell(fields[16], file, line_no, "stall_other");
        k.duration_s = parse_double_cell(fields[17], file, line_no, "duration_s");
        kernels.push_back(k);
    }
    return kernels;
}

TraceBundle read_manifest(const std::filesystem::path& bundle_dir) {
    const std::filesystem::path manifest_path = bundle_dir / "manifest.json";
    const json obj = parse_json_file(manifest_path);
    if (!obj.is_object()) {
        throw std::runtime_error(manifest_path.string() + ": expected a JSON object");
    }
    reject_unknown_keys(
        obj, {"workload", "category", "telemetry", "counters", "ambient_c", "hardware"},
        manifest_path, "manifest");

    TraceBundle bundle;
    bundle.workload_name = as_string(require_key(obj, "workload", manifest_path, "manifest"),
                                     manifest_path, "workload");
    bundle.category = obj.contains("category")
                          ? as_string(obj.at("category"), manifest_path, "category")
                          : "unknown";
    if (obj.contains("hardware")) {
        bundle.hardware = as_string(obj.at("hardware"), manifest_path, "hardware");
    }
    bundle.telemetry_path =
        bundle_dir / as_string(require_key(obj, "telemetry", manifest_path, "manifest"),
                               manifest_path, "telemetry");
    if (obj.contains("counters")) {
        bundle.counters_path =
            bundle_dir / as_string(obj.at("counters"), manifest_path, "counters");
    }
    if (obj.contains("ambient_c")) {
        bundle.ambient_c = as_double(obj.at("ambient_c"), manifest_path, "ambient_c");
    }
    return bundle;
}

WorkloadTrace load_trace(const TraceBundle& bundle) {
    WorkloadTrace trace;
    trace.workload_name = bundle.workload_name;
    trace.category = bundle.category;
    trace.telemetry = read_telemetry_csv(bundle.telemetry_path);
    if (!bundle.counters_path.empty()) {
        trace.kernels = read_counters_csv(bundle.counters_path);
    }
    trace.ambient_c = bundle.ambient_c.value_or(trace.telemetry.front().temp_c);

    const auto findings = validate_trace(trace);
    for (const ValidationFinding& f : findings) {
        if (f.severity == Severity::Error) {
            throw std::invalid_argument("trace '" + trace.workload_name +
                                        "': " + f.path + ": " + f.message);
        }
    }
    return trace;
}

WorkloadTrace load_trace_dir(const std::filesystem::path& bundle_dir) {
    return load_trace(read_manifest(bundle_dir));
}

void write_trace_dir(const WorkloadTrace& trace, const std::filesystem::path& bundle_dir,
                     const std::string& hardware) {
    std::filesystem::create_directories(bundle_dir);

    std::string telemetry = kTelemetryHeader;
    telemetry += '\n';
    for (const TelemetrySample& s : trace.telemetry) {
        telemetry += format_double(s.t_s);
        telemetry += ',';
        telemetry += format_double(s.temp_c);
        telemetry += ',';
        telemetry += format_double(s.power_w);
        telemetry += ',';
        telemetry += format_double(s.energy_j);
        telemetry += ',';
        telemetry += format_double(s.sm_clock_mhz);
        telemetry += '\n';
    }
    write_file_atomic(bundle_dir / "telemetry.csv", telemetry);

    if (!trace.kernels.empty()) {
        std::string counters = kCountersHeader;
        counters += '\n';
        for (const KernelCounters& k : trace.kernels) {
            if (k.kernel_name.find(',') != std::string::npos) {
                throw std::invalid_argument("write_trace_dir: kernel name '" +
                                            k.kernel_name + "' contains a comma");
            }
            counters += k.kernel_name;
            counters += ',';
            counters += std::to_string(k.invocation_index);
            for (InstructionClass c : kAllInstructionClasses) {
                counters += ',';
                counters += std::to_string(at(k.executed_by_class, c));
            }
            counters += ',';
            counters += std::to_string(k.issued_instructions);
            counters += ',';
            counters += std::to_string(k.active_cycles);
            counters += ',';
            counters += std::to_string(k.elapsed_cycles);
            counters += ',';
            counters += std::to_string(k.dram_bytes);
            counters += ',';
            counters += std::to_string(k.stalls.memory);
            counters += ',';
            counters += std::to_string(k.stalls.scheduler);
            counters += ',';
            counters += std::to_string(k.stalls.throttle);
            counters += ',';
            counters += std::to_string(k.stalls.other);
            counters += ',';
            counters += format_double(k.duration_s);
            counters += '\n';
        }
        write_file_atomic(bundle_dir / "counters.csv", counters);
    }

    json manifest = json::object();
    manifest["workload"] = trace.workload_name;
    manifest["category"] = trace.category;
    manifest["telemetry"] = "telemetry.csv";
    if (!trace.kernels.empty()) manifest["counters"] = "counters.csv";
    manifest["ambient_c"] = trace.ambient_c;
    if (!hardware.empty()) manifest["hardware"] = hardware;
    write_file_atomic(bundle_dir / "manifest.json", manifest.dump(2) + "\n");
}

const std::vector<std::string>& reference_workload_names() {
    static const std::vector<std::string> kNames = {
        "back-propagation", "gaussian-elimination", "gpu-burn",     "hotspot",
        "lenet5",           "mnasnet",              "mobilenetv2",  "needleman-wunsch",
        "resnet18",         "streamcluster"};
    return kNames;
}

ReferenceDataset load_reference(const std::filesystem::path& file) {
    const json obj = parse_json_file(file);
    if (!obj.is_object()) {
        throw std::runtime_error(file.string() + ": expected a JSON object");
    }
    reject_unknown_keys(obj, {"hardware", "workloads", "paper_checks"}, file, "reference");

    ReferenceDataset ds;
    ds.hardware = parse_hardware(require_key(obj, "hardware", file, "reference"), file,
                                 "hardware");

    const json& workloads = require_key(obj, "workloads", file, "reference");
    if (!workloads.is_array()) {
        throw std::runtime_error(file.string() + ": workloads: expected an array");
    }
    for (const json& w : workloads) {
        if (!w.is_object()) {
            throw std::runtime_error(file.string() + ": workloads: expected objects");
        }
        reject_unknown_keys(w, {"name", "category", "metrics", "estimated_fields"}, file,
                            "workload");
        ReferenceWorkload rw;
        rw.name = as_string(require_key(w, "name", file, "workload"), file, "name");
        rw.category =
            as_string(require_key(w, "category", file, rw.name), file, rw.name + ".category");
        const json& metrics = require_key(w, "metrics", file, rw.name);
        if (!metrics.is_object()) {
            throw std::runtime_error(file.string() + ": " + rw.name +
                                     ".metrics: expected an object");
        }
        for (const auto& [key, value] : metrics.items()) {
            parse_metric(rw.metrics, key,
                         as_double(value, file, rw.name + ".metrics." + key), file,
                         rw.name + ".metrics");
        }
        for (const char* axis :
             {"sm_busy_rate_pct", "aii_pct", "s_act_pct", "t_inf_c", "t_r_s", "energy_kj",
              "energy_rate_w", "delta_cf_mhz"}) {
            if (!metrics.contains(axis)) {
                throw std::runtime_error(file.string() + ": " + rw.name +
                                         ": missing metric '" + axis + "'");
            }
        }
        if (w.contains("estimated_fields")) {
            const json& est = w.at("estimated_fields");
            if (!est.is_array()) {
                throw std::runtime_error(file.string() + ": " + rw.name +
                                         ".estimated_fields: expected an array");
            }
            for (const json& f : est) {
                const std::string name = as_string(f, file, rw.name + ".estimated_fields");
                if (!is_known_metric(name)) {
                    throw std::runtime_error(file.string() + ": " + rw.name +
                                             ".estimated_fields: unknown metric '" +
                                             name + "'");
                }
                rw.estimated_fields.push_back(name);
            }
        }
        ds.workloads.push_back(std::move(rw));
    }

    // The dataset must hold exactly the canonical ten, no more, no less.
    std::set<std::string> seen;
    for (const ReferenceWorkload& w : ds.workloads) {
        if (!seen.insert(w.name).second) {
            throw std::invalid_argument(file.string() + ": duplicate workload '" +
                                        w.name + "'");
        }
    }
    for (const std::string& name : reference_workload_names()) {
        if (!seen.contains(name)) {
            throw std::invalid_argument(file.string() + ": missing workload '" + name +
                                        "'");
        }
    }
    for (const std::string& name : seen) {
        if (std::find(reference_workload_names().begin(), reference_workload_names().end(),
                      name) == reference_workload_names().end()) {
            throw std::invalid_argument(file.string() + ": unexpected workload '" + name +
                                        "'");
        }
    }

    if (obj.contains("paper_checks")) {
        const json& checks = obj.at("paper_checks");
        if (!checks.is_array()) {
            throw std::runtime_error(file.string() + ": paper_checks: expected an array");
        }
        for (const json& c : checks) {
            reject_unknown_keys(c, {"workload", "category", "metric", "value", "range"},
                                file, "paper_checks");
            PaperCheck pc;
            if (c.contains("workload")) {
                pc.workload = as_string(c.at("workload"), file, "paper_checks.workload");
                if (!seen.contains(pc.workload)) {
                    throw std::runtime_error(file.string() +
                                             ": paper_checks: unknown workload '" +
                                             pc.workload + "'");
                }
            }
            if (c.contains("category")) {
                pc.category = as_string(c.at("category"), file, "paper_checks.category");
            }
            if (pc.workload.empty() == pc.category.empty()) {
                throw std::runtime_error(file.string() +
                                         ": paper_checks: exactly one of workload and "
                                         "category must be set");
            }
            pc.metric = as_string(require_key(c, "metric", file, "paper_checks"), file,
                                  "paper_checks.metric");
            if (!is_known_metric(pc.metric)) {
                throw std::runtime_error(file.string() + ": paper_checks: unknown metric '" +
                                         pc.metric + "'");
            }
            if (c.contains("value")) {
                pc.value = as_double(c.at("value"), file, "paper_checks.value");
            }
            if (c.contains("range")) {
                const json& r = c.at("range");
                if (!r.is_array() || r.size() != 2) {
                    throw std::runtime_error(file.string() +
                                             ": paper_checks.range: expected [lo, hi]");
                }
                pc.range = {as_double(r[0], file, "paper_checks.range"),
                            as_double(r[1], file, "paper_checks.range")};
            }
            if (pc.value.has_value() == pc.range.has_value()) {
                throw std::runtime_error(file.string() +
                                         ": paper_checks: exactly one of value and range "
                                         "must be set");
            }
            ds.checks.push_back(std::move(pc));
        }
    }
    return ds;
}

HardwareSpec load_hardware(const std::filesystem::path& file) {
    return parse_hardware(parse_json_file(file), file, "hardware");
}

SynthProfile load_profile(const std::filesystem::path& file) {
    const json obj = parse_json_file(file);
    if (!obj.is_object()) {
        throw std::runtime_error(file.string() + ": expected a JSON object");
    }
    reject_unknown_keys(
        obj, {"name",          "category",       "utilization",  "instruction_mix",
              "issue_rate",    "active_fraction", "stall_mix",    "dram_intensity_bpf",
              "p_idle_w",      "p_max_w",        "tau_s",        "r_th_c_per_w",
              "t_amb_c",       "cf_max_mhz",     "cf_min_mhz",   "throttle_temp_c",
              "throttle_step_mhz", "duration_s", "noise_temp_c", "seed"},
        file, "profile");

    SynthProfile p;
    if (obj.contains("name")) p.name = as_string(obj.at("name"), file, "name");
    if (obj.contains("category")) {
        p.category = as_string(obj.at("category"), file, "category");
    }
    if (obj.contains("utilization")) {
        p.utilization = as_double(obj.at("utilization"), file, "utilization");
    }
    if (obj.contains("instruction_mix")) {
        const json& mix = obj.at("instruction_mix");
        if (!mix.is_object()) {
            throw std::runtime_error(file.string() + ": instruction_mix: expected an object");
        }
        p.instruction_mix = {};
        for (const auto& [key, value] : mix.items()) {
            const auto c = instruction_class_from_string(key);
            if (!c) {
                throw std::runtime_error(file.string() +
                                         ": instruction_mix: unknown instruction class '" +
                                         key + "'");
            }
            at(p.instruction_mix, *c) =
                as_double(value, file, "instruction_mix." + key);
        }
    }
    if (obj.contains("issue_rate")) {
        p.issue_rate = as_double(obj.at("issue_rate"), file, "issue_rate");
    }
    if (obj.contains("active_fraction")) {
        p.active_fraction = as_double(obj.at("active_fraction"), file, "active_fraction");
    }
    if (obj.contains("stall_mix")) {
        const json& mix = obj.at("stall_mix");
        reject_unknown_keys(mix, {"memory", "scheduler", "throttle", "other"}, file,
                            "stall_mix");
        p.stall_mix.memory = as_double(require_key(mix, "memory", file, "stall_mix"), file,
                                       "stall_mix.memory");
        p.stall_mix.scheduler = as_double(require_key(mix, "scheduler", file, "stall_mix"),
                                          file, "stall_mix.scheduler");
        p.stall_mix.throttle = as_double(require_key(mix, "throttle", file, "stall_mix"),
                                         file, "stall_mix.throttle");
        p.stall_mix.other = as_double(require_key(mix, "other", file, "stall_mix"), file,
                                      "stall_mix.other");
    }
    if (obj.contains("dram_intensity_bpf")) {
        p.dram_intensity_bpf = as_double(obj.at("dram_intensity_bpf"), file,
                                         "dram_intensity_bpf");
    }
    if (obj.contains("p_idle_w")) p.p_idle_w = as_double(obj.at("p_idle_w"), file, "p_idle_w");
    if (obj.contains("p_max_w")) p.p_max_w = as_double(obj.at("p_max_w"), file, "p_max_w");
    if (obj.contains("tau_s")) p.tau_s = as_double(obj.at("tau_s"), file, "tau_s");
    if (obj.contains("r_th_c_per_w")) {
        p.r_th_c_per_w = as_double(obj.at("r_th_c_per_w"), file, "r_th_c_per_w");
    }
    if (obj.contains("t_amb_c")) p.t_amb_c = as_double(obj.at("t_amb_c"), file, "t_amb_c");
    if (obj.contains("cf_max_mhz")) {
        p.cf_max_mhz = as_double(obj.at("cf_max_mhz"), file, "cf_max_mhz");
    }
    if (obj.contains("cf_min_mhz")) {
        p.cf_min_mhz = as_double(obj.at("cf_min_mhz"), file, "cf_min_mhz");
    }
    if (obj.contains("throttle_temp_c") && !obj.at("throttle_temp_c").is_null()) {
        p.throttle_temp_c = as_double(obj.at("throttle_temp_c"), file, "throttle_temp_c");
    }
    if (obj.contains("throttle_step_mhz")) {
        p.throttle_step_mhz = as_double(obj.at("throttle_step_mhz"), file,
                                        "throttle_step_mhz");
    }
    if (obj.contains("duration_s")) {
        p.duration_s = as_double(obj.at("duration_s"), file, "duration_s");
    }
    if (obj.contains("noise_temp_c")) {
        p.noise_temp_c = as_double(obj.at("noise_temp_c"), file, "noise_temp_c");
    }
    if (obj.contains("seed")) {
        const json& seed = obj.at("seed");
        if (!seed.is_number_unsigned()) {
            throw std::runtime_error(file.string() + ": seed: expected a non-negative integer");
        }
        p.seed = seed.get<std::uint64_t>();
    }

    const auto findings = validate_profile(p);
    if (!findings.empty()) {
        throw std::invalid_argument(file.string() + ": " + findings.front().path + ": " +
                                    findings.front().message);
    }
    return p;
}

}  // namespace gpustress
