#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Core domain types shared by every analysis stage. Plain value types;
// invariants are checked by validate_* functions rather than constructors so
// that loaders can report *all* problems in a file, not just the first.
namespace gpustress {

// ---------------------------------------------------------------------------
// Instruction classes (the throughput counter group).
// ---------------------------------------------------------------------------
enum class InstructionClass : int {
    Alu = 0,
    Fp16,
    Fp64,
    Dmma,
    Hmma,
    Imma,
    Xu,
};

inline constexpr int kNumInstructionClasses = 7;

inline constexpr std::array<InstructionClass, kNumInstructionClasses> kAllInstructionClasses = {
    InstructionClass::Alu,  InstructionClass::Fp16, InstructionClass::Fp64,
    InstructionClass::Dmma, InstructionClass::Hmma, InstructionClass::Imma,
    InstructionClass::Xu,
};

std::string_view to_string(InstructionClass c);
std::optional<InstructionClass> instruction_class_from_string(std::string_view name);

// Per-class quantities are stored as fixed arrays indexed by InstructionClass.
template <typename T>
using PerClass = std::array<T, kNumInstructionClasses>;

template <typename T>
constexpr T& at(PerClass<T>& a, InstructionClass c) {
    return a[static_cast<int>(c)];
}
template <typename T>
constexpr const T& at(const PerClass<T>& a, InstructionClass c) {
    return a[static_cast<int>(c)];
}

// ---------------------------------------------------------------------------
// Hardware description: device ceilings and normalization constants.
// ---------------------------------------------------------------------------
struct HardwareSpec {
    std::string name;
    double peak_gflops = 0.0;          // compute ceiling, GFLOP/s
    double peak_bandwidth_gbps = 0.0;  // memory ceiling, GB/s (decimal GB)
    int warp_size = 32;
    int num_sms = 1;
    int subpartitions_per_sm = 4;
    double peak_ipc_per_sm = 1.0;             // warp instructions / cycle / SM
    double peak_issue_per_subpartition = 1.0; // issued instructions / cycle / subpartition
    // FLOPs contributed by one executed warp-level instruction, per thread.
    // Matrix-pipe instructions count many MACs per instruction, hence the
    // large default weights; all weights are configurable per device.
    PerClass<double> flop_weights = {1.0, 2.0, 1.0, 64.0, 64.0, 64.0, 1.0};

    bool operator==(const HardwareSpec&) const = default;
};

// Generic spec with unit peaks; useful for tests and formula checks.
HardwareSpec default_hardware();

// ---------------------------------------------------------------------------
// Counter samples.
// ---------------------------------------------------------------------------
struct StallCounters {
    std::uint64_t memory = 0;
    std::uint64_t scheduler = 0;
    std::uint64_t throttle = 0;
    std::uint64_t other = 0;

    std::uint64_t total() const { return memory + scheduler + throttle + other; }

    bool operator==(const StallCounters&) const = default;
};

struct KernelCounters {
    std::string kernel_name;
    std::uint64_t invocation_index = 0;
    PerClass<std::uint64_t> executed_by_class = {}; // warp-level executed instructions
    std::uint64_t issued_instructions = 0;          // summed over SM subpartitions
    std::uint64_t active_cycles = 0;
    std::uint64_t elapsed_cycles = 0;
    std::uint64_t dram_bytes = 0;                   // read + write traffic
    StallCounters stalls;
    double duration_s = 0.0;

    bool operator==(const KernelCounters&) const = default;
};

// ---------------------------------------------------------------------------
// Telemetry samples (1 Hz in practice; the schema does not require it).
// ---------------------------------------------------------------------------
struct TelemetrySample {
    double t_s = 0.0;          // seconds since run start
    double temp_c = 0.0;
    double power_w = 0.0;
    double energy_j = 0.0;     // cumulative counter
    double sm_clock_mhz = 0.0;

    bool operator==(const TelemetrySample&) const = default;
};

struct WorkloadTrace {
    std::string workload_name;
    std::string category;      // e.g. reference | cnn | benchmark
    std::vector<TelemetrySample> telemetry;
    std::vector<KernelCounters> kernels;  // may be empty: telemetry-only trace
    double ambient_c = 0.0;    // defaults to first telemetry sample's temp_c

    bool operator==(const WorkloadTrace&) const = default;
};

// ---------------------------------------------------------------------------
// Validation findings. An empty list means every invariant holds.
// ---------------------------------------------------------------------------
enum class Severity { Error, Warning };

struct ValidationFinding {
    Severity severity = Severity::Error;
    std::string path;     // e.g. "telemetry[12].energy_j"
    std::string message;

    bool operator==(const ValidationFinding&) const = default;
};

std::vector<ValidationFinding> validate_trace(const WorkloadTrace& trace);
std::vector<ValidationFinding> validate_hardware(const HardwareSpec& hw);

// True when the list contains at least one error-severity finding.
bool has_errors(const std::vector<ValidationFinding>& findings);

// ---------------------------------------------------------------------------
// Thermal fit result: T(t) = t_inf + (t0 - t_inf) * exp(-(t - t_first)/tau).
// ---------------------------------------------------------------------------
struct ThermalFit {
    double t_inf_c = 0.0;      // fitted steady-state temperature
    double t0_c = 0.0;         // fitted initial temperature
    double tau_s = 0.0;        // time constant
    double t_r_s = 0.0;        // rise time: tau * ln(20)  (95% settling)
    double rmse_c = 0.0;
    double steady_start_s = 0.0;  // window in absolute trace time
    double steady_end_s = 0.0;
    bool converged = false;
    std::vector<std::string> flags;

    bool has_flag(std::string_view f) const;
};

// ---------------------------------------------------------------------------
// The radar axes for one workload. Counter-derived values are absent for
// telemetry-only traces.
// ---------------------------------------------------------------------------
struct MetricSet {
    std::optional<double> sm_busy_rate_pct;
    std::optional<double> aii_pct;
    std::optional<double> s_act_pct;
    double t_inf_c = 0.0;
    double t_r_s = 0.0;
    double energy_kj = 0.0;
    double energy_rate_w = 0.0;
    double delta_cf_mhz = 0.0;
    std::optional<double> throughput_gflops;
    std::optional<double> arithmetic_intensity;

    bool operator==(const MetricSet&) const = default;
};

// Canonical radar axis names, in display order.
inline constexpr std::array<std::string_view, 7> kRadarAxes = {
    "sm_busy_rate", "aii", "s_act", "t_inf", "t_r", "energy", "delta_cf",
};

// Axis-keyed values; the transparent comparator lets string_view keys look up
// without allocation.
using AxisMap = std::map<std::string, double, std::less<>>;

// Axes where a *lower* raw value means *higher* stress.
bool axis_is_inverted(std::string_view axis);

// ---------------------------------------------------------------------------
// Roofline placement.
// ---------------------------------------------------------------------------
enum class RooflineBound { ComputeBound, MemoryBound };

std::string_view to_string(RooflineBound b);

struct RooflinePoint {
    double arithmetic_intensity = 0.0;
    double throughput_gflops = 0.0;
    double attainable_gflops = 0.0;
    double efficiency_pct = 0.0;   // 100 * throughput / attainable
    RooflineBound bound = RooflineBound::MemoryBound;
    bool above_roof = false;       // measurement exceeds the ceiling; flagged, not rejected

    bool operator==(const RooflinePoint&) const = default;
};

// ---------------------------------------------------------------------------
// Normalized stress profile for one workload within a compared set.
// ---------------------------------------------------------------------------
struct StressProfile {
    std::string name;
    AxisMap normalized_axes;  // axis name -> [0,1]
    double composite_index = 0.0;                   // mean of normalized axes
    int rank = 0;                                   // 1 = most stressful

    bool operator==(const StressProfile&) const = default;
};

}  // namespace gpustress
