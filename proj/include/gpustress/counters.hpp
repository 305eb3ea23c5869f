#pragma once

#include <span>
#include <vector>

#include "gpustress/core.hpp"

// Counter-derived metrics. All functions are pure; inputs come from the
// per-kernel counter samples of a trace, summed into one aggregate.
namespace gpustress {

// Collector for non-fatal analysis warnings. Functions taking a Warnings*
// accept nullptr when the caller does not care.
struct Warnings {
    std::vector<std::string> messages;
    void add(std::string msg) { messages.push_back(std::move(msg)); }
};

struct CounterAggregate {
    PerClass<std::uint64_t> total_executed_by_class = {};
    std::uint64_t total_issued = 0;
    std::uint64_t total_active_cycles = 0;
    std::uint64_t total_elapsed_cycles = 0;
    std::uint64_t total_dram_bytes = 0;
    StallCounters total_stalls;
    double total_duration_s = 0.0;

    bool operator==(const CounterAggregate&) const = default;
};

// Component-wise sums over all kernel samples. Throws std::invalid_argument
// on an empty list.
CounterAggregate aggregate(std::span<const KernelCounters> kernels);

// Executed warp instructions per active cycle relative to the peak IPC,
// in percent, clamped to [0, 100]. Sums over all throughput classes.
// Throws std::invalid_argument when total_active_cycles is zero.
double sm_busy_rate(const CounterAggregate& agg, const HardwareSpec& hw,
                    Warnings* warnings = nullptr);

// Issued instructions per active cycle per SM subpartition relative to the
// peak issue rate, in percent, clamped to [0, 100].
// Throws std::invalid_argument when total_active_cycles is zero.
double aii(const CounterAggregate& agg, const HardwareSpec& hw,
           Warnings* warnings = nullptr);

// Share of stalls attributable to device activity (memory + scheduler +
// throttle) among all stalls, in percent. A zero stall total yields 0 with
// a warning rather than an error; synthetic idle traces are legal inputs.
double s_act(const StallCounters& stalls, Warnings* warnings = nullptr);

// Total floating-point work: sum over classes of
//   executed_warp_instructions * warp_size * flop_weight.
// Integer throughput-class instructions (IMMA) are included; the counter
// group treats them as arithmetic work.
double total_flops(const CounterAggregate& agg, const HardwareSpec& hw);

// total_flops / duration, in GFLOP/s. Throws on zero duration.
double throughput_gflops(const CounterAggregate& agg, const HardwareSpec& hw);

// total_flops / dram bytes, FLOP/byte. Zero traffic with nonzero FLOPs
// yields +infinity and a "no memory traffic" warning.
double arithmetic_intensity(const CounterAggregate& agg, const HardwareSpec& hw,
                            Warnings* warnings = nullptr);

}  // namespace gpustress
