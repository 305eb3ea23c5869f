#include "gpustress/counters.hpp"

#include <limits>
#include <stdexcept>

namespace gpustress {

namespace {

double clamp_percent(double raw, const char* metric, Warnings* warnings) {
    if (raw > 100.0) {
        if (warnings) {
            warnings->add(std::string(metric) + " exceeds 100% (raw " +
                          std::to_string(raw) + "); clamped");
        }
        return 100.0;
    }
    if (raw < 0.0) return 0.0;
    return raw;
}

}  // namespace

CounterAggregate aggregate(std::span<const KernelCounters> kernels) {
    if (kernels.empty()) {
        throw std::invalid_argument("aggregate: empty kernel list");
    }
    CounterAggregate agg;
    for (const KernelCounters& k : kernels) {
        for (InstructionClass c : kAllInstructionClasses) {
            at(agg.total_executed_by_class, c) += at(k.executed_by_class, c);
        }
        agg.total_issued += k.issued_instructions;
        agg.total_active_cycles += k.active_cycles;
        agg.total_elapsed_cycles += k.elapsed_cycles;
        agg.total_dram_bytes += k.dram_bytes;
        agg.total_stalls.memory += k.stalls.memory;
        agg.total_stalls.scheduler += k.stalls.scheduler;
        agg.total_stalls.throttle += k.stalls.throttle;
        agg.total_stalls.other += k.stalls.other;
        agg.total_duration_s += k.duration_s;
    }
    return agg;
}

double sm_busy_rate(const CounterAggregate& agg, const HardwareSpec& hw,
                    Warnings* warnings) {
    if (agg.total_active_cycles == 0) {
        throw std::invalid_argument("sm_busy_rate: zero active cycles");
    }
    double executed = 0.0;
    for (InstructionClass c : kAllInstructionClasses) {
        executed += static_cast<double>(at(agg.total_executed_by_class, c));
    }
    const double warp_instr_per_cycle =
        (executed / hw.warp_size) / static_cast<double>(agg.total_active_cycles);
    const double raw = warp_instr_per_cycle / hw.peak_ipc_per_sm * 100.0;
    return clamp_percent(raw, "sm_busy_rate", warnings);
}

double aii(const CounterAggregate& agg, const HardwareSpec& hw, Warnings* warnings) {
    if (agg.total_active_cycles == 0) {
        throw std::invalid_argument("aii: zero active cycles");
    }
    const double issued_per_subpartition_cycle =
        static_cast<double>(agg.total_issued) /
        (static_cast<double>(agg.total_active_cycles) * hw.subpartitions_per_sm);
    const double raw = issued_per_subpartition_cycle / hw.peak_issue_per_subpartition * 100.0;
    return clamp_percent(raw, "aii", warnings);
}

double s_act(const StallCounters& stalls, Warnings* warnings) {
    const std::uint64_t total = stalls.total();
    if (total == 0) {
        if (warnings) warnings->add("s_act: no stall events recorded; reporting 0");
        return 0.0;
    }
    const std::uint64_t activity = stalls.throttle + stalls.scheduler + stalls.memory;
    return static_cast<double>(activity) / static_cast<double>(total) * 100.0;
}

double total_flops(const CounterAggregate& agg, const HardwareSpec& hw) {
    double flops = 0.0;
    for (InstructionClass c : kAllInstructionClasses) {
        flops += static_cast<double>(at(agg.total_executed_by_class, c)) *
                 hw.warp_size * at(hw.flop_weights, c);
    }
    return flops;
}

double throughput_gflops(const CounterAggregate& agg, const HardwareSpec& hw) {
    if (!(agg.total_duration_s > 0.0)) {
        throw std::invalid_argument("throughput_gflops: zero duration");
    }
    return total_flops(agg, hw) / agg.total_duration_s / 1e9;
}

double arithmetic_intensity(const CounterAggregate& agg, const HardwareSpec& hw,
                            Warnings* warnings) {
    const double flops = total_flops(agg, hw);
    if (agg.total_dram_bytes == 0) {
        if (flops == 0.0) return 0.0;
        if (warnings) warnings->add("arithmetic_intensity: no memory traffic");
        return std::numeric_limits<double>::infinity();
    }
    return flops / static_cast<double>(agg.total_dram_bytes);
}

}  // namespace gpustress
