#include "gpustress/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpustress {

double GaussianSampler::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Box-Muller; mt19937_64 output is pinned by the standard, so the stream
    // is reproducible across library implementations.
    const double u1 = 1.0 - std::ldexp(static_cast<double>(rng_() >> 11), -53);
    const double u2 = std::ldexp(static_cast<double>(rng_() >> 11), -53);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

namespace {

bool finite_in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

void check(std::vector<ValidationFinding>& out, bool ok, const std::string& path,
           const std::string& message) {
    if (!ok) out.push_back({Severity::Error, path, message});
}

// Splits `total` across the classes in proportion to `mix`, exactly
// preserving the total (largest-remainder rounding).
PerClass<std::uint64_t> split_by_mix(std::uint64_t total, const PerClass<double>& mix) {
    PerClass<std::uint64_t> out{};
    PerClass<double> fraction{};
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < kNumInstructionClasses; ++i) {
        const double exact = mix[i] * static_cast<double>(total);
        out[i] = static_cast<std::uint64_t>(exact);
        fraction[i] = exact - static_cast<double>(out[i]);
        assigned += out[i];
    }
    std::uint64_t leftover = total - assigned;
    while (leftover > 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < kNumInstructionClasses; ++i) {
            if (fraction[i] > fraction[best]) best = i;
        }
        ++out[best];
        fraction[best] = -1.0;
        --leftover;
    }
    return out;
}

}  // namespace

std::vector<ValidationFinding> validate_profile(const SynthProfile& p) {
    std::vector<ValidationFinding> out;
    check(out, !p.name.empty(), "name", "must be non-empty");
    check(out, finite_in_unit(p.utilization), "utilization", "must be in [0,1]");
    check(out, finite_in_unit(p.issue_rate), "issue_rate", "must be in [0,1]");
    check(out, finite_in_unit(p.active_fraction), "active_fraction", "must be in [0,1]");

    double mix_sum = 0.0;
    for (InstructionClass c : kAllInstructionClasses) {
        const double f = at(p.instruction_mix, c);
        check(out, finite_in_unit(f),
              "instruction_mix." + std::string(to_string(c)), "must be in [0,1]");
        mix_sum += f;
    }
    check(out, std::abs(mix_sum - 1.0) <= 1e-9, "instruction_mix",
          "fractions must sum to 1");

    check(out, finite_in_unit(p.stall_mix.memory) && finite_in_unit(p.stall_mix.scheduler) &&
                   finite_in_unit(p.stall_mix.throttle) && finite_in_unit(p.stall_mix.other),
          "stall_mix", "proportions must be in [0,1]");
    check(out, std::abs(p.stall_mix.sum() - 1.0) <= 1e-9, "stall_mix",
          "proportions must sum to 1");

    check(out, std::isfinite(p.dram_intensity_bpf) && p.dram_intensity_bpf >= 0.0,
          "dram_intensity_bpf", "must be non-negative");
    check(out, std::isfinite(p.p_idle_w) && p.p_idle_w >= 0.0, "p_idle_w",
          "must be non-negative");
    check(out, std::isfinite(p.p_max_w) && p.p_max_w >= p.p_idle_w, "p_max_w",
          "must be at least p_idle_w");
    check(out, std::isfinite(p.tau_s) && p.tau_s >= 1.0, "tau_s",
          "must be at least 1 s (explicit Euler at 1 s steps)");
    check(out, std::isfinite(p.r_th_c_per_w) && p.r_th_c_per_w >= 0.0, "r_th_c_per_w",
          "must be non-negative");
    check(out, std::isfinite(p.t_amb_c), "t_amb_c", "must be finite");
    check(out, std::isfinite(p.cf_max_mhz) && p.cf_max_mhz > 0.0, "cf_max_mhz",
          "must be positive");
    check(out, std::isfinite(p.cf_min_mhz) && p.cf_min_mhz > 0.0 &&
                   p.cf_min_mhz <= p.cf_max_mhz,
          "cf_min_mhz", "must be in (0, cf_max_mhz]");
    check(out, !std::isnan(p.throttle_temp_c), "throttle_temp_c", "must not be NaN");
    check(out, std::isfinite(p.throttle_step_mhz) && p.throttle_step_mhz >= 0.0,
          "throttle_step_mhz", "must be non-negative");
    const double rounded = std::round(p.duration_s);
    check(out, std::isfinite(p.duration_s) && rounded >= 1.0 &&
                   std::abs(p.duration_s - rounded) <= 1e-9,
          "duration_s", "must be a whole number of seconds, at least 1");
    check(out, std::isfinite(p.noise_temp_c) && p.noise_temp_c >= 0.0, "noise_temp_c",
          "must be non-negative");
    return out;
}

WorkloadTrace generate(const SynthProfile& p, const HardwareSpec& hw) {
    const auto profile_findings = validate_profile(p);
    if (!profile_findings.empty()) {
        throw std::invalid_argument("generate: invalid profile: " +
                                    profile_findings.front().path + ": " +
                                    profile_findings.front().message);
    }
    const auto hw_findings = validate_hardware(hw);
    if (!hw_findings.empty()) {
        throw std::invalid_argument("generate: invalid hardware: " +
                                    hw_findings.front().path + ": " +
                                    hw_findings.front().message);
    }

    const auto steps = static_cast<std::size_t>(std::llround(p.duration_s));
    GaussianSampler noise(p.seed);

    WorkloadTrace trace;
    trace.workload_name = p.name;
    trace.category = p.category;
    trace.ambient_c = p.t_amb_c;
    trace.telemetry.reserve(steps + 1);
    trace.kernels.reserve(steps);

    double temp = p.t_amb_c + p.p_idle_w * p.r_th_c_per_w;  // idle equilibrium
    double clock = p.cf_max_mhz;
    double energy_j = 0.0;
    double prev_power = 0.0;

    for (std::size_t i = 0; i <= steps; ++i) {
        const double power =
            p.p_idle_w + (p.p_max_w - p.p_idle_w) * p.utilization * (clock / p.cf_max_mhz);
        if (i > 0) energy_j += 0.5 * (prev_power + power) * 1.0;

        TelemetrySample sample;
        sample.t_s = static_cast<double>(i);
        sample.temp_c = p.noise_temp_c > 0.0 ? temp + p.noise_temp_c * noise.next() : temp;
        sample.power_w = power;
        sample.energy_j = energy_j;
        sample.sm_clock_mhz = clock;
        trace.telemetry.push_back(sample);

        if (i == steps) break;

        // Counter bookkeeping for the second [i, i+1) at the current clock.
        KernelCounters k;
        k.kernel_name = p.name;
        k.invocation_index = static_cast<std::uint64_t>(i);
        k.duration_s = 1.0;
        k.elapsed_cycles = static_cast<std::uint64_t>(std::llround(clock * 1e6));
        k.active_cycles = static_cast<std::uint64_t>(
            std::llround(p.active_fraction * static_cast<double>(k.elapsed_cycles)));
        const auto executed_total = static_cast<std::uint64_t>(std::llround(
            p.utilization * hw.peak_ipc_per_sm * static_cast<double>(k.active_cycles) *
            hw.warp_size));
        k.executed_by_class = split_by_mix(executed_total, p.instruction_mix);
        k.issued_instructions = static_cast<std::uint64_t>(std::llround(
            p.issue_rate * hw.peak_issue_per_subpartition * hw.subpartitions_per_sm *
            static_cast<double>(k.active_cycles)));

        double flops = 0.0;
        for (InstructionClass c : kAllInstructionClasses) {
            flops += static_cast<double>(at(k.executed_by_class, c)) * hw.warp_size *
                     at(hw.flop_weights, c);
        }
        k.dram_bytes =
            static_cast<std::uint64_t>(std::llround(flops * p.dram_intensity_bpf));

        constexpr double kStallEventsPerSecond = 1e6;
        k.stalls.memory = static_cast<std::uint64_t>(
            std::llround(p.stall_mix.memory * kStallEventsPerSecond));
        k.stalls.scheduler = static_cast<std::uint64_t>(
            std::llround(p.stall_mix.scheduler * kStallEventsPerSecond));
        k.stalls.throttle = static_cast<std::uint64_t>(
            std::llround(p.stall_mix.throttle * kStallEventsPerSecond));
        const std::uint64_t activity =
            k.stalls.memory + k.stalls.scheduler + k.stalls.throttle;
        k.stalls.other =
            activity < static_cast<std::uint64_t>(kStallEventsPerSecond)
                ? static_cast<std::uint64_t>(kStallEventsPerSecond) - activity
                : 0;
        trace.kernels.push_back(k);

        // Advance the latent state, then let the governor react.
        temp += (power * p.r_th_c_per_w + p.t_amb_c - temp) / p.tau_s;
        if (temp > p.throttle_temp_c) {
            clock = std::max(clock - p.throttle_step_mhz, p.cf_min_mhz);
        }
        prev_power = power;
    }
    return trace;
}

SynthProfile preset(const std::string& name) {
    for (SynthProfile& p : presets()) {
        if (p.name == name) return std::move(p);
    }
    throw std::invalid_argument("preset: no preset named '" + name + "'");
}

#include "presets_table.inc"

}  // namespace gpustress
