#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gpustress/core.hpp"

namespace gpustress {

// Stall-event proportions per simulated second; must sum to 1.
struct StallMix {
    double memory = 0.0;
    double scheduler = 0.0;
    double throttle = 0.0;
    double other = 1.0;

    double sum() const { return memory + scheduler + throttle + other; }
};

// Intensity profile driving the synthetic workload model. Power follows the
// utilization and the current clock; temperature follows a first-order lag;
// a ratchet-down governor sheds clock when the temperature crosses the
// throttle threshold. Kernel counters are book-kept from the same knobs so
// the analysis pipeline sees a self-consistent trace.
struct SynthProfile {
    std::string name = "synthetic";
    std::string category = "synthetic";

    // Execution behavior.
    double utilization = 0.5;          // busy fraction of peak work per active cycle
    PerClass<double> instruction_mix = {1, 0, 0, 0, 0, 0, 0};  // sums to 1
    double issue_rate = 0.5;           // fraction of peak issue slots used
    double active_fraction = 1.0;      // active cycles per elapsed cycle
    StallMix stall_mix;
    double dram_intensity_bpf = 0.1;   // DRAM bytes generated per FLOP

    // Power and thermal model.
    double p_idle_w = 10.0;
    double p_max_w = 100.0;
    double tau_s = 60.0;               // thermal time constant
    double r_th_c_per_w = 0.5;         // thermal resistance
    double t_amb_c = 30.0;

    // Clock governor.
    double cf_max_mhz = 2460.0;
    double cf_min_mhz = 210.0;
    double throttle_temp_c = std::numeric_limits<double>::infinity();
    double throttle_step_mhz = 30.0;   // shed per second while over threshold

    // Run shape.
    double duration_s = 300.0;         // whole seconds; N+1 telemetry samples
    double noise_temp_c = 0.0;         // sigma applied to the reported sensor
    std::uint64_t seed = 1;
};

// Structural checks on a profile; empty result means it is usable.
std::vector<ValidationFinding> validate_profile(const SynthProfile& profile);

// Simulates the profile at 1 Hz and emits a trace whose telemetry, energy
// counter, and kernel counters are mutually consistent. The energy counter
// is the running trapezoidal integral of the power series, so the counter
// delta and a trapezoidal re-integration agree exactly. Deterministic for a
// given (profile, hardware) pair. Throws std::invalid_argument if the
// profile fails validation.
WorkloadTrace generate(const SynthProfile& profile, const HardwareSpec& hw);

// Ten built-in profiles calibrated so the analysis pipeline lands on the
// reference dataset values. Regenerate with the calibrate_presets tool.
std::vector<SynthProfile> presets();

// Convenience lookup by preset name; throws std::invalid_argument if absent.
SynthProfile preset(const std::string& name);

// Deterministic standard-normal sampler (Box-Muller over mt19937_64).
// std::normal_distribution is implementation-defined; this is not.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next();

private:
    std::mt19937_64 rng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace gpustress
