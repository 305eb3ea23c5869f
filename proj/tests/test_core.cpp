#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gpustress/core.hpp"

using namespace gpustress;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

WorkloadTrace small_valid_trace() {
    WorkloadTrace t;
    t.workload_name = "unit";
    t.category = "benchmark";
    for (int i = 0; i < 12; ++i) {
        TelemetrySample s;
        s.t_s = static_cast<double>(i);
        s.temp_c = 40.0 + i;
        s.power_w = 25.0;
        s.energy_j = 25.0 * i;
        s.sm_clock_mhz = 2000.0;
        t.telemetry.push_back(s);
    }
    KernelCounters k;
    k.kernel_name = "k";
    k.executed_by_class = {100, 0, 0, 0, 0, 0, 0};
    k.issued_instructions = 400;
    k.active_cycles = 1000;
    k.elapsed_cycles = 2000;
    k.dram_bytes = 4096;
    k.stalls = {10, 5, 1, 84};
    k.duration_s = 1.0;
    t.kernels.push_back(k);
    t.ambient_c = 40.0;
    return t;
}

}  // namespace

TEST_CASE("instruction class names round-trip") {
    for (InstructionClass c : kAllInstructionClasses) {
        const auto back = instruction_class_from_string(to_string(c));
        REQUIRE(back.has_value());
        CHECK(*back == c);
    }
    CHECK(!instruction_class_from_string("mma").has_value());
    CHECK(!instruction_class_from_string("").has_value());
    CHECK(!instruction_class_from_string("ALU").has_value());
}

TEST_CASE("per-class accessors address the right slot") {
    PerClass<double> w = {1, 2, 3, 4, 5, 6, 7};
    CHECK(at(w, InstructionClass::Alu) == 1);
    CHECK(at(w, InstructionClass::Fp16) == 2);
    CHECK(at(w, InstructionClass::Xu) == 7);
    at(w, InstructionClass::Hmma) = 64;
    CHECK(w[4] == 64);
}

TEST_CASE("radar axis inversion marks recovery time and stalls only") {
    CHECK(axis_is_inverted("t_r"));
    CHECK(axis_is_inverted("s_act"));
    CHECK(!axis_is_inverted("sm_busy_rate"));
    CHECK(!axis_is_inverted("aii"));
    CHECK(!axis_is_inverted("t_inf"));
    CHECK(!axis_is_inverted("energy"));
    CHECK(!axis_is_inverted("delta_cf"));
}

TEST_CASE("default hardware passes validation") {
    CHECK(validate_hardware(default_hardware()).empty());
}

TEST_CASE("hardware validation flags non-positive and non-finite fields") {
    HardwareSpec hw = default_hardware();
    hw.peak_gflops = 0.0;
    CHECK(has_errors(validate_hardware(hw)));

    hw = default_hardware();
    hw.peak_bandwidth_gbps = -1.0;
    CHECK(has_errors(validate_hardware(hw)));

    hw = default_hardware();
    hw.warp_size = 0;
    CHECK(has_errors(validate_hardware(hw)));

    hw = default_hardware();
    hw.peak_ipc_per_sm = kNan;
    CHECK(has_errors(validate_hardware(hw)));

    hw = default_hardware();
    at(hw.flop_weights, InstructionClass::Hmma) = 0.0;
    const auto findings = validate_hardware(hw);
    REQUIRE(has_errors(findings));
    CHECK(findings.front().path == "flop_weights.hmma");
}

TEST_CASE("valid trace produces no errors") {
    const auto findings = validate_trace(small_valid_trace());
    CHECK(!has_errors(findings));
}

TEST_CASE("telemetry-only trace warns but is not an error") {
    WorkloadTrace t = small_valid_trace();
    t.kernels.clear();
    const auto findings = validate_trace(t);
    CHECK(!has_errors(findings));
    bool warned = false;
    for (const ValidationFinding& f : findings) {
        warned |= f.severity == Severity::Warning && f.path == "kernels";
    }
    CHECK(warned);
}

TEST_CASE("empty telemetry is an error") {
    WorkloadTrace t = small_valid_trace();
    t.telemetry.clear();
    CHECK(has_errors(validate_trace(t)));
}

TEST_CASE("trace validation names the offending sample") {
    WorkloadTrace t = small_valid_trace();
    t.telemetry[3].energy_j = t.telemetry[2].energy_j - 1.0;
    const auto findings = validate_trace(t);
    REQUIRE(has_errors(findings));
    CHECK(findings.front().path == "telemetry[3].energy_j");
}

TEST_CASE("non-increasing timestamps are an error") {
    WorkloadTrace t = small_valid_trace();
    t.telemetry[5].t_s = t.telemetry[4].t_s;
    CHECK(has_errors(validate_trace(t)));
}

TEST_CASE("active cycles beyond elapsed cycles are an error") {
    WorkloadTrace t = small_valid_trace();
    t.kernels[0].active_cycles = t.kernels[0].elapsed_cycles + 1;
    CHECK(has_errors(validate_trace(t)));
}

TEST_CASE("random single-field corruption is always detected") {
    std::mt19937 rng(20240817);
    const WorkloadTrace base = small_valid_trace();

    for (int trial = 0; trial < 1000; ++trial) {
        WorkloadTrace t = base;
        const std::size_t i =
            std::uniform_int_distribution<std::size_t>(1, t.telemetry.size() - 1)(rng);
        switch (std::uniform_int_distribution<int>(0, 9)(rng)) {
            case 0: t.telemetry[i].t_s = t.telemetry[i - 1].t_s; break;
            case 1: t.telemetry[i].t_s = -1.0; break;
            case 2: t.telemetry[i].power_w = -5.0; break;
            case 3: t.telemetry[i].sm_clock_mhz = -1.0; break;
            case 4: t.telemetry[i].energy_j = t.telemetry[i - 1].energy_j - 0.5; break;
            case 5: t.telemetry[i].temp_c = kNan; break;
            case 6: t.telemetry[i].energy_j = kInf; break;
            case 7: t.kernels[0].active_cycles = t.kernels[0].elapsed_cycles + 1; break;
            case 8: t.kernels[0].duration_s = 0.0; break;
            case 9: t.ambient_c = kNan; break;
        }
        CAPTURE(trial);
        CHECK(has_errors(validate_trace(t)));
    }
}

TEST_CASE("traces are value types") {
    const WorkloadTrace a = small_valid_trace();
    WorkloadTrace b = small_valid_trace();
    CHECK(a == b);
    b.telemetry[1].temp_c += 0.5;
    CHECK(a != b);
}

TEST_CASE("thermal fit flag lookup") {
    ThermalFit fit;
    fit.flags = {"tau at bound", "unconverged"};
    CHECK(fit.has_flag("unconverged"));
    CHECK(!fit.has_flag("no transient"));
}
