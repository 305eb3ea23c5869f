#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "gpustress/counters.hpp"
#include "gpustress/ingest.hpp"
#include "gpustress/synthgen.hpp"
#include "gpustress/telemetry.hpp"
#include "gpustress/thermal.hpp"

using namespace gpustress;

namespace {

SynthProfile quiet_profile() {
    SynthProfile p;
    p.name = "quiet";
    p.utilization = 0.6;
    p.issue_rate = 0.4;
    p.active_fraction = 0.8;
    p.stall_mix = {0.1, 0.05, 0.0, 0.85};
    p.p_idle_w = 12.0;
    p.p_max_w = 60.0;
    p.tau_s = 120.0;
    p.r_th_c_per_w = 0.8;
    p.duration_s = 600.0;
    p.noise_temp_c = 0.0;
    return p;
}

}  // namespace

TEST_CASE("profile validation rejects out-of-range knobs") {
    CHECK(validate_profile(SynthProfile{}).empty());
    CHECK(validate_profile(quiet_profile()).empty());

    SynthProfile p = quiet_profile();
    p.utilization = 1.2;
    CHECK(has_errors(validate_profile(p)));

    p = quiet_profile();
    p.instruction_mix = {0.5, 0, 0, 0, 0.4, 0, 0};  // sums to 0.9
    CHECK(has_errors(validate_profile(p)));

    p = quiet_profile();
    p.stall_mix = {0.5, 0.5, 0.5, 0.5};
    CHECK(has_errors(validate_profile(p)));

    p = quiet_profile();
    p.p_max_w = p.p_idle_w - 1.0;
    CHECK(has_errors(validate_profile(p)));

    p = quiet_profile();
    p.tau_s = 0.5;
    CHECK(has_errors(validate_profile(p)));

    p = quiet_profile();
    p.duration_s = 10.5;  // not whole seconds
    CHECK(has_errors(validate_profile(p)));

    p = quiet_profile();
    p.cf_min_mhz = p.cf_max_mhz + 1.0;
    CHECK(has_errors(validate_profile(p)));

    p = quiet_profile();
    p.throttle_temp_c = std::numeric_limits<double>::quiet_NaN();
    CHECK(has_errors(validate_profile(p)));

    CHECK_THROWS_AS(generate(p, default_hardware()), std::invalid_argument);
}

TEST_CASE("generation is deterministic") {
    SynthProfile p = quiet_profile();
    p.noise_temp_c = 0.3;
    p.seed = 424242;
    const WorkloadTrace a = generate(p, default_hardware());
    const WorkloadTrace b = generate(p, default_hardware());
    CHECK(a == b);

    p.seed = 424243;
    const WorkloadTrace c = generate(p, default_hardware());
    CHECK(!(a == c));
}

TEST_CASE("generated traces pass validation") {
    const WorkloadTrace t = generate(quiet_profile(), default_hardware());
    CHECK(!has_errors(validate_trace(t)));
    CHECK(t.telemetry.size() == 601);  // duration + 1 samples at 1 Hz
    CHECK(t.kernels.size() == 600);
    CHECK(t.workload_name == "quiet");
}

TEST_CASE("idle power equals max power gives a flat trace at equilibrium") {
    SynthProfile p = quiet_profile();
    p.utilization = 0.0;
    p.instruction_mix = {1, 0, 0, 0, 0, 0, 0};
    p.p_idle_w = 40.0;
    p.p_max_w = 40.0;
    p.duration_s = 100.0;
    const WorkloadTrace t = generate(p, default_hardware());
    const double equilibrium = p.t_amb_c + p.p_idle_w * p.r_th_c_per_w;
    for (const TelemetrySample& s : t.telemetry) {
        CHECK(s.temp_c == doctest::Approx(equilibrium).epsilon(1e-12));
        CHECK(s.power_w == doctest::Approx(40.0));
    }
}

TEST_CASE("temperature follows the discrete first-order lag exactly") {
    const SynthProfile p = quiet_profile();
    const WorkloadTrace t = generate(p, default_hardware());

    // Reference recurrence, recomputed here step by step.
    const double power = p.p_idle_w + (p.p_max_w - p.p_idle_w) * p.utilization;
    double temp = p.t_amb_c + p.p_idle_w * p.r_th_c_per_w;
    const double target = p.t_amb_c + power * p.r_th_c_per_w;
    CHECK(t.telemetry[0].temp_c == doctest::Approx(temp).epsilon(1e-12));
    for (std::size_t i = 1; i < t.telemetry.size(); ++i) {
        temp += (target - temp) / p.tau_s;
        CHECK(t.telemetry[i].temp_c == doctest::Approx(temp).epsilon(1e-12));
    }
    // After five time constants the trace sits within a percent of the target.
    CHECK(std::abs(t.telemetry.back().temp_c - target) < 0.01 * (target - 30.0));
}

TEST_CASE("with throttling off the thermal fit recovers the model parameters") {
    const SynthProfile p = quiet_profile();
    const WorkloadTrace t = generate(p, default_hardware());
    const ThermalFit fit = fit_exponential(t.telemetry);

    const double power = p.p_idle_w + (p.p_max_w - p.p_idle_w) * p.utilization;
    const double t_inf_expected = p.t_amb_c + power * p.r_th_c_per_w;
    CHECK(fit.converged);
    CHECK(std::abs(fit.t_inf_c - t_inf_expected) / t_inf_expected < 0.01);
    CHECK(std::abs(fit.tau_s - p.tau_s) / p.tau_s < 0.01);
}

TEST_CASE("the energy counter equals the trapezoidal power integral exactly") {
    for (double sigma : {0.0, 0.25}) {
        SynthProfile p = quiet_profile();
        p.noise_temp_c = sigma;
        p.throttle_temp_c = 60.0;  // exercise the governor too
        const WorkloadTrace t = generate(p, default_hardware());
        const double counter_j =
            t.telemetry.back().energy_j - t.telemetry.front().energy_j;
        CHECK(counter_j == energy_from_power(t.telemetry));
    }
}

TEST_CASE("counter bookkeeping lands on the profile knobs") {
    const SynthProfile p = quiet_profile();
    const HardwareSpec hw = default_hardware();
    const WorkloadTrace t = generate(p, hw);
    const CounterAggregate agg = aggregate(t.kernels);

    CHECK(sm_busy_rate(agg, hw) == doctest::Approx(100.0 * p.utilization).epsilon(1e-9));
    CHECK(aii(agg, hw) == doctest::Approx(100.0 * p.issue_rate).epsilon(1e-9));
    CHECK(arithmetic_intensity(agg, hw) ==
          doctest::Approx(1.0 / p.dram_intensity_bpf).epsilon(1e-9));
    CHECK(s_act(agg.total_stalls) ==
          doctest::Approx(100.0 * (p.stall_mix.memory + p.stall_mix.scheduler +
                                   p.stall_mix.throttle))
              .epsilon(1e-6));

    // Active cycles follow the requested fraction of elapsed cycles.
    CHECK(static_cast<double>(agg.total_active_cycles) /
              static_cast<double>(agg.total_elapsed_cycles) ==
          doctest::Approx(p.active_fraction).epsilon(1e-6));
}

TEST_CASE("executed instructions are split by the requested mix") {
    SynthProfile p = quiet_profile();
    p.instruction_mix = {0.5, 0.25, 0.0, 0.0, 0.125, 0.0, 0.125};
    const WorkloadTrace t = generate(p, default_hardware());
    const CounterAggregate agg = aggregate(t.kernels);

    double executed = 0.0;
    for (auto e : agg.total_executed_by_class) executed += static_cast<double>(e);
    REQUIRE(executed > 0.0);
    CHECK(static_cast<double>(at(agg.total_executed_by_class, InstructionClass::Alu)) /
              executed ==
          doctest::Approx(0.5).epsilon(1e-9));
    CHECK(static_cast<double>(at(agg.total_executed_by_class, InstructionClass::Fp16)) /
              executed ==
          doctest::Approx(0.25).epsilon(1e-9));
    CHECK(static_cast<double>(at(agg.total_executed_by_class, InstructionClass::Hmma)) /
              executed ==
          doctest::Approx(0.125).epsilon(1e-9));

    // Largest-remainder rounding conserves each row's total exactly.
    const KernelCounters& row = t.kernels.front();
    std::uint64_t row_sum = 0;
    for (auto e : row.executed_by_class) row_sum += e;
    double expected = p.utilization * default_hardware().peak_ipc_per_sm *
                      static_cast<double>(row.active_cycles) *
                      default_hardware().warp_size;
    CHECK(row_sum == static_cast<std::uint64_t>(std::llround(expected)));
}

TEST_CASE("the governor sheds clock only when the threshold is crossed") {
    SynthProfile hot = quiet_profile();
    hot.throttle_temp_c = 50.0;  // equilibrium is ~64.8, so this must throttle
    const WorkloadTrace throttled = generate(hot, default_hardware());
    CHECK(delta_cf(throttled.telemetry) > 0.0);

    SynthProfile cool = quiet_profile();
    cool.throttle_temp_c = 200.0;
    const WorkloadTrace free_running = generate(cool, default_hardware());
    CHECK(delta_cf(free_running.telemetry) == 0.0);

    // Clocks never fall below the floor and never rise again after a shed.
    double prev = hot.cf_max_mhz;
    for (const TelemetrySample& s : throttled.telemetry) {
        CHECK(s.sm_clock_mhz >= hot.cf_min_mhz);
        CHECK(s.sm_clock_mhz <= prev);
        prev = s.sm_clock_mhz;
    }
}

TEST_CASE("raising the throttle threshold never increases the clock deficit") {
    SynthProfile p = quiet_profile();
    p.duration_s = 300.0;
    double prev_dcf = std::numeric_limits<double>::infinity();
    for (double thresh : {45.0, 50.0, 55.0, 60.0, 64.0, 70.0}) {
        p.throttle_temp_c = thresh;
        const WorkloadTrace t = generate(p, default_hardware());
        const double dcf = delta_cf(t.telemetry);
        CHECK(dcf <= prev_dcf);
        prev_dcf = dcf;
    }
}

TEST_CASE("noise perturbs only the reported temperature") {
    SynthProfile p = quiet_profile();
    p.throttle_temp_c = 60.0;
    SynthProfile noisy = p;
    noisy.noise_temp_c = 0.2;

    const WorkloadTrace clean_t = generate(p, default_hardware());
    const WorkloadTrace noisy_t = generate(noisy, default_hardware());
    REQUIRE(clean_t.telemetry.size() == noisy_t.telemetry.size());

    bool temp_differs = false;
    for (std::size_t i = 0; i < clean_t.telemetry.size(); ++i) {
        const auto& a = clean_t.telemetry[i];
        const auto& b = noisy_t.telemetry[i];
        temp_differs |= a.temp_c != b.temp_c;
        CHECK(a.power_w == b.power_w);
        CHECK(a.energy_j == b.energy_j);
        CHECK(a.sm_clock_mhz == b.sm_clock_mhz);
    }
    CHECK(temp_differs);
    CHECK(clean_t.kernels == noisy_t.kernels);
}

TEST_CASE("the ten built-in presets are valid and distinct") {
    const std::vector<SynthProfile> all = presets();
    REQUIRE(all.size() == 10);

    std::set<std::string> names;
    for (const SynthProfile& p : all) {
        CAPTURE(p.name);
        CHECK(validate_profile(p).empty());
        names.insert(p.name);
        const WorkloadTrace t = generate(p, default_hardware());
        CHECK(!has_errors(validate_trace(t)));
    }
    CHECK(names.size() == 10);
    for (const std::string& name : reference_workload_names()) {
        CHECK(names.contains(name));
    }

    CHECK(preset("gpu-burn").name == "gpu-burn");
    CHECK_THROWS_AS(preset("warpstorm"), std::invalid_argument);
}

TEST_CASE("gaussian sampler is deterministic and roughly standard normal") {
    GaussianSampler a(99), b(99);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = a.next();
        CHECK(x == b.next());
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.03);
    CHECK(std::abs(var - 1.0) < 0.05);
}
