// Tunes the built-in synthetic presets so the analysis pipeline lands on the
// reference dataset targets, then emits src/presets_table.inc. Deterministic:
// same targets in, same table out.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "gpustress/ingest.hpp"
#include "gpustress/stress.hpp"
#include "gpustress/synthgen.hpp"

using namespace gpustress;

namespace {

struct Target {
    const char* name;
    const char* category;
    double smb_pct, aii_pct, s_act_pct;
    double t_inf_c;
    double energy_kj;
    double delta_cf_mhz;
    double ai, tp_gflops;
    // Shape knobs that are chosen, not fitted: thermal time constant,
    // mean FLOP weight (sets the instruction mix), governor step.
    double tau_s;
    double mean_weight;
    double step_mhz;
    bool throttled;
    double stall_mem, stall_sched, stall_throttle;
    std::uint64_t seed;
};

// Several nominal values double as endpoints of the family-wide range checks
// in the reference dataset. The fitted thermal metrics only converge to within
// ~0.01 C / 1e-4 / 1 MHz, so targets that sit exactly on a closed endpoint are
// nudged inside the range; the shift stays far below the per-workload value
// tolerances.
const Target kTargets[] = {
    {"gpu-burn", "reference", 74.82, 74.81, 9.16, 64.97, 7.12, 740.0, 181.25, 4019.0,
     56.0, 3.5, 8.0, true, 0.05, 0.03, 0.0116, 1001},
    {"lenet5", "cnn", 51.30, 21.50, 14.20, 59.6, 5.47, 126.0, 19.92, 967.70,
     65.0, 1.5, 2.0, true, 0.08, 0.05, 0.012, 1002},
    {"mobilenetv2", "cnn", 49.27, 22.40, 14.80, 61.5, 5.61, 180.0, 11.22, 802.64,
     68.0, 1.5, 3.0, true, 0.085, 0.051, 0.012, 1003},
    {"mnasnet", "cnn", 45.74, 23.80, 13.90, 63.1, 5.87, 320.0, 12.42, 1882.94,
     62.0, 2.5, 3.0, true, 0.08, 0.047, 0.012, 1004},
    {"resnet18", "cnn", 59.04, 24.90, 13.10, 62.5, 5.97, 410.0, 25.24, 2306.32,
     60.0, 2.5, 4.0, true, 0.075, 0.044, 0.012, 1005},
    {"back-propagation", "benchmark", 79.61, 16.30, 13.50, 54.9, 5.40, 90.0, 29.76, 33.34,
     48.0, 1.0, 2.0, true, 0.04, 0.08, 0.015, 1006},
    {"hotspot", "benchmark", 88.38, 9.00, 11.80, 55.45, 5.40, 80.0, 2.34, 11.69,
     45.0, 1.0, 2.0, true, 0.03, 0.075, 0.013, 1007},
    {"gaussian-elimination", "benchmark", 6.30, 4.50, 21.00, 53.4, 4.82, 0.0, 1.80, 3.20,
     78.0, 1.0, 30.0, false, 0.13, 0.06, 0.02, 1008},
    {"needleman-wunsch", "benchmark", 3.48, 2.10, 24.50, 53.1, 4.86, 0.0, 0.57, 0.41,
     82.0, 1.0, 30.0, false, 0.15, 0.075, 0.02, 1009},
    {"streamcluster", "benchmark", 11.21, 7.80, 19.50, 53.9, 4.94, 0.0, 5.27, 7.51,
     75.0, 1.0, 30.0, false, 0.12, 0.055, 0.02, 1010},
};

HardwareSpec paper_hw() {
    HardwareSpec hw = default_hardware();
    hw.name = "rtx4060-paper";
    hw.peak_gflops = 6450.0;
    hw.peak_bandwidth_gbps = 25.22;
    hw.num_sms = 24;
    return hw;
}

struct Measured {
    double smb = 0, aii = 0, s_act = 0;
    double t_inf = 0, t_r = 0, tau = 0;
    double e_kj = 0, dcf = 0;
    double tp = 0, ai = 0;
    double sum_elapsed = 0;
};

Measured measure(const SynthProfile& p, const HardwareSpec& hw) {
    const WorkloadTrace trace = generate(p, hw);
    const AnalysisResult r = build_metric_set(trace, hw);
    Measured m;
    m.smb = r.metrics.sm_busy_rate_pct.value();
    m.aii = r.metrics.aii_pct.value();
    m.s_act = r.metrics.s_act_pct.value();
    m.t_inf = r.metrics.t_inf_c;
    m.t_r = r.metrics.t_r_s;
    m.tau = r.thermal.tau_s;
    m.e_kj = r.metrics.energy_kj;
    m.dcf = r.metrics.delta_cf_mhz;
    m.tp = r.metrics.throughput_gflops.value();
    m.ai = r.metrics.arithmetic_intensity.value();
    for (const KernelCounters& k : trace.kernels) {
        m.sum_elapsed += static_cast<double>(k.elapsed_cycles);
    }
    return m;
}

SynthProfile base_profile(const Target& t) {
    SynthProfile p;
    p.name = t.name;
    p.category = t.category;
    p.utilization = t.smb_pct / 100.0;
    p.issue_rate = t.aii_pct / 100.0;
    p.active_fraction = 0.5;  // placed by the throughput pass
    const double hmma = (t.mean_weight - 1.0) / 63.0;
    p.instruction_mix = {1.0 - hmma, 0, 0, 0, hmma, 0, 0};
    p.stall_mix.memory = t.stall_mem;
    p.stall_mix.scheduler = t.stall_sched;
    p.stall_mix.throttle = t.stall_throttle;
    p.stall_mix.other = 1.0 - (t.stall_mem + t.stall_sched + t.stall_throttle);
    p.dram_intensity_bpf = 1.0 / t.ai;
    p.p_idle_w = 10.0;
    p.tau_s = t.tau_s;
    p.t_amb_c = 30.0;
    p.cf_max_mhz = 2460.0;
    p.cf_min_mhz = 210.0;
    p.throttle_step_mhz = t.step_mhz;
    p.duration_s = 300.0;
    p.noise_temp_c = 0.2;
    p.seed = t.seed;
    return p;
}

// Fits p_max / r_th (and the throttle threshold for throttled presets) so the
// measured energy, steady temperature, and clock deficit land on target.
SynthProfile calibrate(const Target& t, const HardwareSpec& hw, Measured& final_m) {
    SynthProfile p = base_profile(t);
    const double duration = p.duration_s;
    const double p_mean_target = t.energy_kj * 1000.0 / duration;

    if (!t.throttled) {
        p.throttle_temp_c = std::numeric_limits<double>::infinity();
        // Constant clock, so mean power maps straight to p_max.
        p.p_max_w = p.p_idle_w + (p_mean_target - p.p_idle_w) / p.utilization;
        p.r_th_c_per_w = (t.t_inf_c - p.t_amb_c) / p_mean_target;
        for (int iter = 0; iter < 40; ++iter) {
            const Measured m = measure(p, hw);
            const double t_err = t.t_inf_c - m.t_inf;
            const double e_ratio = t.energy_kj / m.e_kj;
            if (std::abs(t_err) < 0.002 && std::abs(e_ratio - 1.0) < 1e-4) break;
            p.p_max_w = p.p_idle_w + (p.p_max_w - p.p_idle_w) * e_ratio;
            p.r_th_c_per_w += t_err / p_mean_target;
        }
    } else {
        // Reparametrize so each knob owns one target: the threshold tracks the
        // steady temperature, the overdrive depth (full-power asymptote minus
        // threshold) owns the clock deficit, and r_th is derived from both.
        // Solving for r_th and the threshold directly is stiff: the deficit
        // moves by hundreds of MHz per degree of threshold at low power spans.
        const double mean_cf_est = p.cf_max_mhz - t.delta_cf_mhz;
        p.p_max_w = p.p_idle_w + (p_mean_target - p.p_idle_w) /
                                     (p.utilization * mean_cf_est / p.cf_max_mhz);
        double thresh = t.t_inf_c + 0.3;
        double p_full = p.p_idle_w + (p.p_max_w - p.p_idle_w) * p.utilization;
        double depth = 1.5 * t.delta_cf_mhz * p.utilization *
                       (p.p_max_w - p.p_idle_w) *
                       ((thresh - p.t_amb_c) / p_full) / p.cf_max_mhz;
        depth = std::max(depth, 0.2);
        for (int iter = 0; iter < 120; ++iter) {
            p_full = p.p_idle_w + (p.p_max_w - p.p_idle_w) * p.utilization;
            p.throttle_temp_c = thresh;
            p.r_th_c_per_w = (thresh + depth - p.t_amb_c) / p_full;
            const Measured m = measure(p, hw);
            const double t_err = t.t_inf_c - m.t_inf;
            const double e_ratio = t.energy_kj / m.e_kj;
            const double dcf_err = std::abs(m.dcf - t.delta_cf_mhz);
            const bool done = std::abs(t_err) < 0.01 &&
                              std::abs(e_ratio - 1.0) < 1e-4 &&
                              dcf_err < std::max(0.004 * t.delta_cf_mhz, 1.0);
            if (done) break;
            p.p_max_w = p.p_idle_w + (p.p_max_w - p.p_idle_w) * e_ratio;
            thresh += t_err;
            if (m.dcf <= 0.0) {
                depth *= 2.0;  // not throttling yet; push the asymptote up
            } else {
                depth *= std::pow(t.delta_cf_mhz / m.dcf, 0.7);
            }
        }
    }

    // Throughput pass: pick the active fraction that lands total FLOPs on the
    // roofline throughput, given the converged clock trajectory.
    for (int iter = 0; iter < 8; ++iter) {
        const Measured m = measure(p, hw);
        const double flops_target = t.tp_gflops * 1e9 * duration;
        const double per_active = p.utilization * hw.peak_ipc_per_sm * hw.warp_size *
                                  hw.warp_size * t.mean_weight;
        double af = flops_target / (per_active * m.sum_elapsed);
        if (iter > 0 && m.tp > 0.0) af = p.active_fraction * t.tp_gflops / m.tp;
        if (af > 1.0) {
            std::fprintf(stderr,
                         "%s: active_fraction %.3f exceeds 1; raise mean_weight\n",
                         t.name, af);
            af = 1.0;
        }
        p.active_fraction = af;
        const Measured check = measure(p, hw);
        if (std::abs(check.tp / t.tp_gflops - 1.0) < 2e-3) break;
    }

    final_m = measure(p, hw);
    return p;
}

void emit_preset(std::string& out, const SynthProfile& p) {
    auto field = [&](const char* name, const std::string& value) {
        out += "        p.";
        out += name;
        out += " = ";
        out += value;
        out += ";\n";
    };
    out += "    {\n        SynthProfile p;\n";
    field("name", "\"" + p.name + "\"");
    field("category", "\"" + p.category + "\"");
    field("utilization", format_double(p.utilization));
    std::string mix = "{";
    for (std::size_t i = 0; i < kNumInstructionClasses; ++i) {
        if (i) mix += ", ";
        mix += format_double(p.instruction_mix[i]);
    }
    mix += "}";
    field("instruction_mix", mix);
    field("issue_rate", format_double(p.issue_rate));
    field("active_fraction", format_double(p.active_fraction));
    field("stall_mix",
          "{" + format_double(p.stall_mix.memory) + ", " +
              format_double(p.stall_mix.scheduler) + ", " +
              format_double(p.stall_mix.throttle) + ", " +
              format_double(p.stall_mix.other) + "}");
    field("dram_intensity_bpf", format_double(p.dram_intensity_bpf));
    field("p_idle_w", format_double(p.p_idle_w));
    field("p_max_w", format_double(p.p_max_w));
    field("tau_s", format_double(p.tau_s));
    field("r_th_c_per_w", format_double(p.r_th_c_per_w));
    field("t_amb_c", format_double(p.t_amb_c));
    field("cf_max_mhz", format_double(p.cf_max_mhz));
    field("cf_min_mhz", format_double(p.cf_min_mhz));
    field("throttle_temp_c", std::isinf(p.throttle_temp_c)
                                 ? "std::numeric_limits<double>::infinity()"
                                 : format_double(p.throttle_temp_c));
    field("throttle_step_mhz", format_double(p.throttle_step_mhz));
    field("duration_s", format_double(p.duration_s));
    field("noise_temp_c", format_double(p.noise_temp_c));
    field("seed", std::to_string(p.seed));
    out += "        out.push_back(p);\n    }\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::string write_path;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--write") == 0 && i + 1 < argc) {
            write_path = argv[++i];
        } else {
            std::fprintf(stderr, "usage: calibrate_presets [--write <presets_table.inc>]\n");
            return 2;
        }
    }

    const HardwareSpec hw = paper_hw();
    std::string table =
        "// Generated by calibrate_presets; re-run that tool instead of editing by "
        "hand.\n\nstd::vector<SynthProfile> presets() {\n    std::vector<SynthProfile> "
        "out;\n    out.reserve(10);\n";

    bool ok = true;
    std::printf("%-22s %10s %10s %10s %10s %10s %10s %10s %8s\n", "preset", "t_inf",
                "e_kj", "delta_cf", "tp", "ai", "smb", "aii", "t_r");
    for (const Target& t : kTargets) {
        Measured m;
        const SynthProfile p = calibrate(t, hw, m);
        emit_preset(table, p);

        const bool t_ok = std::abs(m.t_inf - t.t_inf_c) <= 0.1;
        const bool e_ok = std::abs(m.e_kj / t.energy_kj - 1.0) <= 0.01;
        const bool dcf_ok = t.throttled
                                ? std::abs(m.dcf - t.delta_cf_mhz) <=
                                      std::max(0.02 * t.delta_cf_mhz, 3.0)
                                : m.dcf == 0.0;
        const bool tp_ok = std::abs(m.tp / t.tp_gflops - 1.0) <= 0.005;
        const bool ai_ok = std::abs(m.ai / t.ai - 1.0) <= 0.005;
        const bool pc_ok = std::abs(m.smb - t.smb_pct) <= 0.01 &&
                           std::abs(m.aii - t.aii_pct) <= 0.01 &&
                           std::abs(m.s_act - t.s_act_pct) <= 0.01;
        const bool all = t_ok && e_ok && dcf_ok && tp_ok && ai_ok && pc_ok;
        ok = ok && all;

        std::printf("%-22s %10.3f %10.4f %10.2f %10.2f %10.3f %10.3f %10.3f %8.1f%s\n",
                    t.name, m.t_inf, m.e_kj, m.dcf, m.tp, m.ai, m.smb, m.aii, m.t_r,
                    all ? "" : "  <-- MISSED");
        if (!all) {
            std::printf("    target             %10.3f %10.4f %10.2f %10.2f %10.3f "
                        "%10.3f %10.3f\n",
                        t.t_inf_c, t.energy_kj, t.delta_cf_mhz, t.tp_gflops, t.ai,
                        t.smb_pct, t.aii_pct);
        }
    }
    table += "    return out;\n}\n";

    if (!write_path.empty()) {
        write_file_atomic(write_path, table);
        std::printf("\nwrote %s\n", write_path.c_str());
    } else {
        std::printf("\n%s", table.c_str());
    }
    if (!ok) {
        std::fprintf(stderr, "calibration missed at least one target\n");
        return 1;
    }
    return 0;
}
