#include "gpustress/core.hpp"

#include <algorithm>
#include <cmath>

namespace gpustress {

std::string_view to_string(InstructionClass c) {
    switch (c) {
        case InstructionClass::Alu:  return "alu";
        case InstructionClass::Fp16: return "fp16";
        case InstructionClass::Fp64: return "fp64";
        case InstructionClass::Dmma: return "dmma";
        case InstructionClass::Hmma: return "hmma";
        case InstructionClass::Imma: return "imma";
        case InstructionClass::Xu:   return "xu";
    }
    return "?";
}

std::optional<InstructionClass> instruction_class_from_string(std::string_view name) {
    for (InstructionClass c : kAllInstructionClasses) {
        if (name == to_string(c)) return c;
    }
    return std::nullopt;
}

HardwareSpec default_hardware() {
    HardwareSpec hw;
    hw.name = "generic";
    hw.peak_gflops = 1000.0;
    hw.peak_bandwidth_gbps = 100.0;
    hw.num_sms = 1;
    return hw;
}

std::string_view to_string(RooflineBound b) {
    return b == RooflineBound::ComputeBound ? "compute" : "memory";
}

bool axis_is_inverted(std::string_view axis) {
    return axis == "t_r" || axis == "s_act";
}

bool has_errors(const std::vector<ValidationFinding>& findings) {
    return std::any_of(findings.begin(), findings.end(), [](const ValidationFinding& f) {
        return f.severity == Severity::Error;
    });
}

bool ThermalFit::has_flag(std::string_view f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_finite(std::vector<ValidationFinding>& out, const std::string& path, double v) {
    if (!finite(v)) {
        out.push_back({Severity::Error, path, "value is not finite"});
    }
}

}  // namespace

std::vector<ValidationFinding> validate_hardware(const HardwareSpec& hw) {
    std::vector<ValidationFinding> out;
    auto positive = [&](const std::string& path, double v) {
        check_finite(out, path, v);
        if (finite(v) && v <= 0.0) {
            out.push_back({Severity::Error, path, "must be strictly positive"});
        }
    };
    positive("peak_gflops", hw.peak_gflops);
    positive("peak_bandwidth_gbps", hw.peak_bandwidth_gbps);
    positive("warp_size", hw.warp_size);
    positive("num_sms", hw.num_sms);
    positive("subpartitions_per_sm", hw.subpartitions_per_sm);
    positive("peak_ipc_per_sm", hw.peak_ipc_per_sm);
    positive("peak_issue_per_subpartition", hw.peak_issue_per_subpartition);
    for (InstructionClass c : kAllInstructionClasses) {
        positive("flop_weights." + std::string(to_string(c)), at(hw.flop_weights, c));
    }
    return out;
}

std::vector<ValidationFinding> validate_trace(const WorkloadTrace& trace) {
    std::vector<ValidationFinding> out;

    if (trace.workload_name.empty()) {
        out.push_back({Severity::Warning, "workload_name", "empty workload name"});
    }

    if (trace.telemetry.empty()) {
        out.push_back({Severity::Error, "telemetry", "telemetry is empty"});
        return out;
    }

    for (std::size_t i = 0; i < trace.telemetry.size(); ++i) {
        const TelemetrySample& s = trace.telemetry[i];
        const std::string base = "telemetry[" + std::to_string(i) + "]";
        check_finite(out, base + ".t_s", s.t_s);
        check_finite(out, base + ".temp_c", s.temp_c);
        check_finite(out, base + ".power_w", s.power_w);
        check_finite(out, base + ".energy_j", s.energy_j);
        check_finite(out, base + ".sm_clock_mhz", s.sm_clock_mhz);
        if (s.t_s < 0.0) {
            out.push_back({Severity::Error, base + ".t_s", "negative timestamp"});
        }
        if (s.power_w < 0.0) {
            out.push_back({Severity::Error, base + ".power_w", "negative power"});
        }
        if (s.sm_clock_mhz < 0.0) {
            out.push_back({Severity::Error, base + ".sm_clock_mhz", "negative clock"});
        }
        if (i > 0) {
            const TelemetrySample& p = trace.telemetry[i - 1];
            if (!(s.t_s > p.t_s)) {
                out.push_back({Severity::Error, base + ".t_s",
                               "timestamps must be strictly increasing"});
            }
            if (s.energy_j < p.energy_j) {
                out.push_back({Severity::Error, base + ".energy_j",
                               "energy counter decreases between samples " +
                                   std::to_string(i - 1) + " and " + std::to_string(i)});
            }
        }
    }

    if (trace.telemetry.size() >= 2) {
        const double span = trace.telemetry.back().t_s - trace.telemetry.front().t_s;
        if (!(span > 0.0)) {
            out.push_back({Severity::Error, "telemetry", "time span must be positive"});
        }
    } else {
        out.push_back({Severity::Error, "telemetry", "time span must be positive"});
    }

    if (trace.kernels.empty()) {
        out.push_back({Severity::Warning, "kernels",
                       "no kernel counter samples: telemetry-only analysis"});
    }
    for (std::size_t i = 0; i < trace.kernels.size(); ++i) {
        const KernelCounters& k = trace.kernels[i];
        const std::string base = "kernels[" + std::to_string(i) + "]";
        if (k.active_cycles > k.elapsed_cycles) {
            out.push_back({Severity::Error, base + ".active_cycles",
                           "active cycles exceed elapsed cycles"});
        }
        check_finite(out, base + ".duration_s", k.duration_s);
        if (!(k.duration_s > 0.0)) {
            out.push_back({Severity::Error, base + ".duration_s",
                           "duration must be positive"});
        }
    }

    check_finite(out, "ambient_c", trace.ambient_c);
    return out;
}

}  // namespace gpustress
