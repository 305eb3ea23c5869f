#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpustress/ingest.hpp"
#include "gpustress/report.hpp"
#include "gpustress/stress.hpp"
#include "gpustress/svg.hpp"
#include "gpustress/synthgen.hpp"

namespace fs = std::filesystem;
using gpustress::NormalizeOptions;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct CompareConfig {
    NormalizeOptions options;
    gpustress::AxisMap weights;
};

CompareConfig load_compare_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    json obj;
    try {
        obj = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    if (!obj.is_object()) {
        throw std::runtime_error(path.string() + ": expected a JSON object");
    }

    CompareConfig config;
    for (const auto& [key, value] : obj.items()) {
        if (key == "energy_axis") {
            const std::string axis = value.get<std::string>();
            if (axis == "rate_w") {
                config.options.energy_axis_uses_rate = true;
            } else if (axis != "total_kj") {
                throw std::runtime_error(path.string() +
                                         ": energy_axis must be total_kj or rate_w");
            }
        } else if (key == "weights") {
            if (!value.is_object()) {
                throw std::runtime_error(path.string() + ": weights: expected an object");
            }
            for (const auto& [axis, weight] : value.items()) {
                bool known = false;
                for (const std::string_view a : gpustress::kRadarAxes) known |= axis == a;
                if (!known) {
                    throw std::runtime_error(path.string() + ": weights: unknown axis '" +
                                             axis + "'");
                }
                if (!weight.is_number()) {
                    throw std::runtime_error(path.string() + ": weights." + axis +
                                             ": expected a number");
                }
                config.weights[axis] = weight.get<double>();
            }
        } else {
            throw std::runtime_error(path.string() + ": unknown key '" + key + "'");
        }
    }
    return config;
}

void print_ranking(const std::vector<gpustress::StressProfile>& ranked) {
    std::printf("%4s  %-24s %s\n", "rank", "workload", "composite");
    for (const gpustress::StressProfile& p : ranked) {
        std::printf("%4d  %-24s %.4f\n", p.rank, p.name.c_str(), p.composite_index);
    }
}

int run_analyze(const fs::path& trace_dir, const fs::path& hw_path, const fs::path& out,
                const std::optional<fs::path>& plot) {
    const gpustress::HardwareSpec hw = gpustress::load_hardware(hw_path);
    const gpustress::WorkloadTrace trace = gpustress::load_trace_dir(trace_dir);
    const gpustress::AnalysisResult result = gpustress::build_metric_set(trace, hw);
    gpustress::write_report(
        gpustress::analysis_report(trace.workload_name, trace.category, result, hw), out);
    for (const std::string& w : result.warnings) {
        std::cerr << "warning: " << trace.workload_name << ": " << w << "\n";
    }
    if (plot) {
        std::vector<gpustress::NamedRooflinePoint> points;
        if (result.roofline) {
            points.push_back({trace.workload_name, *result.roofline});
        }
        gpustress::write_file_atomic(*plot, gpustress::roofline_svg(points, hw));
    }
    return kExitOk;
}

int run_compare(const std::vector<fs::path>& report_paths,
                const std::optional<fs::path>& reference_path,
                const std::optional<fs::path>& out, const std::optional<fs::path>& csv,
                const std::optional<fs::path>& plot,
                const std::optional<fs::path>& config_path) {
    CompareConfig config;
    if (config_path) config = load_compare_config(*config_path);

    std::vector<std::pair<std::string, gpustress::MetricSet>> sets;
    std::map<std::string, std::string> categories;
    auto add = [&](const std::string& name, const std::string& category,
                   const gpustress::MetricSet& metrics) {
        for (const auto& [existing, unused] : sets) {
            if (existing == name) {
                throw std::invalid_argument("duplicate workload '" + name + "'");
            }
        }
        sets.emplace_back(name, metrics);
        if (!category.empty()) categories[name] = category;
    };

    for (const fs::path& path : report_paths) {
        const gpustress::LoadedReport report = gpustress::load_report(path);
        add(report.name, report.category, report.metrics);
    }
    if (reference_path) {
        const gpustress::ReferenceDataset ds = gpustress::load_reference(*reference_path);
        for (const gpustress::ReferenceWorkload& w : ds.workloads) {
            add(w.name, w.category, w.metrics);
        }
    }
    if (sets.size() < 2) {
        throw std::invalid_argument("compare needs at least two workloads (got " +
                                    std::to_string(sets.size()) + ")");
    }

    gpustress::Warnings warnings;
    std::vector<gpustress::StressProfile> profiles =
        gpustress::normalize_axes(sets, config.options, &warnings);
    for (gpustress::StressProfile& p : profiles) {
        p.composite_index = gpustress::composite_index(p, config.weights);
    }
    const std::vector<gpustress::StressProfile> ranked = gpustress::rank(profiles);

    print_ranking(ranked);
    for (const std::string& w : warnings.messages) {
        std::cerr << "warning: " << w << "\n";
    }
    if (out) {
        gpustress::write_report(
            gpustress::compare_report(ranked, categories, config.options, config.weights,
                                      warnings.messages),
            *out);
    }
    if (csv) {
        gpustress::write_file_atomic(*csv, gpustress::compare_csv(ranked));
    }
    if (plot) {
        gpustress::write_file_atomic(*plot, gpustress::radar_svg(ranked));
    }
    return kExitOk;
}

int run_synth(const std::string& preset_name, const std::optional<fs::path>& profile_path,
              const std::optional<fs::path>& hw_path, const fs::path& out_dir, bool list) {
    if (list) {
        std::printf("%-24s %-10s %11s %10s %8s %12s\n", "preset", "category",
                    "utilization", "issue_rate", "tau_s", "throttle_c");
        for (const gpustress::SynthProfile& p : gpustress::presets()) {
            std::printf("%-24s %-10s %11.4f %10.4f %8.1f %12g\n", p.name.c_str(),
                        p.category.c_str(), p.utilization, p.issue_rate, p.tau_s,
                        p.throttle_temp_c);
        }
        return kExitOk;
    }
    gpustress::SynthProfile profile;
    if (profile_path) {
        profile = gpustress::load_profile(*profile_path);
    } else if (!preset_name.empty()) {
        profile = gpustress::preset(preset_name);
    } else {
        throw std::invalid_argument("synth needs a preset name or --profile");
    }
    const gpustress::HardwareSpec hw =
        hw_path ? gpustress::load_hardware(*hw_path) : gpustress::default_hardware();
    const gpustress::WorkloadTrace trace = gpustress::generate(profile, hw);
    gpustress::write_trace_dir(trace, out_dir, hw.name);
    return kExitOk;
}

int run_fit(const fs::path& trace_dir) {
    const gpustress::WorkloadTrace trace = gpustress::load_trace_dir(trace_dir);
    const gpustress::ThermalFit fit = gpustress::fit_exponential(trace.telemetry);
    gpustress::Warnings warnings;
    const double steady = gpustress::steady_state_temp(trace.telemetry, fit, &warnings);

    std::printf("workload:        %s\n", trace.workload_name.c_str());
    std::printf("t_inf_c:         %.6g (fitted asymptote)\n", fit.t_inf_c);
    std::printf("steady_mean_c:   %.6g (mean over steady window)\n", steady);
    std::printf("t0_c:            %.6g\n", fit.t0_c);
    std::printf("tau_s:           %.6g\n", fit.tau_s);
    std::printf("t_r_s:           %.6g\n", fit.t_r_s);
    std::printf("rmse_c:          %.6g\n", fit.rmse_c);
    std::printf("steady_window_s: [%.6g, %.6g]\n", fit.steady_start_s, fit.steady_end_s);
    std::printf("converged:       %s\n", fit.converged ? "yes" : "no");
    for (const std::string& flag : fit.flags) {
        std::printf("flag:            %s\n", flag.c_str());
    }
    for (const std::string& w : warnings.messages) {
        std::cerr << "warning: " << w << "\n";
    }
    return kExitOk;
}

int run_roofline(const std::vector<fs::path>& report_paths, const fs::path& hw_path,
                 const std::optional<fs::path>& plot) {
    const gpustress::HardwareSpec hw = gpustress::load_hardware(hw_path);
    std::printf("hardware: %s  peak %.6g GFLOP/s  bandwidth %.6g GB/s  ridge %.6g FLOP/byte\n",
                hw.name.c_str(), hw.peak_gflops, hw.peak_bandwidth_gbps,
                gpustress::ridge_point(hw));
    std::printf("%-24s %12s %12s %12s %10s  %s\n", "workload", "ai", "gflops",
                "attainable", "eff_pct", "bound");

    std::vector<gpustress::NamedRooflinePoint> points;
    for (const fs::path& path : report_paths) {
        const gpustress::LoadedReport report = gpustress::load_report(path);
        if (!report.metrics.arithmetic_intensity || !report.metrics.throughput_gflops) {
            std::printf("%-24s %12s %12s %12s %10s  %s\n", report.name.c_str(), "n/a",
                        "n/a", "n/a", "n/a", "n/a (no counters)");
            continue;
        }
        const gpustress::RooflinePoint point = gpustress::place(
            *report.metrics.arithmetic_intensity, *report.metrics.throughput_gflops, hw);
        points.push_back({report.name, point});
        std::printf("%-24s %12.6g %12.6g %12.6g %10.6g  %s%s\n", report.name.c_str(),
                    point.arithmetic_intensity, point.throughput_gflops,
                    point.attainable_gflops, point.efficiency_pct,
                    std::string(to_string(point.bound)).c_str(),
                    point.above_roof ? " (above roof)" : "");
    }
    if (plot) {
        gpustress::write_file_atomic(*plot, gpustress::roofline_svg(points, hw));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"offline GPU workload stress estimation"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "compute metrics for one trace bundle");
    fs::path analyze_dir, analyze_hw, analyze_out;
    std::optional<fs::path> analyze_plot;
    analyze->add_option("trace_dir", analyze_dir, "trace bundle directory")->required();
    analyze->add_option("--hw", analyze_hw, "hardware spec JSON")->required();
    analyze->add_option("-o,--out", analyze_out, "output report JSON")->required();
    analyze->add_option("--plot", analyze_plot, "write a roofline SVG here");

    // compare
    auto* compare = app.add_subcommand("compare", "rank workloads by normalized stress");
    std::vector<fs::path> compare_reports;
    std::optional<fs::path> compare_reference, compare_out, compare_csv_path,
        compare_plot, compare_config;
    compare->add_option("reports", compare_reports, "analysis report JSON files");
    compare->add_option("--reference", compare_reference,
                        "reference dataset JSON to include");
    compare->add_option("-o,--out", compare_out, "output comparison JSON");
    compare->add_option("--csv", compare_csv_path, "output ranking CSV");
    compare->add_option("--plot", compare_plot, "write a radar SVG here");
    compare->add_option("--config", compare_config,
                        "JSON with axis weights and energy_axis");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic trace bundle");
    std::string synth_preset;
    std::optional<fs::path> synth_profile, synth_hw;
    fs::path synth_out;
    bool synth_list = false;
    synth->add_option("preset", synth_preset, "built-in preset name");
    synth->add_option("--profile", synth_profile, "profile JSON instead of a preset");
    synth->add_option("--hw", synth_hw, "hardware spec JSON for counter bookkeeping");
    synth->add_option("-o,--out", synth_out, "output bundle directory");
    synth->add_flag("--list", synth_list, "list built-in presets");

    // fit
    auto* fit = app.add_subcommand("fit", "fit the thermal transient of a trace");
    fs::path fit_dir;
    fit->add_option("trace_dir", fit_dir, "trace bundle directory")->required();

    // roofline
    auto* roofline = app.add_subcommand("roofline", "place analyzed workloads on the roofline");
    std::vector<fs::path> roofline_reports;
    fs::path roofline_hw;
    std::optional<fs::path> roofline_plot;
    roofline->add_option("reports", roofline_reports, "analysis report JSON files")
        ->required();
    roofline->add_option("--hw", roofline_hw, "hardware spec JSON")->required();
    roofline->add_option("--plot", roofline_plot, "write a roofline SVG here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*analyze) {
            return run_analyze(analyze_dir, analyze_hw, analyze_out, analyze_plot);
        }
        if (*compare) {
            return run_compare(compare_reports, compare_reference, compare_out,
                               compare_csv_path, compare_plot, compare_config);
        }
        if (*synth) {
            if (!synth_list && synth_out.empty()) {
                throw std::invalid_argument("synth needs -o/--out (or --list)");
            }
            return run_synth(synth_preset, synth_profile, synth_hw, synth_out, synth_list);
        }
        if (*fit) {
            return run_fit(fit_dir);
        }
        if (*roofline) {
            return run_roofline(roofline_reports, roofline_hw, roofline_plot);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
