#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "gpustress/ingest.hpp"
#include "gpustress/report.hpp"
#include "gpustress/stress.hpp"
#include "gpustress/synthgen.hpp"

using namespace gpustress;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
    static const fs::path dir = [] {
        const fs::path p = fs::temp_directory_path() / "gpustress-report-tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

AnalysisResult burn_analysis() {
    SynthProfile p = preset("gpu-burn");
    p.duration_s = 120.0;
    const WorkloadTrace t = generate(p, default_hardware());
    return build_metric_set(t, default_hardware());
}

StressProfile profile_with(const std::string& name, double level, int rank_no) {
    StressProfile p;
    p.name = name;
    for (const std::string_view axis : kRadarAxes) p.normalized_axes.emplace(axis, level);
    p.composite_index = level;
    p.rank = rank_no;
    return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Number policy

TEST_CASE("round_sig keeps six significant digits") {
    CHECK(round_sig(123456.789) == 123457.0);
    CHECK(round_sig(1234567.0) == 1234570.0);
    CHECK(round_sig(0.000123456449) == 0.000123456);
    CHECK(round_sig(87.92152466) == 87.9215);
    CHECK(round_sig(-87.92152466) == -87.9215);
    CHECK(round_sig(0.1) == 0.1);
    CHECK(round_sig(0.0) == 0.0);
    CHECK(round_sig(2.5, 2) == 2.5);
    CHECK(round_sig(255.74941316415544, 4) == 255.7);
    CHECK(std::isinf(round_sig(std::numeric_limits<double>::infinity())));
    CHECK(std::isnan(round_sig(std::numeric_limits<double>::quiet_NaN())));
}

TEST_CASE("report numbers degrade non-finite values to null") {
    CHECK(report_number(42.123456789) == json(42.1235));
    CHECK(report_number(std::numeric_limits<double>::infinity()).is_null());
    CHECK(report_number(-std::numeric_limits<double>::infinity()).is_null());
    CHECK(report_number(std::numeric_limits<double>::quiet_NaN()).is_null());
}

// ---------------------------------------------------------------------------
// Analysis reports

TEST_CASE("analysis reports carry metrics, fit, and roofline blocks") {
    const AnalysisResult result = burn_analysis();
    const json report =
        analysis_report("gpu-burn", "stress", result, default_hardware());

    CHECK(report.at("workload") == "gpu-burn");
    CHECK(report.at("category") == "stress");
    CHECK(report.at("hardware") == "generic");

    const json& metrics = report.at("metrics");
    for (const char* key :
         {"sm_busy_rate_pct", "aii_pct", "s_act_pct", "t_inf_c", "t_r_s", "energy_kj",
          "energy_rate_w", "delta_cf_mhz", "throughput_gflops", "arithmetic_intensity"}) {
        CAPTURE(key);
        REQUIRE(metrics.contains(key));
        CHECK(metrics.at(key).is_number());
    }
    CHECK(metrics.at("t_inf_c") == json(round_sig(result.metrics.t_inf_c)));

    const json& thermal = report.at("thermal_fit");
    CHECK(thermal.at("converged").is_boolean());
    CHECK(thermal.at("flags").is_array());
    REQUIRE(thermal.at("steady_window_s").is_array());
    CHECK(thermal.at("steady_window_s").size() == 2);
    CHECK(thermal.at("tau_s") == json(round_sig(result.thermal.tau_s)));

    const json& roof = report.at("roofline");
    CHECK(roof.at("bound").is_string());
    CHECK(roof.at("ridge_point") == json(round_sig(10.0)));  // 1000 GF / 100 GB/s
    CHECK(roof.at("attainable_gflops").is_number());
    CHECK(roof.at("above_roof").is_boolean());

    CHECK(report.at("warnings").is_array());
}

TEST_CASE("telemetry-only analyses produce a null roofline block") {
    WorkloadTrace t;
    t.workload_name = "probe";
    for (int i = 0; i < 30; ++i) {
        t.telemetry.push_back({static_cast<double>(i), 40.0 + 0.1 * i, 20.0,
                               20.0 * i, 2000.0});
    }
    t.ambient_c = 30.0;
    const AnalysisResult result = build_metric_set(t, default_hardware());
    const json report = analysis_report("probe", "unknown", result, default_hardware());

    CHECK(report.at("roofline").is_null());
    CHECK(report.at("metrics").at("sm_busy_rate_pct").is_null());
    CHECK(report.at("metrics").at("arithmetic_intensity").is_null());
    CHECK(report.at("metrics").at("energy_kj").is_number());
}

TEST_CASE("identical inputs serialize to identical bytes") {
    const AnalysisResult result = burn_analysis();
    const json a = analysis_report("gpu-burn", "stress", result, default_hardware());
    const json b =
        analysis_report("gpu-burn", "stress", burn_analysis(), default_hardware());
    CHECK(a.dump(2) == b.dump(2));

    const fs::path p1 = scratch_dir() / "r1.json";
    const fs::path p2 = scratch_dir() / "r2.json";
    write_report(a, p1);
    write_report(b, p2);
    const std::string text = slurp(p1);
    CHECK(text == slurp(p2));
    CHECK(text.back() == '\n');
}

TEST_CASE("written reports load back with rounded metrics") {
    const AnalysisResult result = burn_analysis();
    const json report =
        analysis_report("gpu-burn", "stress", result, default_hardware());
    const fs::path path = scratch_dir() / "loadback.json";
    write_report(report, path);

    const LoadedReport loaded = load_report(path);
    CHECK(loaded.name == "gpu-burn");
    CHECK(loaded.category == "stress");
    CHECK(loaded.metrics.t_inf_c == round_sig(result.metrics.t_inf_c));
    CHECK(loaded.metrics.energy_kj == round_sig(result.metrics.energy_kj));
    CHECK(loaded.metrics.delta_cf_mhz == round_sig(result.metrics.delta_cf_mhz));
    REQUIRE(loaded.metrics.sm_busy_rate_pct.has_value());
    CHECK(*loaded.metrics.sm_busy_rate_pct == round_sig(*result.metrics.sm_busy_rate_pct));
    REQUIRE(loaded.metrics.throughput_gflops.has_value());
    CHECK(*loaded.metrics.throughput_gflops == round_sig(*result.metrics.throughput_gflops));
}

TEST_CASE("loading rejects files that are not analysis reports") {
    const fs::path missing = scratch_dir() / "nope.json";
    CHECK_THROWS_WITH_AS(load_report(missing), doctest::Contains("cannot open"),
                         std::runtime_error);

    const fs::path not_report = scratch_dir() / "other.json";
    write_report(json{{"hello", 1}}, not_report);
    CHECK_THROWS_WITH_AS(load_report(not_report),
                         doctest::Contains("not an analysis report"), std::runtime_error);

    const fs::path partial = scratch_dir() / "partial.json";
    write_report(json{{"workload", "x"}, {"metrics", {{"t_r_s", 1.0}}}}, partial);
    CHECK_THROWS_WITH_AS(load_report(partial), doctest::Contains("metrics.t_inf_c"),
                         std::runtime_error);
}

// ---------------------------------------------------------------------------
// Comparison reports

TEST_CASE("comparison csv puts one ranked row per workload") {
    const std::vector<StressProfile> ranked = {profile_with("alpha", 0.875, 1),
                                               profile_with("beta", 0.25, 2)};
    const std::string csv = compare_csv(ranked);
    const std::string expected_header =
        "rank,workload,composite_index,sm_busy_rate,aii,s_act,t_inf,t_r,energy,delta_cf";
    REQUIRE(csv.substr(0, expected_header.size()) == expected_header);

    CHECK(csv == expected_header +
                     "\n"
                     "1,alpha,0.875,0.875,0.875,0.875,0.875,0.875,0.875,0.875\n"
                     "2,beta,0.25,0.25,0.25,0.25,0.25,0.25,0.25,0.25\n");
}

TEST_CASE("comparison report lists axes, weights, and ranked workloads") {
    const std::vector<StressProfile> ranked = {profile_with("alpha", 1.0, 1),
                                               profile_with("beta", 0.0, 2)};
    const std::map<std::string, std::string> categories = {{"alpha", "stress"}};

    SUBCASE("defaults") {
        const json report =
            compare_report(ranked, categories, {}, {}, {"one warning"});
        REQUIRE(report.at("axes").is_array());
        REQUIRE(report.at("axes").size() == kRadarAxes.size());
        for (std::size_t i = 0; i < kRadarAxes.size(); ++i) {
            CHECK(report.at("axes")[i] == std::string(kRadarAxes[i]));
        }
        CHECK(report.at("energy_axis") == "total_kj");
        for (const std::string_view axis : kRadarAxes) {
            CHECK(report.at("weights").at(std::string(axis)) == json(1.0));
        }
        REQUIRE(report.at("workloads").size() == 2);
        const json& first = report.at("workloads")[0];
        CHECK(first.at("name") == "alpha");
        CHECK(first.at("category") == "stress");
        CHECK(first.at("rank") == 1);
        CHECK(first.at("composite_index") == json(1.0));
        CHECK(first.at("normalized_axes").at("t_inf") == json(1.0));
        CHECK(!report.at("workloads")[1].contains("category"));
        REQUIRE(report.at("warnings").size() == 1);
        CHECK(report.at("warnings")[0] == "one warning");
    }
    SUBCASE("options and weights are recorded") {
        NormalizeOptions options;
        options.energy_axis_uses_rate = true;
        AxisMap weights;
        weights.emplace("t_inf", 3.0);
        const json report = compare_report(ranked, categories, options, weights, {});
        CHECK(report.at("energy_axis") == "rate_w");
        CHECK(report.at("weights").at("t_inf") == json(3.0));
        CHECK(report.at("weights").at("aii") == json(1.0));
    }
}

TEST_CASE("comparison pipeline output is deterministic") {
    std::vector<std::pair<std::string, MetricSet>> sets;
    for (int i = 0; i < 4; ++i) {
        MetricSet m;
        m.sm_busy_rate_pct = 20.0 + 15.0 * i;
        m.aii_pct = 10.0 + 10.0 * i;
        m.s_act_pct = 30.0 - 5.0 * i;
        m.t_inf_c = 50.0 + 3.0 * i;
        m.t_r_s = 200.0 - 20.0 * i;
        m.energy_kj = 4.0 + 0.5 * i;
        m.energy_rate_w = 13.0 + 2.0 * i;
        m.delta_cf_mhz = 100.0 * i;
        sets.push_back({"wl" + std::to_string(i), m});
    }
    const auto build = [&] {
        Warnings warnings;
        std::vector<StressProfile> profiles = normalize_axes(sets, {}, &warnings);
        for (StressProfile& p : profiles) p.composite_index = composite_index(p);
        return compare_report(rank(std::move(profiles)), {}, {}, {}, warnings.messages);
    };
    CHECK(build().dump(2) == build().dump(2));
}
