#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "dweb/errors.hpp"
#include "dweb/harness.hpp"

using namespace dweb;

namespace {

std::vector<WorkloadStatement> synthetic_workload(std::size_t n) {
    std::vector<WorkloadStatement> out;
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back({i, i % 2 ? "OLAP_INITIAL" : "EXTRACTION",
                       "SELECT DIM1_1.DIM1_1_DESCR1 FROM FT1, DIM1_1 WHERE FT1.DIM1_1_PK = "
                       "DIM1_1.DIM1_1_PK"});
    }
    return out;
}

}  // namespace

TEST_CASE("constant dry latencies give exact means and zero stddev") {
    ExecutorBinding binding;
    binding.dry_run.fixed_ms = 5.0;
    RunReport report = run_workload(synthetic_workload(50), binding, 10, 0);

    CHECK(report.replications == 10);
    REQUIRE(report.per_query.size() == 50);
    for (const auto& q : report.per_query) {
        CHECK(q.times_ms.size() == 10);
        CHECK(q.mean_ms == 5.0);
        CHECK(q.stddev_ms == 0.0);
        CHECK(q.status == ExecStatus::Ok);
        CHECK_FALSE(q.high_variance);
    }
    CHECK(report.total_mean_ms == 250.0);
    CHECK(report.total_stddev_ms == 0.0);
}

TEST_CASE("seeded dry latencies match an independent recomputation") {
    ExecutorBinding binding;
    binding.dry_run.seed = 99;
    binding.dry_run.lo_ms = 1.0;
    binding.dry_run.hi_ms = 9.0;
    const int reps = 10;
    RunReport report = run_workload(synthetic_workload(25), binding, reps, 0);

    for (std::size_t qi = 0; qi < report.per_query.size(); ++qi) {
        const QueryStats& q = report.per_query[qi];
        // Recompute mean/stddev from the schedule itself (two independent passes).
        double sum = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            double lat = binding.dry_run.latency_for(qi, rep);
            CHECK(q.times_ms[static_cast<std::size_t>(rep)] == lat);
            sum += lat;
        }
        double mean = sum / reps;
        double var = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            double d = binding.dry_run.latency_for(qi, rep) - mean;
            var += d * d;
        }
        double stddev = std::sqrt(var / reps);
        CHECK(std::abs(q.mean_ms - mean) <= 1e-9 * std::max(1.0, std::abs(mean)));
        CHECK(std::abs(q.stddev_ms - stddev) <= 1e-9 * std::max(1.0, std::abs(stddev)));
    }
}

TEST_CASE("high-variance queries are flagged against the threshold") {
    ExecutorBinding binding;
    binding.dry_run.seed = 3;
    binding.dry_run.lo_ms = 1.0;
    binding.dry_run.hi_ms = 100.0;  // wild swings: stddev/mean above 0.1
    RunReport report = run_workload(synthetic_workload(5), binding, 10, 0, 0.1);
    bool any_flagged = false;
    for (const auto& q : report.per_query) any_flagged |= q.high_variance;
    CHECK(any_flagged);

    ExecutorBinding steady;
    steady.dry_run.fixed_ms = 4.0;
    RunReport calm = run_workload(synthetic_workload(5), steady, 10, 0, 0.1);
    for (const auto& q : calm.per_query) CHECK_FALSE(q.high_variance);
}

TEST_CASE("harness bookkeeping overhead stays below 1 ms per query") {
    ExecutorBinding binding;  // zero-latency dry run
    auto workload = synthetic_workload(200);
    auto start = std::chrono::steady_clock::now();
    RunReport report = run_workload(workload, binding, 10, 0);
    double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    CHECK(elapsed_ms / (200.0 * 10.0) < 1.0);
    CHECK(report.total_mean_ms == 0.0);
}

TEST_CASE("report text and CSV round-trip through parse_report_csv") {
    ExecutorBinding binding;
    binding.dry_run.seed = 42;
    RunReport report = run_workload(synthetic_workload(8), binding, 10, 0);

    auto dir = std::filesystem::temp_directory_path() / "dweb-tests";
    std::filesystem::create_directories(dir);
    auto path = dir / "report.csv";
    {
        std::ofstream out(path, std::ios::binary);
        out << render_report_csv(report);
    }
    RunReport parsed = parse_report_csv(path);
    REQUIRE(parsed.per_query.size() == report.per_query.size());
    for (std::size_t i = 0; i < parsed.per_query.size(); ++i) {
        CHECK(parsed.per_query[i].mean_ms == report.per_query[i].mean_ms);
        CHECK(parsed.per_query[i].stddev_ms == report.per_query[i].stddev_ms);
        CHECK(parsed.per_query[i].class_tag == report.per_query[i].class_tag);
    }
    CHECK(parsed.total_mean_ms == doctest::Approx(report.total_mean_ms).epsilon(1e-12));

    std::string text = render_report_text(report);
    CHECK(text.find("workload total") != std::string::npos);
}

TEST_CASE("compare reports the percentage gain against the first report") {
    auto make_report = [](double per_query_ms) {
        ExecutorBinding binding;
        binding.dry_run.fixed_ms = per_query_ms;
        return run_workload(synthetic_workload(50), binding, 10, 0);
    };
    RunReport base = make_report(2.0);    // total 100 ms
    RunReport faster = make_report(1.7);  // total 85 ms

    ComparisonTable table = compare({base, faster}, {"base", "indexed"});
    REQUIRE(table.rows.size() == 51);
    const ComparisonRow& total = table.rows.back();
    CHECK(total.label == "TOTAL");
    CHECK(total.means_ms[0] == doctest::Approx(100.0));
    CHECK(total.means_ms[1] == doctest::Approx(85.0));
    REQUIRE(total.gain_pct.size() == 1);
    CHECK(total.gain_pct[0] == doctest::Approx(15.0));

    ComparisonTable same = compare({base, base}, {"a", "b"});
    for (const auto& row : same.rows) {
        CHECK(row.gain_pct[0] == doctest::Approx(0.0));
    }

    std::string text = render_comparison_text(table);
    CHECK(text.find("TOTAL") != std::string::npos);
    CHECK(text.find("15.0") != std::string::npos);  // gain at one decimal
    std::string csv = render_comparison_csv(table);
    CHECK(csv.find("TOTAL,100,") != std::string::npos);
}

TEST_CASE("compare rejects mismatched query counts") {
    ExecutorBinding binding;
    binding.dry_run.fixed_ms = 1.0;
    RunReport a = run_workload(synthetic_workload(5), binding, 2, 0);
    RunReport b = run_workload(synthetic_workload(6), binding, 2, 0);
    CHECK_THROWS_AS(compare({a, b}, {}), ValidationError);
}

TEST_CASE("workload files parse back into tagged statements") {
    auto dir = std::filesystem::temp_directory_path() / "dweb-tests";
    std::filesystem::create_directories(dir);
    auto path = dir / "workload.sql";
    {
        std::ofstream out(path, std::ios::binary);
        out << "-- Q1 [OLAP_INITIAL]\n"
               "SELECT SUM(FT1.FT1_MEAS1) AS AGG1 FROM FT1\n"
               "GROUP BY ROLLUP(FT1.DIM1_1_PK);\n"
               "-- Q2 [EXTRACTION]\n"
               "SELECT FT1.DIM1_1_PK FROM FT1;\n";
    }
    auto statements = load_workload_file(path);
    REQUIRE(statements.size() == 2);
    CHECK(statements[0].number == 1);
    CHECK(statements[0].class_tag == "OLAP_INITIAL");
    CHECK(statements[0].sql ==
          "SELECT SUM(FT1.FT1_MEAS1) AS AGG1 FROM FT1 GROUP BY ROLLUP(FT1.DIM1_1_PK)");
    CHECK(statements[1].class_tag == "EXTRACTION");
    CHECK(load_workload_file(path).size() == 2);

    CHECK_THROWS_AS(load_workload_file(dir / "missing.sql"), IoError);
}

TEST_CASE("subprocess binding measures commands and marks failures") {
    ExecutorBinding binding;
    binding.kind = BindingKind::Subprocess;
    binding.command_template = "true # {file}";
    binding.timeout_seconds = 10.0;
    RunReport ok = run_workload(synthetic_workload(2), binding, 2, 1);
    for (const auto& q : ok.per_query) {
        CHECK(q.status == ExecStatus::Ok);
        CHECK(q.times_ms.size() == 2);
        CHECK(q.mean_ms > 0.0);
    }

    binding.command_template = "false";
    RunReport failed = run_workload(synthetic_workload(1), binding, 1, 0);
    CHECK(failed.per_query[0].status == ExecStatus::Failed);
    CHECK_FALSE(failed.per_query[0].message.empty());

    binding.command_template = "sleep 5";
    binding.timeout_seconds = 0.05;
    RunReport timed_out = run_workload(synthetic_workload(1), binding, 1, 0);
    CHECK(timed_out.per_query[0].status == ExecStatus::Timeout);
}

TEST_CASE("a subprocess binding without a template is a configuration error") {
    ExecutorBinding binding;
    binding.kind = BindingKind::Subprocess;
    CHECK_THROWS_AS(run_workload(synthetic_workload(1), binding, 1, 0), ValidationError);
    ExecutorBinding dry;
    CHECK_THROWS_AS(run_workload(synthetic_workload(1), dry, 0, 0), ValidationError);
}
