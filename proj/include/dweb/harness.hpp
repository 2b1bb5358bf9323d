#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dweb {

enum class BindingKind { DryRun, Subprocess };

// DRY_RUN latencies: fixed per query, or a seeded draw per (query,
// replication) — a pure function, so reports are reproducible.
struct LatencySchedule {
    double fixed_ms = 0.0;
    std::optional<std::uint64_t> seed;  // seeded-random mode when set
    double lo_ms = 1.0;
    double hi_ms = 10.0;

    double latency_for(std::size_t query_index, int replication) const;
};

struct ExecutorBinding {
    BindingKind kind = BindingKind::DryRun;
    // Subprocess: run per statement with {file} and {statement} placeholders.
    std::string command_template;
    double timeout_seconds = 60.0;
    LatencySchedule dry_run;
};

enum class ExecStatus { Ok, Failed, Timeout };
std::string_view to_string(ExecStatus status);

struct QueryStats {
    std::size_t query_number = 0;  // 1-based Q number from the workload file
    std::string class_tag;
    std::vector<double> times_ms;  // one entry per measured replication
    double mean_ms = 0.0;
    double stddev_ms = 0.0;        // population formula: sqrt(sum((x-mean)^2)/n)
    ExecStatus status = ExecStatus::Ok;
    std::string message;           // engine message for failures
    bool high_variance = false;    // stddev/mean above the variability threshold
};

struct RunReport {
    std::vector<QueryStats> per_query;
    double total_mean_ms = 0.0;    // mean over per-replication workload totals
    double total_stddev_ms = 0.0;
    int replications = 0;
    double variability_threshold = 0.1;
    std::string environment_note;
};

struct WorkloadStatement {
    std::size_t number = 0;  // from the `-- Q{n} [tag]` comment
    std::string class_tag;
    std::string sql;         // without the terminating ';'
};

// Reads a workload.sql file: `-- Q{n} [{tag}]` comments followed by one
// `;`-terminated statement each.
std::vector<WorkloadStatement> load_workload_file(const std::filesystem::path& path);

// Runs the whole workload sequentially `warmup` unmeasured times, then
// `replications` measured times; wall-clock per statement (DRY_RUN records
// its synthetic latencies instead). Statement failures are recorded and the
// run continues.
RunReport run_workload(const std::vector<WorkloadStatement>& statements,
                       const ExecutorBinding& binding, int replications = 10, int warmup = 0,
                       double variability_threshold = 0.1,
                       std::string environment_note = "");

std::string render_report_text(const RunReport& report);
// CSV columns: query_index, class_tag, mean_ms, stddev_ms, status.
std::string render_report_csv(const RunReport& report);
RunReport parse_report_csv(const std::filesystem::path& path);

struct ComparisonRow {
    std::string label;               // "Q3" or "TOTAL"
    std::vector<double> means_ms;    // one per report
    std::vector<double> gain_pct;    // vs the first report: (a - b) / a * 100
};

struct ComparisonTable {
    std::vector<std::string> labels;  // one per report
    std::vector<ComparisonRow> rows;  // per query, then TOTAL
};

// Per-query and total mean deltas between reports over the same workload.
// Throws ValidationError when query counts differ.
ComparisonTable compare(const std::vector<RunReport>& reports,
                        const std::vector<std::string>& labels);

std::string render_comparison_text(const ComparisonTable& table);
std::string render_comparison_csv(const ComparisonTable& table);

}  // namespace dweb
