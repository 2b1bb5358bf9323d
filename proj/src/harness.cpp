#include "dweb/harness.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "dweb/errors.hpp"
#include "dweb/random.hpp"
#include "dweb/text.hpp"

namespace dweb {

std::string_view to_string(ExecStatus status) {
    switch (status) {
        case ExecStatus::Ok: return "OK";
        case ExecStatus::Failed: return "FAILED";
        case ExecStatus::Timeout: return "TIMEOUT";
    }
    return "?";
}

double LatencySchedule::latency_for(std::size_t query_index, int replication) const {
    if (!seed) return fixed_ms;
    SeededRng rng = SeededRng(*seed).substream("latency", query_index);
    SeededRng per_rep = rng.substream("rep", static_cast<std::uint64_t>(replication));
    return per_rep.uniform_real(lo_ms, hi_ms);
}

namespace {

struct ExecResult {
    double elapsed_ms = 0.0;
    ExecStatus status = ExecStatus::Ok;
    std::string message;
};

std::string expand_template(const std::string& tmpl, const std::string& file,
                            const std::string& statement) {
    std::string out;
    std::size_t pos = 0;
    auto shell_quote = [](const std::string& s) {
        std::string quoted = "'";
        for (char c : s) {
            if (c == '\'') quoted += "'\\''";
            else quoted += c;
        }
        quoted += "'";
        return quoted;
    };
    while (pos < tmpl.size()) {
        if (tmpl.compare(pos, 6, "{file}") == 0) {
            out += shell_quote(file);
            pos += 6;
        } else if (tmpl.compare(pos, 11, "{statement}") == 0) {
            out += shell_quote(statement);
            pos += 11;
        } else {
            out += tmpl[pos++];
        }
    }
    return out;
}

ExecResult run_subprocess(const std::string& command, double timeout_seconds) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();

    pid_t pid = fork();
    if (pid < 0) {
        return {0.0, ExecStatus::Failed, "fork failed"};
    }
    if (pid == 0) {
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    const auto deadline = start + std::chrono::duration_cast<clock::duration>(
                                      std::chrono::duration<double>(timeout_seconds));
    int status = 0;
    for (;;) {
        pid_t done = waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0) {
            return {0.0, ExecStatus::Failed, "waitpid failed"};
        }
        if (clock::now() >= deadline) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            double ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
            return {ms, ExecStatus::Timeout,
                    "timed out after " + fmt_real(timeout_seconds) + " s"};
        }
        std::this_thread::sleep_for(std::chrono::microseconds(200));
    }
    double ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
        return {ms, ExecStatus::Ok, ""};
    }
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {ms, ExecStatus::Failed, "client exited with status " + fmt_int(code)};
}

std::pair<double, double> mean_stddev(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    return {mean, std::sqrt(var)};
}

}  // namespace

std::vector<WorkloadStatement> load_workload_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read workload file " + path.string());
    std::vector<WorkloadStatement> out;

    std::string line;
    std::size_t pending_number = 0;
    std::string pending_tag;
    std::string statement;
    while (std::getline(in, line)) {
        std::string_view view = trim(line);
        if (view.empty()) continue;
        if (view.starts_with("--")) {
            std::string_view comment = trim(view.substr(2));
            if (comment.starts_with('Q')) {
                std::size_t bracket = comment.find('[');
                auto number = parse_int(comment.substr(1, bracket == std::string_view::npos
                                                              ? std::string_view::npos
                                                              : bracket - 1));
                pending_number = number ? static_cast<std::size_t>(*number) : out.size() + 1;
                pending_tag.clear();
                if (bracket != std::string_view::npos) {
                    std::size_t close = comment.find(']', bracket);
                    if (close != std::string_view::npos) {
                        pending_tag = std::string(comment.substr(bracket + 1, close - bracket - 1));
                    }
                }
            }
            continue;
        }
        if (!statement.empty()) statement += ' ';
        statement += view;
        if (statement.ends_with(';')) {
            statement.pop_back();
            WorkloadStatement st;
            st.number = pending_number ? pending_number : out.size() + 1;
            st.class_tag = pending_tag;
            st.sql = std::string(trim(statement));
            out.push_back(std::move(st));
            statement.clear();
            pending_number = 0;
            pending_tag.clear();
        }
    }
    if (!trim(statement).empty()) {
        throw ValidationError("workload file " + path.string() +
                              " ends with an unterminated statement");
    }
    return out;
}

RunReport run_workload(const std::vector<WorkloadStatement>& statements,
                       const ExecutorBinding& binding, int replications, int warmup,
                       double variability_threshold, std::string environment_note) {
    if (replications < 1) {
        throw ValidationError("run_workload: replications must be >= 1");
    }
    if (binding.kind == BindingKind::Subprocess && binding.command_template.empty()) {
        throw ValidationError("run_workload: the subprocess binding needs a command template");
    }

    RunReport report;
    report.replications = replications;
    report.variability_threshold = variability_threshold;
    report.environment_note = std::move(environment_note);
    report.per_query.resize(statements.size());
    for (std::size_t i = 0; i < statements.size(); ++i) {
        report.per_query[i].query_number = statements[i].number;
        report.per_query[i].class_tag = statements[i].class_tag;
        report.per_query[i].times_ms.reserve(static_cast<std::size_t>(replications));
    }

    std::filesystem::path scratch;
    if (binding.kind == BindingKind::Subprocess) {
        scratch = std::filesystem::temp_directory_path() /
                  ("dweb-harness-" + fmt_int(static_cast<long long>(getpid())));
        std::filesystem::create_directories(scratch);
    }

    auto execute = [&](std::size_t index, int replication) -> ExecResult {
        const WorkloadStatement& st = statements[index];
        if (binding.kind == BindingKind::DryRun) {
            return {binding.dry_run.latency_for(index, replication), ExecStatus::Ok, ""};
        }
        std::filesystem::path file = scratch / ("q" + fmt_uint(st.number) + ".sql");
        {
            std::ofstream out(file, std::ios::binary);
            out << st.sql << ";\n";
        }
        std::string command =
            expand_template(binding.command_template, file.string(), st.sql);
        return run_subprocess(command, binding.timeout_seconds);
    };

    for (int w = 0; w < warmup; ++w) {
        for (std::size_t i = 0; i < statements.size(); ++i) execute(i, -1 - w);
    }

    std::vector<double> totals(static_cast<std::size_t>(replications), 0.0);
    for (int rep = 0; rep < replications; ++rep) {
        for (std::size_t i = 0; i < statements.size(); ++i) {
            ExecResult r = execute(i, rep);
            QueryStats& stats = report.per_query[i];
            stats.times_ms.push_back(r.elapsed_ms);
            totals[static_cast<std::size_t>(rep)] += r.elapsed_ms;
            if (r.status != ExecStatus::Ok && stats.status == ExecStatus::Ok) {
                stats.status = r.status;
                stats.message = r.message;
            }
        }
    }

    for (auto& stats : report.per_query) {
        auto [mean, stddev] = mean_stddev(stats.times_ms);
        stats.mean_ms = mean;
        stats.stddev_ms = stddev;
        stats.high_variance = mean > 0.0 && stddev / mean > variability_threshold;
    }
    auto [tmean, tstddev] = mean_stddev(totals);
    report.total_mean_ms = tmean;
    report.total_stddev_ms = tstddev;

    if (!scratch.empty()) {
        std::error_code ec;
        std::filesystem::remove_all(scratch, ec);
    }
    return report;
}

std::string render_report_text(const RunReport& report) {
    std::string out;
    out += "query  tag            mean_ms      stddev_ms    status   flags\n";
    for (const auto& q : report.per_query) {
        std::string line = "Q" + fmt_uint(q.query_number);
        line.resize(7, ' ');
        std::string tag = q.class_tag;
        tag.resize(14, ' ');
        std::string mean = fmt_fixed(q.mean_ms, 3);
        mean.resize(12, ' ');
        std::string stddev = fmt_fixed(q.stddev_ms, 3);
        stddev.resize(12, ' ');
        std::string status(to_string(q.status));
        status.resize(8, ' ');
        out += line + tag + mean + " " + stddev + " " + status + " ";
        if (q.high_variance) {
            out += "variance>" + fmt_real(report.variability_threshold);
        }
        if (!q.message.empty()) out += " " + q.message;
        out += '\n';
    }
    out += "workload total: mean " + fmt_fixed(report.total_mean_ms, 3) + " ms, stddev " +
           fmt_fixed(report.total_stddev_ms, 3) + " ms over " + fmt_int(report.replications) +
           " replications\n";
    if (!report.environment_note.empty()) {
        out += "environment: " + report.environment_note + '\n';
    }
    return out;
}

std::string render_report_csv(const RunReport& report) {
    std::string out = "query_index,class_tag,mean_ms,stddev_ms,status\n";
    for (const auto& q : report.per_query) {
        out += fmt_uint(q.query_number) + "," + q.class_tag + "," + fmt_real(q.mean_ms) + "," +
               fmt_real(q.stddev_ms) + "," + std::string(to_string(q.status)) + "\n";
    }
    return out;
}

RunReport parse_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read report " + path.string());
    RunReport report;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        std::string_view view = trim(line);
        if (view.empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= view.size(); ++i) {
            if (i == view.size() || view[i] == ',') {
                fields.push_back(view.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 5) {
            throw ValidationError("report " + path.string() + ": malformed line '" + line + "'");
        }
        QueryStats q;
        auto number = parse_int(fields[0]);
        auto mean = parse_real(fields[2]);
        auto stddev = parse_real(fields[3]);
        if (!number || !mean || !stddev) {
            throw ValidationError("report " + path.string() + ": malformed line '" + line + "'");
        }
        q.query_number = static_cast<std::size_t>(*number);
        q.class_tag = std::string(fields[1]);
        q.mean_ms = *mean;
        q.stddev_ms = *stddev;
        if (fields[4] == "FAILED") q.status = ExecStatus::Failed;
        else if (fields[4] == "TIMEOUT") q.status = ExecStatus::Timeout;
        report.per_query.push_back(std::move(q));
    }
    for (const auto& q : report.per_query) report.total_mean_ms += q.mean_ms;
    return report;
}

ComparisonTable compare(const std::vector<RunReport>& reports,
                        const std::vector<std::string>& labels) {
    if (reports.size() < 2) {
        throw ValidationError("compare: need at least two reports");
    }
    for (const auto& r : reports) {
        if (r.per_query.size() != reports.front().per_query.size()) {
            throw ValidationError("compare: reports cover different query counts (" +
                                  fmt_uint(reports.front().per_query.size()) + " vs " +
                                  fmt_uint(r.per_query.size()) + ")");
        }
    }

    ComparisonTable table;
    table.labels = labels;
    table.labels.resize(reports.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (table.labels[i].empty()) table.labels[i] = "report" + fmt_uint(i + 1);
    }

    auto gain = [](double a, double b) { return a == 0.0 ? 0.0 : (a - b) / a * 100.0; };

    for (std::size_t qi = 0; qi < reports.front().per_query.size(); ++qi) {
        ComparisonRow row;
        row.label = "Q" + fmt_uint(reports.front().per_query[qi].query_number);
        for (const auto& r : reports) row.means_ms.push_back(r.per_query[qi].mean_ms);
        for (std::size_t ri = 1; ri < reports.size(); ++ri) {
            row.gain_pct.push_back(gain(row.means_ms[0], row.means_ms[ri]));
        }
        table.rows.push_back(std::move(row));
    }
    ComparisonRow total;
    total.label = "TOTAL";
    for (const auto& r : reports) {
        double t = 0.0;
        for (const auto& q : r.per_query) t += q.mean_ms;
        total.means_ms.push_back(t);
    }
    for (std::size_t ri = 1; ri < reports.size(); ++ri) {
        total.gain_pct.push_back(gain(total.means_ms[0], total.means_ms[ri]));
    }
    table.rows.push_back(std::move(total));
    return table;
}

std::string render_comparison_text(const ComparisonTable& table) {
    std::string out = "query   ";
    for (const auto& label : table.labels) {
        std::string col = label + "_ms";
        col.resize(std::max<std::size_t>(col.size() + 2, 14), ' ');
        out += col;
    }
    for (std::size_t i = 1; i < table.labels.size(); ++i) {
        out += "gain_vs_" + table.labels[0] + "_%  ";
    }
    out += '\n';
    for (const auto& row : table.rows) {
        std::string label = row.label;
        label.resize(8, ' ');
        out += label;
        for (double m : row.means_ms) {
            std::string cell = fmt_fixed(m, 3);
            cell.resize(14, ' ');
            out += cell;
        }
        for (double g : row.gain_pct) {
            std::string cell = fmt_fixed(g, 1);
            cell.resize(16, ' ');
            out += cell;
        }
        out += '\n';
    }
    return out;
}

std::string render_comparison_csv(const ComparisonTable& table) {
    std::string out = "query";
    for (const auto& label : table.labels) out += ",mean_ms_" + label;
    for (std::size_t i = 1; i < table.labels.size(); ++i) {
        out += ",gain_pct_" + table.labels[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        out += row.label;
        for (double m : row.means_ms) out += "," + fmt_real(m);
        for (double g : row.gain_pct) out += "," + fmt_real(g);
        out += '\n';
    }
    return out;
}

}  // namespace dweb
