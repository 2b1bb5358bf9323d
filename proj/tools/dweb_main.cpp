#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dweb/config.hpp"
#include "dweb/errors.hpp"
#include "dweb/harness.hpp"
#include "dweb/pipeline.hpp"
#include "dweb/text.hpp"

namespace {

using namespace dweb;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitGuard = 3;

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
}

struct GenerateFlags {
    std::string config_file;
    std::string seed_text;
    std::string out_dir = "dweb-out";
    // High-level overrides (values examined only when the flag was given).
    double avg_nb_ft = 0, avg_nb_dim = 0, avg_tot_nb_dim = 0, avg_nb_meas = 0;
    double avg_density = 0, avg_nb_levels = 0, avg_nb_att = 0, avg_hhlevel_size = 0;
    double dim_sfactor = 0;
    double spread = 0;
    // Workload overrides.
    int nb_q = 0;
    double wl_avg_nb_att = 0, avg_nb_restr = 0, prob_olap = 0, avg_nb_aggreg = 0;
    double prob_cube = 0, prob_having = 0, avg_nb_dd = 0;
    // Artifact knobs.
    double density = 0;
    long long max_rows = 0, streaming_threshold = 0;
    std::size_t referential_size = 0;
    double measure_min = 0, measure_max = 0;
    bool no_insert = false, no_workload = false;
};

int cmd_generate(const GenerateFlags& flags, const CLI::App& cmd) {
    RunConfig config;
    if (!flags.config_file.empty()) {
        load_config_file(flags.config_file, config);
    }

    auto given = [&](const std::string& name) { return cmd.count(name) > 0; };

    bool wants_high = given("--avg-nb-ft") || given("--avg-nb-dim") ||
                      given("--avg-tot-nb-dim") || given("--avg-nb-meas") ||
                      given("--avg-density") || given("--avg-nb-levels") ||
                      given("--avg-nb-att") || given("--avg-hhlevel-size") ||
                      given("--dim-sfactor");
    if (wants_high && !config.high) {
        throw ValidationError(
            "high-level flags cannot override a low-level config file; exactly one parameter "
            "source may be active");
    }
    if (config.high) {
        HighLevelParams& h = *config.high;
        if (given("--avg-nb-ft")) h.avg_nb_ft = flags.avg_nb_ft;
        if (given("--avg-nb-dim")) h.avg_nb_dim = flags.avg_nb_dim;
        if (given("--avg-tot-nb-dim")) h.avg_tot_nb_dim = flags.avg_tot_nb_dim;
        if (given("--avg-nb-meas")) h.avg_nb_meas = flags.avg_nb_meas;
        if (given("--avg-density")) h.avg_density = flags.avg_density;
        if (given("--avg-nb-levels")) h.avg_nb_levels = flags.avg_nb_levels;
        if (given("--avg-nb-att")) h.avg_nb_att = flags.avg_nb_att;
        if (given("--avg-hhlevel-size")) h.avg_hhlevel_size = flags.avg_hhlevel_size;
        if (given("--dim-sfactor")) h.dim_sfactor = flags.dim_sfactor;
    }
    if (given("--spread")) {
        config.spread = flags.spread;
        if (config.high) config.high->spread = flags.spread;
    }
    if (given("--seed")) {
        auto seed = parse_u64(flags.seed_text);
        if (!seed) throw ValidationError("--seed expects a decimal or 0x hex integer");
        config.seed = *seed;
    }
    if (given("--nb-q")) config.workload.nb_q = flags.nb_q;
    if (given("--wl-avg-nb-att")) config.workload.avg_nb_att = flags.wl_avg_nb_att;
    if (given("--avg-nb-restr")) config.workload.avg_nb_restr = flags.avg_nb_restr;
    if (given("--prob-olap")) config.workload.prob_olap = flags.prob_olap;
    if (given("--avg-nb-aggreg")) config.workload.avg_nb_aggreg = flags.avg_nb_aggreg;
    if (given("--prob-cube")) config.workload.prob_cube = flags.prob_cube;
    if (given("--prob-having")) config.workload.prob_having = flags.prob_having;
    if (given("--avg-nb-dd")) config.workload.avg_nb_dd = flags.avg_nb_dd;
    if (given("--density")) config.density_override = flags.density;
    if (given("--max-rows")) config.limits.max_rows = flags.max_rows;
    if (given("--streaming-threshold")) {
        config.limits.streaming_threshold = flags.streaming_threshold;
    }
    if (given("--referential-size")) config.limits.referential_size = flags.referential_size;
    if (given("--measure-min")) config.limits.measure_lo = flags.measure_min;
    if (given("--measure-max")) config.limits.measure_hi = flags.measure_max;
    config.emit_insert = !flags.no_insert;
    config.emit_workload = !flags.no_workload;
    config.out_dir = flags.out_dir;

    GenerateOutcome outcome = generate_all(config, &std::cout);

    std::cout << "table            rows        row_bytes  total_bytes\n";
    for (const auto& [name, ts] : outcome.size.per_table) {
        std::string col = name;
        col.resize(16, ' ');
        std::string rows = fmt_int(ts.row_count);
        rows.resize(12, ' ');
        std::string row_bytes = fmt_int(ts.row_bytes);
        row_bytes.resize(10, ' ');
        std::cout << col << " " << rows << row_bytes << " " << fmt_int(ts.total_bytes) << "\n";
    }
    std::cout << "warehouse size: " << fmt_fixed(outcome.size.warehouse_megabytes, 3)
              << " MB (estimated)\n";
    std::cout << "workload: " << outcome.workload.queries.size() << " queries\n";
    std::cout << "artifacts written to " << config.out_dir.string() << "\n";
    return kExitOk;
}

struct RunFlags {
    std::string workload_file;
    std::string out_dir = "dweb-out";
    std::string binding = "dry-run";
    std::string command_template;
    double timeout_seconds = 60.0;
    int replications = 10;
    int warmup = 0;
    double variability_threshold = 0.1;
    double dry_run_latency_ms = 0.0;
    std::string dry_run_seed;
    double dry_run_lo_ms = 1.0;
    double dry_run_hi_ms = 10.0;
    std::string note;
};

int cmd_run(const RunFlags& flags, const CLI::App& cmd) {
    std::filesystem::path workload_path = flags.workload_file.empty()
                                              ? std::filesystem::path(flags.out_dir) /
                                                    "workload.sql"
                                              : std::filesystem::path(flags.workload_file);
    if (!std::filesystem::exists(workload_path)) {
        throw IoError("workload file " + workload_path.string() +
                      " does not exist; run `dweb generate` first or pass --workload");
    }

    ExecutorBinding binding;
    if (flags.binding == "dry-run") {
        binding.kind = BindingKind::DryRun;
        binding.dry_run.fixed_ms = flags.dry_run_latency_ms;
        if (cmd.count("--dry-run-seed") > 0) {
            auto seed = parse_u64(flags.dry_run_seed);
            if (!seed) throw ValidationError("--dry-run-seed expects an integer");
            binding.dry_run.seed = *seed;
            binding.dry_run.lo_ms = flags.dry_run_lo_ms;
            binding.dry_run.hi_ms = flags.dry_run_hi_ms;
        }
    } else if (flags.binding == "subprocess") {
        binding.kind = BindingKind::Subprocess;
        binding.command_template = flags.command_template;
        binding.timeout_seconds = flags.timeout_seconds;
        if (binding.command_template.empty()) {
            throw ValidationError("--binding subprocess requires --command-template");
        }
    } else {
        throw ValidationError("unknown binding '" + flags.binding +
                              "'; expected dry-run or subprocess");
    }

    auto statements = load_workload_file(workload_path);
    RunReport report = run_workload(statements, binding, flags.replications, flags.warmup,
                                    flags.variability_threshold, flags.note);

    std::string text = render_report_text(report);
    std::cout << text;
    std::filesystem::path out_dir(flags.out_dir);
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir / "report.txt", text);
    write_text_file(out_dir / "report.csv", render_report_csv(report));
    std::cout << "report written to " << (out_dir / "report.csv").string() << "\n";
    return kExitOk;
}

int cmd_compare(const std::vector<std::string>& report_paths, const std::string& labels_text,
                const std::string& out_file) {
    std::vector<RunReport> reports;
    for (const auto& path : report_paths) {
        if (!std::filesystem::exists(path)) {
            throw IoError("report " + path + " does not exist");
        }
        reports.push_back(parse_report_csv(path));
    }
    std::vector<std::string> labels;
    if (!labels_text.empty()) {
        std::string current;
        for (char c : labels_text) {
            if (c == ',') {
                labels.push_back(current);
                current.clear();
            } else {
                current.push_back(c);
            }
        }
        labels.push_back(current);
    }
    ComparisonTable table = compare(reports, labels);
    std::cout << render_comparison_text(table);
    if (!out_file.empty()) {
        write_text_file(out_file, render_comparison_csv(table));
        std::cout << "comparison written to " << out_file << "\n";
    }
    return kExitOk;
}

int cmd_validate(const std::string& config_file) {
    RunConfig config;
    if (!config_file.empty()) load_config_file(config_file, config);

    ValidationReport report;
    if (config.high) {
        config.high->spread = config.spread;
        report = validate(*config.high);
    } else if (config.low) {
        report = validate(*config.low);
    }
    ValidationReport wl = validate(config.workload);
    report.violations.insert(report.violations.end(), wl.violations.begin(),
                             wl.violations.end());
    if (!report.ok()) {
        std::cout << report.to_string();
        return kExitValidation;
    }
    std::cout << "configuration is valid\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dweb: synthetic data warehouse and decision-support workload benchmark"};
    app.require_subcommand(1);

    GenerateFlags gen;
    CLI::App* generate = app.add_subcommand(
        "generate", "generate a warehouse, its data files and a matching workload");
    generate->add_option("--config", gen.config_file, "KEY = value config file");
    generate->add_option("--seed", gen.seed_text, "rng seed (decimal or 0x hex)");
    generate->add_option("--out", gen.out_dir, "output directory");
    generate->add_option("--avg-nb-ft", gen.avg_nb_ft, "average number of fact tables");
    generate->add_option("--avg-nb-dim", gen.avg_nb_dim, "average dimensions per fact table");
    generate->add_option("--avg-tot-nb-dim", gen.avg_tot_nb_dim,
                         "average total number of dimensions");
    generate->add_option("--avg-nb-meas", gen.avg_nb_meas, "average measures per fact table");
    generate->add_option("--avg-density", gen.avg_density, "average fact density in (0,1]");
    generate->add_option("--avg-nb-levels", gen.avg_nb_levels,
                         "average hierarchy levels per dimension");
    generate->add_option("--avg-nb-att", gen.avg_nb_att,
                         "average descriptor attributes per level");
    generate->add_option("--avg-hhlevel-size", gen.avg_hhlevel_size,
                         "average tuples in the highest hierarchy level");
    generate->add_option("--dim-sfactor", gen.dim_sfactor,
                         "average scale factor between hierarchy levels");
    generate->add_option("--spread", gen.spread,
                         "relative std-dev of gaussian draws (0 = exact averages)");
    generate->add_option("--nb-q", gen.nb_q, "approximate number of workload queries");
    generate->add_option("--wl-avg-nb-att", gen.wl_avg_nb_att,
                         "average selected attributes per query");
    generate->add_option("--avg-nb-restr", gen.avg_nb_restr,
                         "average restrictions per query");
    generate->add_option("--prob-olap", gen.prob_olap, "probability of an OLAP query");
    generate->add_option("--avg-nb-aggreg", gen.avg_nb_aggreg,
                         "average aggregates per OLAP query");
    generate->add_option("--prob-cube", gen.prob_cube, "probability of CUBE vs ROLLUP");
    generate->add_option("--prob-having", gen.prob_having, "probability of a HAVING clause");
    generate->add_option("--avg-nb-dd", gen.avg_nb_dd,
                         "average drill downs after an OLAP query");
    generate->add_option("--density", gen.density,
                         "exact density override applied to every fact table");
    generate->add_option("--max-rows", gen.max_rows, "per-table row guard");
    generate->add_option("--streaming-threshold", gen.streaming_threshold,
                         "key-space size beyond which exact-count sampling replaces the "
                         "Bernoulli walk");
    generate->add_option("--referential-size", gen.referential_size,
                         "size of the precomputed string referential");
    generate->add_option("--measure-min", gen.measure_min, "measure range lower bound");
    generate->add_option("--measure-max", gen.measure_max, "measure range upper bound");
    generate->add_flag("--no-insert", gen.no_insert, "skip the INSERT script");
    generate->add_flag("--no-workload", gen.no_workload, "skip workload generation output");

    RunFlags run;
    CLI::App* run_cmd = app.add_subcommand("run", "execute a workload under the timing protocol");
    run_cmd->add_option("--workload", run.workload_file, "workload.sql path");
    run_cmd->add_option("--out", run.out_dir, "directory for report.txt / report.csv");
    run_cmd->add_option("--binding", run.binding, "dry-run or subprocess");
    run_cmd->add_option("--command-template", run.command_template,
                        "subprocess command with {file} / {statement} placeholders");
    run_cmd->add_option("--timeout", run.timeout_seconds, "per-statement timeout in seconds");
    run_cmd->add_option("--replications", run.replications, "measured repetitions");
    run_cmd->add_option("--warmup", run.warmup, "unmeasured repetitions first");
    run_cmd->add_option("--variability-threshold", run.variability_threshold,
                        "flag queries with stddev/mean above this");
    run_cmd->add_option("--dry-run-latency-ms", run.dry_run_latency_ms,
                        "fixed synthetic latency per query");
    run_cmd->add_option("--dry-run-seed", run.dry_run_seed, "seeded synthetic latencies");
    run_cmd->add_option("--dry-run-lo-ms", run.dry_run_lo_ms, "seeded latency lower bound");
    run_cmd->add_option("--dry-run-hi-ms", run.dry_run_hi_ms, "seeded latency upper bound");
    run_cmd->add_option("--note", run.note, "environment note recorded in the report");

    std::vector<std::string> compare_paths;
    std::string compare_labels;
    std::string compare_out;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "compare run reports (gain % vs the first)");
    compare_cmd->add_option("reports", compare_paths, "report.csv paths")->expected(-2);
    compare_cmd->add_option("--labels", compare_labels, "comma-separated report labels");
    compare_cmd->add_option("--out-file", compare_out, "write the comparison CSV here");

    std::string validate_config;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "validate a config file without generating");
    validate_cmd->add_option("--config", validate_config, "KEY = value config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(gen, *generate);
        if (run_cmd->parsed()) return cmd_run(run, *run_cmd);
        if (compare_cmd->parsed()) return cmd_compare(compare_paths, compare_labels, compare_out);
        if (validate_cmd->parsed()) return cmd_validate(validate_config);
    } catch (const GuardRefusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitGuard;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
