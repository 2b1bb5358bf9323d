#include "dweb/pipeline.hpp"

#include <ostream>

#include "dweb/errors.hpp"
#include "dweb/text.hpp"

namespace dweb {

GenerateOutcome generate_all(const RunConfig& config, std::ostream* log) {
    if (config.high.has_value() == config.low.has_value()) {
        throw ValidationError(
            "exactly one of the high-level / low-level parameter sources must be active");
    }

    // Resolve the low-level parameters.
    SeededRng base(config.seed);
    LowLevelParams low;
    if (config.high) {
        HighLevelParams high = *config.high;
        high.spread = config.spread;
        SeededRng params_rng = base.substream("params");
        low = derive_low_level(high, params_rng);
    } else {
        low = *config.low;
    }
    if (config.density_override) {
        double d = *config.density_override;
        if (!(d > 0.0 && d <= 1.0)) {
            throw ValidationError("--density must be in (0,1], got " + fmt_real(d));
        }
        low.density.assign(low.density.size(), d);
    }
    low = resolve_dim_assignment(low, base);

    ValidationReport low_check = validate(low);
    if (!low_check.ok()) {
        throw ValidationError("invalid low-level parameters\n" + low_check.to_string());
    }
    ValidationReport wl_check = validate(config.workload);
    if (!wl_check.ok()) {
        throw ValidationError("invalid workload parameters\n" + wl_check.to_string());
    }

    // Expected sizes first: the guard refuses before any tuple is generated.
    for (int d = 1; d <= low.tot_nb_dim; ++d) {
        std::size_t di = static_cast<std::size_t>(d - 1);
        long long entry =
            level_cardinality(low.hhlevel_size[di], low.dim_sfactor[di], low.nb_levels[di], 1);
        if (entry > config.limits.max_rows) {
            throw GuardRefusal("dimension DIM" + fmt_int(d) + ": entry level of " +
                               fmt_int(entry) + " rows exceeds the max-rows guard (" +
                               fmt_int(config.limits.max_rows) + ")");
        }
    }
    for (int f = 1; f <= low.nb_ft; ++f) {
        double expected = expected_fact_rows(low, f);
        if (log) {
            *log << "expected rows for " << fact_table_name(f) << ": " << fmt_real(expected)
                 << "\n";
        }
        if (expected > static_cast<double>(config.limits.max_rows)) {
            throw GuardRefusal("fact table " + fact_table_name(f) + ": expected " +
                               fmt_real(expected) + " rows exceed the max-rows guard (" +
                               fmt_int(config.limits.max_rows) +
                               "); lower DENSITY/cardinalities or raise --max-rows");
        }
    }

    GenerateOutcome outcome;
    auto [warehouse, size] = generate_warehouse(low, config.seed, config.limits);
    outcome.warehouse = std::move(warehouse);
    outcome.size = std::move(size);

    StringReferential referential(config.seed, config.limits.referential_size);
    SeededRng workload_rng = base.substream("workload");
    outcome.workload =
        generate_workload(outcome.warehouse, config.workload, workload_rng, referential,
                          config.spread, config.limits.measure_lo, config.limits.measure_hi);

    if (!config.out_dir.empty()) {
        outcome.emitted = emit_all(outcome.warehouse, outcome.workload, outcome.size, config,
                                   config.out_dir);
    }
    return outcome;
}

}  // namespace dweb
