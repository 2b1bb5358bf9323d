#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "dweb/model.hpp"
#include "dweb/params.hpp"
#include "dweb/random.hpp"

namespace dweb {

struct TableSize {
    long long row_count = 0;
    long long row_bytes = 0;
    long long total_bytes = 0;  // row_count * row_bytes

    bool operator==(const TableSize&) const = default;
};

struct SizeReport {
    std::map<std::string, TableSize> per_table;
    double warehouse_megabytes = 0.0;  // sum of total_bytes / 2^20
};

struct GeneratorLimits {
    long long max_rows = 5'000'000;             // refusal guard, per table
    long long streaming_threshold = 10'000'000; // Bernoulli path up to this key-space size
    double measure_lo = 0.0;
    double measure_hi = 1000.0;
    std::size_t referential_size = 1000;
};

// Cardinality law: round(HHLEVEL_SIZE * DIM_SFACTOR^(NB_LEVELS - depth)),
// depth 1 = finest.
long long level_cardinality(int hhlevel_size, double dim_sfactor, int nb_levels, int depth);

// Expected fact extension size: DENSITY(f) * product of assigned entry-level
// cardinalities. Requires dim_assignment to be resolved. `fact_index` is 1-based.
double expected_fact_rows(const LowLevelParams& low, int fact_index);

// Fills dim_assignment when absent: NB_DIM(f) distinct dimensions per fact
// table, uniform without replacement from the pool (sub-stream "assign"),
// sorted ascending. No-op when already resolved.
LowLevelParams resolve_dim_assignment(const LowLevelParams& low, const SeededRng& base);

// Builds every dimension hierarchy from the coarsest level down to the entry
// level. Each dimension consumes its own rng sub-stream keyed by its index, so
// results do not depend on generation order.
std::vector<Dimension> generate_dimensions(const LowLevelParams& low, const SeededRng& base,
                                           const StringReferential& referential,
                                           const GeneratorLimits& limits = {});

// Builds fact tables over their assigned dimensions. Key combinations come
// from the cartesian product of entry-level key ranges: included independently
// with probability DENSITY(f) while the product fits the streaming threshold,
// otherwise exactly round(DENSITY(f) * product) distinct combinations sampled
// uniformly. Throws GuardRefusal when the expectation exceeds max_rows.
std::vector<FactTable> generate_fact_tables(const LowLevelParams& low,
                                            const std::vector<Dimension>& dims,
                                            const SeededRng& base,
                                            const GeneratorLimits& limits = {});

std::pair<Warehouse, SizeReport> generate_warehouse(const LowLevelParams& low,
                                                    std::uint64_t seed,
                                                    const GeneratorLimits& limits = {});
std::pair<Warehouse, SizeReport> generate_warehouse(const HighLevelParams& high,
                                                    std::uint64_t seed,
                                                    const GeneratorLimits& limits = {});

// Row bytes: 4 per integer key, 4 per measure, len(attribute name) + 21 per
// descriptor value.
SizeReport estimate_size(const Warehouse& wh);

// Table and attribute naming scheme shared by generator, emitters and tests.
std::string fact_table_name(int fact_index);
std::string level_table_name(int dim_index, int depth);
std::string pk_name(int dim_index, int depth);
std::string descriptor_name(int dim_index, int depth, int k);
std::string measure_name(int fact_index, int k);

}  // namespace dweb
