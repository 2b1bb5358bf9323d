#include "dweb/schema_generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "dweb/errors.hpp"
#include "dweb/text.hpp"

namespace dweb {

namespace {

double int_pow(double base, int exp) {
    double out = 1.0;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

void guard_rows(long long rows, const std::string& table, long long max_rows) {
    if (rows > max_rows) {
        throw GuardRefusal("table " + table + ": " + fmt_int(rows) +
                           " rows exceed the max-rows guard (" + fmt_int(max_rows) +
                           "); lower the cardinalities/density or raise --max-rows");
    }
}

std::vector<long long> entry_cardinalities(const LowLevelParams& low,
                                           const std::vector<int>& assignment) {
    std::vector<long long> cards;
    cards.reserve(assignment.size());
    for (int d : assignment) {
        std::size_t i = static_cast<std::size_t>(d - 1);
        cards.push_back(
            level_cardinality(low.hhlevel_size[i], low.dim_sfactor[i], low.nb_levels[i], 1));
    }
    return cards;
}

}  // namespace

std::string fact_table_name(int fact_index) { return "FT" + fmt_int(fact_index); }

std::string level_table_name(int dim_index, int depth) {
    return "DIM" + fmt_int(dim_index) + "_" + fmt_int(depth);
}

std::string pk_name(int dim_index, int depth) {
    return level_table_name(dim_index, depth) + "_PK";
}

std::string descriptor_name(int dim_index, int depth, int k) {
    return level_table_name(dim_index, depth) + "_DESCR" + fmt_int(k);
}

std::string measure_name(int fact_index, int k) {
    return fact_table_name(fact_index) + "_MEAS" + fmt_int(k);
}

long long level_cardinality(int hhlevel_size, double dim_sfactor, int nb_levels, int depth) {
    return std::llround(static_cast<double>(hhlevel_size) *
                        int_pow(dim_sfactor, nb_levels - depth));
}

double expected_fact_rows(const LowLevelParams& low, int fact_index) {
    std::size_t f = static_cast<std::size_t>(fact_index - 1);
    if (low.dim_assignment.size() != static_cast<std::size_t>(low.nb_ft)) {
        throw std::logic_error("expected_fact_rows: dimension assignment not resolved");
    }
    double product = 1.0;
    for (long long c : entry_cardinalities(low, low.dim_assignment[f])) {
        product *= static_cast<double>(c);
    }
    return low.density[f] * product;
}

std::vector<Dimension> generate_dimensions(const LowLevelParams& low, const SeededRng& base,
                                           const StringReferential& referential,
                                           const GeneratorLimits& limits) {
    std::vector<Dimension> dims;
    dims.reserve(static_cast<std::size_t>(low.tot_nb_dim));

    for (int d = 1; d <= low.tot_nb_dim; ++d) {
        std::size_t di = static_cast<std::size_t>(d - 1);
        const int nb_levels = low.nb_levels[di];
        SeededRng rng = base.substream("dim", static_cast<std::uint64_t>(d));

        Dimension dim;
        dim.index = d;
        dim.levels.resize(static_cast<std::size_t>(nb_levels));

        // Coarsest level first; each finer level scales up and references the
        // one built before it.
        const HierarchyLevel* coarser = nullptr;
        for (int depth = nb_levels; depth >= 1; --depth) {
            HierarchyLevel& level = dim.levels[static_cast<std::size_t>(depth - 1)];
            level.table_name = level_table_name(d, depth);
            level.depth = depth;
            level.has_coarser = depth < nb_levels;

            const long long cardinality =
                level_cardinality(low.hhlevel_size[di], low.dim_sfactor[di], nb_levels, depth);
            guard_rows(cardinality, level.table_name, limits.max_rows);

            const int nb_att = low.nb_att[di][static_cast<std::size_t>(depth - 1)];
            level.intention.push_back({pk_name(d, depth), AttributeKind::PrimaryKey, {}});
            for (int k = 1; k <= nb_att; ++k) {
                level.intention.push_back(
                    {descriptor_name(d, depth, k), AttributeKind::Descriptor, {}});
            }
            if (level.has_coarser) {
                level.intention.push_back({pk_name(d, depth + 1), AttributeKind::ForeignKey,
                                           level_table_name(d, depth + 1)});
            }

            level.extension.reserve(static_cast<std::size_t>(cardinality));
            const long long coarser_cardinality =
                coarser ? static_cast<long long>(coarser->extension.size()) : 0;
            for (long long row = 1; row <= cardinality; ++row) {
                Tuple tuple;
                tuple.reserve(level.intention.size());
                tuple.emplace_back(static_cast<std::int32_t>(row));
                for (int k = 1; k <= nb_att; ++k) {
                    tuple.emplace_back(
                        random_string(rng, referential, descriptor_name(d, depth, k)));
                }
                if (level.has_coarser) {
                    tuple.emplace_back(random_key(rng, coarser_cardinality));
                }
                level.extension.push_back(std::move(tuple));
            }
            coarser = &level;
        }
        dims.push_back(std::move(dim));
    }
    return dims;
}

namespace {

// Decodes a combination index into 1-based keys per dimension; the last
// dimension varies fastest (odometer order).
std::vector<std::int32_t> decode_combination(std::uint64_t combo,
                                             const std::vector<long long>& cards) {
    std::vector<std::int32_t> keys(cards.size());
    for (std::size_t j = cards.size(); j-- > 0;) {
        std::uint64_t c = static_cast<std::uint64_t>(cards[j]);
        keys[j] = static_cast<std::int32_t>(combo % c + 1);
        combo /= c;
    }
    return keys;
}

}  // namespace

LowLevelParams resolve_dim_assignment(const LowLevelParams& low, const SeededRng& base) {
    if (!low.dim_assignment.empty()) return low;
    LowLevelParams resolved = low;
    SeededRng rng = base.substream("assign");
    for (int f = 0; f < resolved.nb_ft; ++f) {
        std::vector<int> pool(static_cast<std::size_t>(resolved.tot_nb_dim));
        std::iota(pool.begin(), pool.end(), 1);
        std::vector<int> picked;
        for (int k = 0; k < resolved.nb_dim[static_cast<std::size_t>(f)]; ++k) {
            std::size_t i = static_cast<std::size_t>(rng.uniform_below(pool.size()));
            picked.push_back(pool[i]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
        }
        std::sort(picked.begin(), picked.end());
        resolved.dim_assignment.push_back(std::move(picked));
    }
    return resolved;
}

std::vector<FactTable> generate_fact_tables(const LowLevelParams& low,
                                            const std::vector<Dimension>& dims,
                                            const SeededRng& base,
                                            const GeneratorLimits& limits) {
    LowLevelParams resolved = resolve_dim_assignment(low, base);

    std::vector<FactTable> facts;
    facts.reserve(static_cast<std::size_t>(resolved.nb_ft));

    for (int f = 1; f <= resolved.nb_ft; ++f) {
        std::size_t fi = static_cast<std::size_t>(f - 1);
        const std::vector<int>& assignment = resolved.dim_assignment[fi];
        SeededRng rng = base.substream("fact", static_cast<std::uint64_t>(f));

        FactTable ft;
        ft.table_name = fact_table_name(f);
        ft.dimension_indexes = assignment;

        for (int d : assignment) {
            ft.intention.push_back(
                {pk_name(d, 1), AttributeKind::ForeignKey, level_table_name(d, 1)});
        }
        const int nb_meas = resolved.nb_meas[fi];
        for (int k = 1; k <= nb_meas; ++k) {
            ft.intention.push_back({measure_name(f, k), AttributeKind::Measure, {}});
        }

        std::vector<long long> cards;
        cards.reserve(assignment.size());
        for (int d : assignment) {
            cards.push_back(
                static_cast<long long>(dims[static_cast<std::size_t>(d - 1)].entry_level()
                                           .extension.size()));
        }
        double product = 1.0;
        for (long long c : cards) product *= static_cast<double>(c);
        const double density = resolved.density[fi];
        const double expected = density * product;
        if (expected > static_cast<double>(limits.max_rows)) {
            throw GuardRefusal("fact table " + ft.table_name + ": expected " +
                               fmt_real(expected) + " rows (density " + fmt_real(density) +
                               " of " + fmt_real(product) +
                               " key combinations) exceed the max-rows guard (" +
                               fmt_int(limits.max_rows) + ")");
        }

        auto append_tuple = [&](const std::vector<std::int32_t>& keys) {
            Tuple tuple;
            tuple.reserve(keys.size() + static_cast<std::size_t>(nb_meas));
            for (std::int32_t k : keys) tuple.emplace_back(k);
            for (int k = 0; k < nb_meas; ++k) {
                tuple.emplace_back(static_cast<float>(
                    random_measure(rng, limits.measure_lo, limits.measure_hi)));
            }
            ft.extension.push_back(std::move(tuple));
        };

        if (product <= static_cast<double>(limits.streaming_threshold)) {
            // Bernoulli walk over the full cartesian product, odometer order.
            const std::uint64_t total = static_cast<std::uint64_t>(product);
            std::vector<std::int32_t> keys(cards.size(), 1);
            for (std::uint64_t combo = 0; combo < total; ++combo) {
                if (rng.uniform01() < density) {
                    append_tuple(keys);
                }
                for (std::size_t j = keys.size(); j-- > 0;) {
                    if (++keys[j] <= cards[j]) break;
                    keys[j] = 1;
                }
            }
        } else {
            // Exact-count distinct sampling of combination indexes.
            const std::uint64_t total = static_cast<std::uint64_t>(product);
            const std::uint64_t count = static_cast<std::uint64_t>(std::llround(expected));
            std::unordered_set<std::uint64_t> chosen;
            chosen.reserve(count * 2);
            std::vector<std::uint64_t> combos;
            combos.reserve(count);
            while (combos.size() < count) {
                std::uint64_t c = rng.uniform_below(total);
                if (chosen.insert(c).second) combos.push_back(c);
            }
            std::sort(combos.begin(), combos.end());
            for (std::uint64_t c : combos) append_tuple(decode_combination(c, cards));
        }
        facts.push_back(std::move(ft));
    }
    return facts;
}

SizeReport estimate_size(const Warehouse& wh) {
    SizeReport report;
    long long grand_total = 0;

    auto add_table = [&](const std::string& name, const std::vector<Attribute>& intention,
                         std::size_t rows) {
        long long row_bytes = 0;
        for (const auto& a : intention) {
            switch (a.kind) {
                case AttributeKind::PrimaryKey:
                case AttributeKind::ForeignKey:
                case AttributeKind::Measure:
                    row_bytes += 4;
                    break;
                case AttributeKind::Descriptor:
                    row_bytes += static_cast<long long>(a.name.size()) + 21;
                    break;
            }
        }
        TableSize ts;
        ts.row_count = static_cast<long long>(rows);
        ts.row_bytes = row_bytes;
        ts.total_bytes = ts.row_count * ts.row_bytes;
        grand_total += ts.total_bytes;
        report.per_table.emplace(name, ts);
    };

    for (const auto& dim : wh.dimensions) {
        for (const auto& level : dim.levels) {
            add_table(level.table_name, level.intention, level.extension.size());
        }
    }
    for (const auto& ft : wh.fact_tables) {
        add_table(ft.table_name, ft.intention, ft.extension.size());
    }
    report.warehouse_megabytes = static_cast<double>(grand_total) / (1024.0 * 1024.0);
    return report;
}

std::pair<Warehouse, SizeReport> generate_warehouse(const LowLevelParams& low,
                                                    std::uint64_t seed,
                                                    const GeneratorLimits& limits) {
    ValidationReport check = validate(low);
    if (!check.ok()) {
        throw ValidationError("generate_warehouse: invalid low-level parameters\n" +
                              check.to_string());
    }
    SeededRng base(seed);
    StringReferential referential(seed, limits.referential_size);

    Warehouse wh;
    wh.dimensions = generate_dimensions(low, base, referential, limits);
    wh.fact_tables = generate_fact_tables(low, wh.dimensions, base, limits);
    wh.provenance.seed = seed;
    wh.provenance.params = low;
    // Echo the realized assignment (drawn inside generate_fact_tables when absent).
    wh.provenance.params.dim_assignment.clear();
    for (const auto& ft : wh.fact_tables) {
        wh.provenance.params.dim_assignment.push_back(ft.dimension_indexes);
    }
    SizeReport size = estimate_size(wh);
    return {std::move(wh), std::move(size)};
}

std::pair<Warehouse, SizeReport> generate_warehouse(const HighLevelParams& high,
                                                    std::uint64_t seed,
                                                    const GeneratorLimits& limits) {
    SeededRng base(seed);
    SeededRng params_rng = base.substream("params");
    LowLevelParams low = derive_low_level(high, params_rng);
    return generate_warehouse(low, seed, limits);
}

}  // namespace dweb
