#include "dweb/workload.hpp"

#include <algorithm>
#include <stdexcept>

#include "dweb/errors.hpp"
#include "dweb/text.hpp"

namespace dweb {

std::string_view to_string(QueryClass tag) {
    switch (tag) {
        case QueryClass::Extraction: return "EXTRACTION";
        case QueryClass::OlapInitial: return "OLAP_INITIAL";
        case QueryClass::DrillDown: return "DRILL_DOWN";
    }
    return "?";
}

namespace {

bool contains(const std::vector<QualifiedName>& names, const QualifiedName& name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

void add_table(Query& q, const std::string& table) {
    if (std::find(q.tables.begin(), q.tables.end(), table) == q.tables.end()) {
        q.tables.push_back(table);
    }
}

void add_join(Query& q, QualifiedName left, QualifiedName right) {
    JoinEquality join{std::move(left), std::move(right)};
    if (std::find(q.joins.begin(), q.joins.end(), join) == q.joins.end()) {
        q.joins.push_back(std::move(join));
    }
}

// The fact table's foreign-key column referencing this dimension's entry level.
const Attribute& fact_fk_for(const FactTable& ft, const Dimension& dim) {
    for (const auto& a : ft.intention) {
        if (a.kind == AttributeKind::ForeignKey &&
            a.target_table == dim.entry_level().table_name) {
            return a;
        }
    }
    throw std::logic_error("fact table " + ft.table_name +
                           " has no foreign key into dimension DIM" + fmt_int(dim.index));
}

// Skewed pick of a descriptor attribute of the level; the primary key stands
// in when the level has no descriptors. Attributes already in `taken` are not
// eligible; returns false when the level offers nothing new.
bool pick_level_attribute(SeededRng& rng, const HierarchyLevel& level,
                          const std::vector<QualifiedName>& taken, QualifiedName& out) {
    std::vector<const Attribute*> candidates;
    for (const auto& a : level.intention) {
        if (a.kind != AttributeKind::Descriptor) continue;
        if (contains(taken, {level.table_name, a.name})) continue;
        candidates.push_back(&a);
    }
    if (candidates.empty()) {
        const Attribute& pk = level.primary_key();
        if (contains(taken, {level.table_name, pk.name})) return false;
        out = {level.table_name, pk.name};
        return true;
    }
    std::int32_t pick = skewed_pick(rng, static_cast<std::int64_t>(candidates.size()));
    out = {level.table_name, candidates[static_cast<std::size_t>(pick - 1)]->name};
    return true;
}

}  // namespace

std::pair<Query, ChainContext> generate_initial_query(const Warehouse& wh,
                                                      const WorkloadParams& wp, SeededRng& rng,
                                                      const StringReferential& referential,
                                                      double spread, double measure_lo,
                                                      double measure_hi) {
    if (wh.fact_tables.empty()) {
        throw ValidationError("generate_initial_query: the warehouse has no fact table");
    }

    std::int32_t ft_pick =
        skewed_pick(rng, static_cast<std::int64_t>(wh.fact_tables.size()));
    const FactTable& ft = wh.fact_tables[static_cast<std::size_t>(ft_pick - 1)];
    if (ft.dimension_indexes.empty()) {
        throw ValidationError("generate_initial_query: fact table " + ft.table_name +
                              " has no dimensions");
    }

    Query q;
    q.tables.push_back(ft.table_name);
    ChainContext ctx{ft_pick, 0, 0};

    // Select/From/Where: one hierarchy walk per selected attribute.
    const long long nb_att = gaussian_int(rng, wp.avg_nb_att, spread, 1);
    for (long long k = 0; k < nb_att; ++k) {
        std::int32_t dim_pos =
            skewed_pick(rng, static_cast<std::int64_t>(ft.dimension_indexes.size()));
        const Dimension& dim =
            wh.dimension(ft.dimension_indexes[static_cast<std::size_t>(dim_pos - 1)]);
        const int target_depth =
            1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(dim.nb_levels())));

        // Walk from the entry level to the target depth, joining every visited
        // level to the table the running foreign key lives in.
        QualifiedName fk{ft.table_name, fact_fk_for(ft, dim).name};
        for (int depth = 1; depth <= target_depth; ++depth) {
            const HierarchyLevel& level = level_at(dim, depth);
            add_table(q, level.table_name);
            add_join(q, fk, {level.table_name, level.primary_key().name});
            if (depth < target_depth) {
                fk = {level.table_name, level.foreign_key()->name};
            }
        }

        const HierarchyLevel& reached = level_at(dim, target_depth);
        QualifiedName attr;
        if (pick_level_attribute(rng, reached, q.attributes, attr)) {
            q.attributes.push_back(std::move(attr));
        }
        ctx.dimension_index = dim.index;
        ctx.depth = target_depth;
    }

    // Supplement the Where clause with descriptor = literal restrictions.
    std::vector<QualifiedName> restrictable;
    for (const auto& a : q.attributes) {
        const HierarchyLevel* level = wh.find_level(a.table);
        if (!level) continue;
        for (const auto& attr : level->intention) {
            if (attr.name == a.column && attr.kind == AttributeKind::Descriptor) {
                restrictable.push_back(a);
                break;
            }
        }
    }
    const long long nb_restr = gaussian_int(rng, wp.avg_nb_restr, spread, 0);
    for (long long k = 0; k < nb_restr && !restrictable.empty(); ++k) {
        std::int32_t pick =
            skewed_pick(rng, static_cast<std::int64_t>(restrictable.size()));
        const QualifiedName& attr = restrictable[static_cast<std::size_t>(pick - 1)];
        q.restrictions.push_back(
            {attr, CompareOp::Eq, random_string(rng, referential, attr.column)});
    }

    // OLAP or extraction. A fact table without measures cannot aggregate and
    // stays an extraction query.
    const double p1 = rng.uniform01();
    const auto measures = ft.measures();
    if (p1 < wp.prob_olap && !measures.empty()) {
        const long long nb_aggreg = gaussian_int(rng, wp.avg_nb_aggreg, spread, 1);
        for (long long k = 0; k < nb_aggreg; ++k) {
            std::int32_t pick = skewed_pick(rng, static_cast<std::int64_t>(measures.size()));
            q.aggregates.push_back({"SUM",
                                    {ft.table_name,
                                     measures[static_cast<std::size_t>(pick - 1)]->name},
                                    "AGG" + fmt_int(k + 1)});
        }
        GroupBy gb;
        gb.attributes = q.attributes;
        const double p2 = rng.uniform01();
        gb.op = (p2 < wp.prob_cube) ? GroupOperator::Cube : GroupOperator::Rollup;
        q.group_by = std::move(gb);
        const double p3 = rng.uniform01();
        if (p3 < wp.prob_having) {
            std::int32_t pick =
                skewed_pick(rng, static_cast<std::int64_t>(q.aggregates.size()));
            Having h;
            h.target = q.aggregates[static_cast<std::size_t>(pick - 1)].alias;
            h.op = CompareOp::Ge;
            h.value = rng.uniform_real(measure_lo, measure_hi);
            q.having = std::move(h);
        }
    }
    return {std::move(q), ctx};
}

DrillDownChain generate_drill_downs(const Query& initial, const ChainContext& ctx,
                                    const Warehouse& wh, const WorkloadParams& wp,
                                    SeededRng& rng, double spread) {
    if (!initial.group_by) {
        throw std::logic_error("generate_drill_downs: the initial query is not an OLAP query");
    }
    DrillDownChain chain;
    chain.target = static_cast<int>(gaussian_int(rng, wp.avg_nb_dd, spread, 0));

    const Dimension& dim = wh.dimension(ctx.dimension_index);
    Query previous = initial;
    int depth = ctx.depth;
    while (static_cast<int>(chain.queries.size()) < chain.target && depth > 1) {
        --depth;
        const HierarchyLevel& level = level_at(dim, depth);
        QualifiedName attr;
        if (!pick_level_attribute(rng, level, previous.attributes, attr)) break;
        Query next = previous;
        next.attributes.push_back(attr);
        next.group_by->attributes.push_back(attr);
        chain.queries.push_back(next);
        previous = std::move(next);
    }
    return chain;
}

Workload generate_workload(const Warehouse& wh, const WorkloadParams& wp, SeededRng& rng,
                           const StringReferential& referential, double spread,
                           double measure_lo, double measure_hi) {
    ValidationReport check = validate(wp);
    if (!check.ok()) {
        throw ValidationError("generate_workload: invalid workload parameters\n" +
                              check.to_string());
    }
    if (wh.fact_tables.empty()) {
        throw ValidationError("generate_workload: the warehouse has no fact table");
    }

    Workload out;
    out.seed = rng.seed();
    out.params = wp;
    out.spread = spread;

    long long generated = 0;
    while (generated < wp.nb_q) {
        auto [query, ctx] = generate_initial_query(wh, wp, rng, referential, spread,
                                                   measure_lo, measure_hi);
        const bool olap = query.group_by.has_value();
        const std::size_t initial_index = out.queries.size();
        out.queries.push_back(std::move(query));
        out.class_tags.push_back(olap ? QueryClass::OlapInitial : QueryClass::Extraction);
        generated += 1;

        if (olap) {
            DrillDownChain chain =
                generate_drill_downs(out.queries.back(), ctx, wh, wp, rng, spread);
            for (auto& q : chain.queries) {
                out.queries.push_back(std::move(q));
                out.class_tags.push_back(QueryClass::DrillDown);
            }
            generated += static_cast<long long>(chain.queries.size());
            out.chains.push_back({initial_index, chain.target,
                                  static_cast<int>(chain.queries.size()), ctx.depth});
        }
    }
    return out;
}

}  // namespace dweb
