#include <doctest.h>

#include <algorithm>
#include <set>

#include "dweb/emitters.hpp"
#include "dweb/schema_generator.hpp"
#include "dweb/workload.hpp"

using namespace dweb;

namespace {

// 1 fact table over 3 dimensions: 3 levels, 1 level, 2 levels.
Warehouse fixture() {
    LowLevelParams low;
    low.nb_ft = 1;
    low.tot_nb_dim = 3;
    low.nb_dim = {3};
    low.nb_meas = {3};
    low.density = {0.3};
    low.nb_levels = {3, 1, 2};
    low.nb_att = {{3, 3, 3}, {3}, {3, 3}};
    low.hhlevel_size = {2, 6, 3};
    low.dim_sfactor = {2.0, 1.0, 2.0};
    low.dim_assignment = {{1, 2, 3}};
    auto [wh, size] = generate_warehouse(low, 99);
    return wh;
}

bool resolves_against(const Query& q, const Warehouse& wh) {
    for (const auto& table : q.tables) {
        if (table == wh.fact_tables[0].table_name) continue;
        if (!wh.find_level(table)) return false;
    }
    auto attribute_exists = [&](const QualifiedName& name) {
        const std::vector<Attribute>* intention = nullptr;
        if (name.table == wh.fact_tables[0].table_name) {
            intention = &wh.fact_tables[0].intention;
        } else if (const HierarchyLevel* level = wh.find_level(name.table)) {
            intention = &level->intention;
        }
        if (!intention) return false;
        return std::any_of(intention->begin(), intention->end(),
                           [&](const Attribute& a) { return a.name == name.column; });
    };
    for (const auto& a : q.attributes) {
        if (!attribute_exists(a)) return false;
    }
    for (const auto& agg : q.aggregates) {
        if (!attribute_exists(agg.measure)) return false;
    }
    for (const auto& j : q.joins) {
        if (!attribute_exists(j.left) || !attribute_exists(j.right)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("PROB_OLAP 0 yields exactly NB_Q extraction queries") {
    Warehouse wh = fixture();
    WorkloadParams wp;
    wp.nb_q = 40;
    wp.prob_olap = 0.0;
    StringReferential ref(99, 100);
    SeededRng rng(7);
    Workload wl = generate_workload(wh, wp, rng, ref, 0.1);

    CHECK(wl.queries.size() == 40);
    for (std::size_t i = 0; i < wl.queries.size(); ++i) {
        CHECK(wl.class_tags[i] == QueryClass::Extraction);
        CHECK_FALSE(wl.queries[i].group_by.has_value());
        CHECK(wl.queries[i].aggregates.empty());
    }
}

TEST_CASE("degenerate probabilities force CUBE and HAVING everywhere") {
    Warehouse wh = fixture();
    WorkloadParams wp;
    wp.nb_q = 30;
    wp.prob_olap = 1.0;
    wp.prob_cube = 1.0;
    wp.prob_having = 1.0;
    StringReferential ref(99, 100);
    SeededRng rng(8);
    Workload wl = generate_workload(wh, wp, rng, ref, 0.1);

    CHECK(wl.queries.size() >= 30);
    for (std::size_t i = 0; i < wl.queries.size(); ++i) {
        REQUIRE(wl.queries[i].group_by.has_value());
        CHECK(wl.queries[i].group_by->op == GroupOperator::Cube);
        CHECK(wl.queries[i].having.has_value());
        CHECK_FALSE(wl.queries[i].aggregates.empty());
    }
}

TEST_CASE("the workload loop stops at or just past NB_Q") {
    Warehouse wh = fixture();
    WorkloadParams wp;
    wp.nb_q = 25;
    StringReferential ref(99, 100);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SeededRng rng(seed);
        Workload wl = generate_workload(wh, wp, rng, ref, 0.1);
        CHECK(wl.queries.size() >= 25);
        // An overshoot can only come from the last drill-down chain.
        CHECK(wl.queries.size() <= 25 + 10);
    }
}

TEST_CASE("single-level dimensions join only the entry level") {
    LowLevelParams low;
    low.nb_ft = 1;
    low.tot_nb_dim = 1;
    low.nb_dim = {1};
    low.nb_meas = {1};
    low.density = {1.0};
    low.nb_levels = {1};
    low.nb_att = {{2}};
    low.hhlevel_size = {4};
    low.dim_sfactor = {1.0};
    low.dim_assignment = {{1}};
    auto [wh, size] = generate_warehouse(low, 3);

    WorkloadParams wp;
    wp.nb_q = 20;
    StringReferential ref(3, 100);
    SeededRng rng(3);
    Workload wl = generate_workload(wh, wp, rng, ref, 0.1);
    for (const auto& q : wl.queries) {
        CHECK(q.tables == std::vector<std::string>{"FT1", "DIM1_1"});
        REQUIRE(q.joins.size() == 1);
        CHECK(q.joins[0].left == QualifiedName{"FT1", "DIM1_1_PK"});
        CHECK(q.joins[0].right == QualifiedName{"DIM1_1", "DIM1_1_PK"});
    }
}

TEST_CASE("a depth-3 walk joins the fact table and three levels") {
    // Single 3-level dimension: every walk that reaches depth 3 must list
    // FT1, DIM1_1, DIM1_2, DIM1_3 with exactly 3 join equalities.
    LowLevelParams low;
    low.nb_ft = 1;
    low.tot_nb_dim = 1;
    low.nb_dim = {1};
    low.nb_meas = {1};
    low.density = {0.5};
    low.nb_levels = {3};
    low.nb_att = {{2, 2, 2}};
    low.hhlevel_size = {2};
    low.dim_sfactor = {2.0};
    low.dim_assignment = {{1}};
    auto [wh, size] = generate_warehouse(low, 4);

    WorkloadParams wp;
    wp.nb_q = 50;
    wp.avg_nb_att = 1.0;  // one walk per query; depth l is the walk's reach
    wp.prob_olap = 0.0;
    StringReferential ref(4, 100);
    SeededRng rng(4);
    Workload wl = generate_workload(wh, wp, rng, ref, 0.0);

    bool saw_depth3 = false;
    for (const auto& q : wl.queries) {
        if (q.attributes.size() == 1 && q.attributes[0].table == "DIM1_3") {
            saw_depth3 = true;
            std::vector<std::string> expected{"FT1", "DIM1_1", "DIM1_2", "DIM1_3"};
            CHECK(q.tables == expected);
            CHECK(q.joins.size() == 3);
        }
    }
    CHECK(saw_depth3);
}

TEST_CASE("drill downs extend the previous query by exactly one attribute") {
    Warehouse wh = fixture();
    Query initial;
    initial.tables = {"FT1", "DIM1_1", "DIM1_2", "DIM1_3"};
    initial.joins = {{{"FT1", "DIM1_1_PK"}, {"DIM1_1", "DIM1_1_PK"}},
                     {{"DIM1_1", "DIM1_2_PK"}, {"DIM1_2", "DIM1_2_PK"}},
                     {{"DIM1_2", "DIM1_3_PK"}, {"DIM1_3", "DIM1_3_PK"}}};
    initial.attributes = {{"DIM1_3", "DIM1_3_DESCR1"}};
    initial.aggregates = {{"SUM", {"FT1", "FT1_MEAS1"}, "AGG1"}};
    initial.group_by = GroupBy{GroupOperator::Rollup, initial.attributes};
    ChainContext ctx{1, 1, 3};

    WorkloadParams wp;
    wp.avg_nb_dd = 2.0;
    SeededRng rng(5);
    DrillDownChain chain = generate_drill_downs(initial, ctx, wh, wp, rng, 0.0);

    CHECK(chain.target == 2);
    REQUIRE(chain.queries.size() == 2);
    const Query* previous = &initial;
    for (const auto& q : chain.queries) {
        CHECK(q.attributes.size() == previous->attributes.size() + 1);
        CHECK(q.group_by->attributes.size() == previous->group_by->attributes.size() + 1);
        CHECK(std::equal(previous->attributes.begin(), previous->attributes.end(),
                         q.attributes.begin()));
        CHECK(q.tables == previous->tables);
        CHECK(q.joins == previous->joins);
        CHECK(q.restrictions == previous->restrictions);
        CHECK(q.aggregates == previous->aggregates);
        CHECK(q.having == previous->having);
        previous = &q;
    }
    // First step moves one level finer: depth 3 -> 2.
    CHECK(chain.queries[0].attributes.back().table == "DIM1_2");
    CHECK(chain.queries[1].attributes.back().table == "DIM1_1");
}

TEST_CASE("a chain starting at the finest level is empty") {
    Warehouse wh = fixture();
    Query initial;
    initial.tables = {"FT1", "DIM1_1"};
    initial.joins = {{{"FT1", "DIM1_1_PK"}, {"DIM1_1", "DIM1_1_PK"}}};
    initial.attributes = {{"DIM1_1", "DIM1_1_DESCR1"}};
    initial.aggregates = {{"SUM", {"FT1", "FT1_MEAS1"}, "AGG1"}};
    initial.group_by = GroupBy{GroupOperator::Cube, initial.attributes};
    ChainContext ctx{1, 1, 1};

    WorkloadParams wp;
    SeededRng rng(6);
    DrillDownChain chain = generate_drill_downs(initial, ctx, wh, wp, rng, 0.1);
    CHECK(chain.queries.empty());
}

TEST_CASE("drill downs on an extraction query are a usage error") {
    Warehouse wh = fixture();
    Query extraction;
    extraction.tables = {"FT1"};
    extraction.attributes = {{"FT1", "FT1_MEAS1"}};
    WorkloadParams wp;
    SeededRng rng(7);
    CHECK_THROWS_AS(generate_drill_downs(extraction, ChainContext{1, 1, 2}, wh, wp, rng, 0.1),
                    std::logic_error);
}

TEST_CASE("every generated query round-trips and resolves against the schema") {
    Warehouse wh = fixture();
    WorkloadParams wp;
    wp.nb_q = 120;
    StringReferential ref(99, 100);
    SeededRng rng(12);
    Workload wl = generate_workload(wh, wp, rng, ref, 0.1);

    for (const auto& q : wl.queries) {
        CHECK_FALSE(check_structure(q).has_value());
        auto result = parse_check(render_sql(q));
        REQUIRE(std::holds_alternative<Query>(result));
        CHECK(std::get<Query>(result) == q);
        CHECK(resolves_against(q, wh));
    }
}

TEST_CASE("restriction literals carry the restricted attribute's prefix") {
    Warehouse wh = fixture();
    WorkloadParams wp;
    wp.nb_q = 60;
    StringReferential ref(99, 100);
    SeededRng rng(13);
    Workload wl = generate_workload(wh, wp, rng, ref, 0.1);

    int restrictions = 0;
    for (const auto& q : wl.queries) {
        for (const auto& r : q.restrictions) {
            ++restrictions;
            const std::string& literal = std::get<std::string>(r.operand);
            CHECK(literal.size() == r.attribute.column.size() + 21);
            CHECK(literal.rfind(r.attribute.column + "_", 0) == 0);
        }
    }
    CHECK(restrictions > 0);
}

TEST_CASE("workload generation is deterministic per seed") {
    Warehouse wh = fixture();
    WorkloadParams wp;
    wp.nb_q = 50;
    StringReferential ref(99, 100);
    SeededRng a(77), b(77), c(78);
    Workload w1 = generate_workload(wh, wp, a, ref, 0.1);
    Workload w2 = generate_workload(wh, wp, b, ref, 0.1);
    CHECK(render_workload_sql(w1) == render_workload_sql(w2));
    Workload w3 = generate_workload(wh, wp, c, ref, 0.1);
    CHECK(render_workload_sql(w1) != render_workload_sql(w3));
}

TEST_CASE("a measureless fact table never produces OLAP queries") {
    LowLevelParams low;
    low.nb_ft = 1;
    low.tot_nb_dim = 1;
    low.nb_dim = {1};
    low.nb_meas = {0};
    low.density = {1.0};
    low.nb_levels = {2};
    low.nb_att = {{2, 2}};
    low.hhlevel_size = {3};
    low.dim_sfactor = {2.0};
    low.dim_assignment = {{1}};
    auto [wh, size] = generate_warehouse(low, 8);

    WorkloadParams wp;
    wp.nb_q = 20;
    wp.prob_olap = 1.0;
    StringReferential ref(8, 100);
    SeededRng rng(8);
    Workload wl = generate_workload(wh, wp, rng, ref, 0.1);
    for (std::size_t i = 0; i < wl.queries.size(); ++i) {
        CHECK(wl.class_tags[i] == QueryClass::Extraction);
    }
}

TEST_CASE("chain records know their target, realization and start depth") {
    Warehouse wh = fixture();
    WorkloadParams wp;
    wp.nb_q = 80;
    StringReferential ref(99, 100);
    SeededRng rng(21);
    Workload wl = generate_workload(wh, wp, rng, ref, 0.1);

    CHECK_FALSE(wl.chains.empty());
    for (const auto& chain : wl.chains) {
        CHECK(wl.class_tags[chain.initial_index] == QueryClass::OlapInitial);
        CHECK(chain.realized <= chain.target);
        CHECK(chain.realized <= chain.start_depth - 1);  // can only move finer
        for (int i = 0; i < chain.realized; ++i) {
            std::size_t idx = chain.initial_index + 1 + static_cast<std::size_t>(i);
            CHECK(wl.class_tags[idx] == QueryClass::DrillDown);
        }
    }
}
