#include <doctest.h>

#include <stdexcept>

#include "dweb/model.hpp"
#include "dweb/schema_generator.hpp"

using namespace dweb;

namespace {

// Two-level dimension (entry 4 rows -> coarser 2 rows) and a fact over it,
// built by hand so the integrity checker is exercised independently of the
// generator.
Warehouse tiny_warehouse() {
    Warehouse wh;

    Dimension dim;
    dim.index = 1;

    HierarchyLevel entry;
    entry.table_name = "DIM1_1";
    entry.depth = 1;
    entry.has_coarser = true;
    entry.intention = {{"DIM1_1_PK", AttributeKind::PrimaryKey, {}},
                       {"DIM1_1_DESCR1", AttributeKind::Descriptor, {}},
                       {"DIM1_2_PK", AttributeKind::ForeignKey, "DIM1_2"}};
    for (std::int32_t pk = 1; pk <= 4; ++pk) {
        entry.extension.push_back(
            {pk, std::string("DIM1_1_DESCR1_ABCDEFGHIJKLMNOPQRST"),
             static_cast<std::int32_t>(pk <= 2 ? 1 : 2)});
    }

    HierarchyLevel coarse;
    coarse.table_name = "DIM1_2";
    coarse.depth = 2;
    coarse.has_coarser = false;
    coarse.intention = {{"DIM1_2_PK", AttributeKind::PrimaryKey, {}},
                        {"DIM1_2_DESCR1", AttributeKind::Descriptor, {}}};
    for (std::int32_t pk = 1; pk <= 2; ++pk) {
        coarse.extension.push_back({pk, std::string("DIM1_2_DESCR1_ABCDEFGHIJKLMNOPQRST")});
    }

    dim.levels = {entry, coarse};
    wh.dimensions.push_back(dim);

    FactTable ft;
    ft.table_name = "FT1";
    ft.dimension_indexes = {1};
    ft.intention = {{"DIM1_1_PK", AttributeKind::ForeignKey, "DIM1_1"},
                    {"FT1_MEAS1", AttributeKind::Measure, {}}};
    for (std::int32_t k = 1; k <= 4; ++k) {
        ft.extension.push_back({k, 1.5f});
    }
    wh.fact_tables.push_back(ft);
    return wh;
}

}  // namespace

TEST_CASE("level_at walks coarser links by depth") {
    Warehouse wh = tiny_warehouse();
    const Dimension& dim = wh.dimension(1);
    CHECK(level_at(dim, 1).table_name == "DIM1_1");
    CHECK(&level_at(dim, 1) == &dim.entry_level());
    CHECK(level_at(dim, 2).table_name == "DIM1_2");
    CHECK_FALSE(level_at(dim, 2).has_coarser);
    CHECK_THROWS_AS(level_at(dim, 3), std::out_of_range);
    CHECK_THROWS_AS(level_at(dim, 0), std::out_of_range);
    try {
        level_at(dim, 3);
    } catch (const std::out_of_range& e) {
        std::string msg = e.what();
        CHECK(msg.find("DIM1") != std::string::npos);
        CHECK(msg.find("3") != std::string::npos);
    }
}

TEST_CASE("a consistent warehouse has zero integrity violations") {
    CHECK(check_referential_integrity(tiny_warehouse()).empty());
}

TEST_CASE("one dangling fact key yields exactly one violation") {
    Warehouse wh = tiny_warehouse();
    wh.fact_tables[0].extension[2][0] = std::int32_t{5};  // max PK is 4
    auto violations = check_referential_integrity(wh);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].table == "FT1");
    CHECK(violations[0].attribute == "DIM1_1_PK");
    CHECK(violations[0].tuple_index == 2);
    CHECK(violations[0].value == 5);
}

TEST_CASE("two dangling level keys yield exactly two violations") {
    Warehouse wh = tiny_warehouse();
    wh.dimensions[0].levels[0].extension[0][2] = std::int32_t{9};
    wh.dimensions[0].levels[0].extension[3][2] = std::int32_t{7};
    auto violations = check_referential_integrity(wh);
    REQUIRE(violations.size() == 2);
    CHECK(violations[0].table == "DIM1_1");
    CHECK(violations[1].table == "DIM1_1");
    CHECK(violations[0].attribute == "DIM1_2_PK");
}

TEST_CASE("generated primary keys are the sequence 1..cardinality") {
    LowLevelParams low;
    low.nb_ft = 1;
    low.tot_nb_dim = 2;
    low.nb_dim = {2};
    low.nb_meas = {1};
    low.density = {0.5};
    low.nb_levels = {2, 1};
    low.nb_att = {{1, 1}, {2}};
    low.hhlevel_size = {3, 4};
    low.dim_sfactor = {2.0, 1.0};
    auto [wh, size] = generate_warehouse(low, 17);

    for (const auto& dim : wh.dimensions) {
        for (const auto& level : dim.levels) {
            for (std::size_t row = 0; row < level.extension.size(); ++row) {
                CHECK(std::get<std::int32_t>(level.extension[row][0]) ==
                      static_cast<std::int32_t>(row + 1));
            }
        }
    }
}
