#include <doctest.h>

#include "dweb/errors.hpp"
#include "dweb/query.hpp"

using namespace dweb;

namespace {

Query extraction_query() {
    Query q;
    q.attributes = {{"DIM1_1", "DIM1_1_DESCR1"}};
    q.tables = {"FT1", "DIM1_1"};
    q.joins = {{{"FT1", "DIM1_1_PK"}, {"DIM1_1", "DIM1_1_PK"}}};
    return q;
}

Query olap_query() {
    Query q = extraction_query();
    q.aggregates = {{"SUM", {"FT1", "FT1_MEAS1"}, "AGG1"},
                    {"SUM", {"FT1", "FT1_MEAS2"}, "AGG2"}};
    q.restrictions = {{{"DIM1_1", "DIM1_1_DESCR1"}, CompareOp::Eq,
                       std::string("DIM1_1_DESCR1_ABCDEFGHIJKLMNOPQRST")}};
    q.group_by = GroupBy{GroupOperator::Cube, {{"DIM1_1", "DIM1_1_DESCR1"}}};
    q.having = Having{std::string("AGG1"), CompareOp::Ge, 12.5};
    return q;
}

}  // namespace

TEST_CASE("extraction rendering matches the reference text exactly") {
    CHECK(render_sql(extraction_query()) ==
          "SELECT DIM1_1.DIM1_1_DESCR1 FROM FT1, DIM1_1 "
          "WHERE FT1.DIM1_1_PK = DIM1_1.DIM1_1_PK");
}

TEST_CASE("OLAP rendering emits CUBE, SUM and a trailing HAVING") {
    std::string sql = render_sql(olap_query());
    CHECK(sql.find("SUM(FT1.FT1_MEAS1) AS AGG1") != std::string::npos);
    CHECK(sql.find("GROUP BY CUBE(DIM1_1.DIM1_1_DESCR1)") != std::string::npos);
    CHECK(sql.find("HAVING AGG1 >= 12.5") != std::string::npos);
    CHECK(sql.find("HAVING") > sql.find("GROUP BY"));
    // Restrictions precede joins inside WHERE.
    CHECK(sql.find("DIM1_1.DIM1_1_DESCR1 = '") < sql.find("FT1.DIM1_1_PK = DIM1_1.DIM1_1_PK"));
}

TEST_CASE("rollup and plain group-by render their own forms") {
    Query q = olap_query();
    q.having.reset();
    q.group_by->op = GroupOperator::Rollup;
    CHECK(render_sql(q).find("GROUP BY ROLLUP(") != std::string::npos);
    q.group_by->op = GroupOperator::None;
    std::string sql = render_sql(q);
    CHECK(sql.find("GROUP BY DIM1_1.DIM1_1_DESCR1") != std::string::npos);
    CHECK(sql.find("CUBE") == std::string::npos);
}

TEST_CASE("string literals double embedded quotes") {
    Query q = extraction_query();
    q.restrictions = {{{"DIM1_1", "DIM1_1_DESCR1"}, CompareOp::Eq, std::string("A'B")}};
    CHECK(render_sql(q).find("'A''B'") != std::string::npos);
}

TEST_CASE("render and parse round-trip structurally") {
    for (const Query& q : {extraction_query(), olap_query()}) {
        auto result = parse_check(render_sql(q));
        REQUIRE(std::holds_alternative<Query>(result));
        CHECK(std::get<Query>(result) == q);
    }
}

TEST_CASE("an empty select list is a parse error") {
    auto result = parse_check("SELECT FROM FT1");
    REQUIRE(std::holds_alternative<ParseError>(result));
}

TEST_CASE("group-by without an aggregate clause is rejected") {
    auto result =
        parse_check("SELECT DIM1_1.DIM1_1_DESCR1 FROM FT1, DIM1_1 WHERE FT1.DIM1_1_PK = "
                    "DIM1_1.DIM1_1_PK GROUP BY CUBE(DIM1_1.DIM1_1_DESCR1) HAVING s >= 1.0");
    REQUIRE(std::holds_alternative<ParseError>(result));
}

TEST_CASE("having without group-by violates structure") {
    Query q = olap_query();
    q.group_by.reset();
    CHECK_THROWS_AS(render_sql(q), ValidationError);
}

TEST_CASE("unresolved table references violate structure") {
    Query q = extraction_query();
    q.attributes.push_back({"DIM9_9", "DIM9_9_DESCR1"});
    auto err = check_structure(q);
    REQUIRE(err.has_value());
    CHECK(err->rule == "unresolved-attribute");
}

TEST_CASE("a disconnected join graph violates structure") {
    Query q = extraction_query();
    q.tables.push_back("DIM2_1");  // listed but never joined
    auto err = check_structure(q);
    REQUIRE(err.has_value());
    CHECK(err->rule == "join-graph-disconnected");
}

TEST_CASE("the parser accepts attribute-to-attribute comparisons") {
    auto result = parse_check(
        "SELECT DIM1_1.DIM1_1_DESCR1 FROM FT1, DIM1_1 WHERE FT1.DIM1_1_PK = DIM1_1.DIM1_1_PK "
        "AND DIM1_1.DIM1_1_DESCR1 < DIM1_1.DIM1_1_DESCR1");
    REQUIRE(std::holds_alternative<Query>(result));
    const Query& q = std::get<Query>(result);
    REQUIRE(q.restrictions.size() == 1);
    CHECK(std::holds_alternative<QualifiedName>(q.restrictions[0].operand));
}

TEST_CASE("numeric having literals round-trip exactly") {
    Query q = olap_query();
    q.having->value = 523.3443338121;
    auto result = parse_check(render_sql(q));
    REQUIRE(std::holds_alternative<Query>(result));
    CHECK(std::get<Query>(result).having->value == q.having->value);
}

TEST_CASE("attributes may not follow aggregates in the select list") {
    auto result = parse_check(
        "SELECT SUM(FT1.FT1_MEAS1) AS AGG1, DIM1_1.DIM1_1_DESCR1 FROM FT1, DIM1_1 "
        "WHERE FT1.DIM1_1_PK = DIM1_1.DIM1_1_PK GROUP BY ROLLUP(DIM1_1.DIM1_1_DESCR1)");
    REQUIRE(std::holds_alternative<ParseError>(result));
}

TEST_CASE("trailing semicolons are accepted") {
    auto result = parse_check(render_sql(extraction_query()) + ";");
    CHECK(std::holds_alternative<Query>(result));
}

TEST_CASE("parse errors carry a position and expectation") {
    auto result = parse_check("SELECT DIM1_1.DIM1_1_DESCR1 FROM");
    REQUIRE(std::holds_alternative<ParseError>(result));
    const ParseError& err = std::get<ParseError>(result);
    CHECK(err.expected == "an identifier");
    CHECK(err.position == 32);
}
