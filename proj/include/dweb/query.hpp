#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dweb {

struct QualifiedName {
    std::string table;
    std::string column;

    std::string to_string() const { return table + "." + column; }
    bool operator==(const QualifiedName&) const = default;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };
std::string_view to_sql(CompareOp op);

struct Aggregate {
    std::string function;  // the generator emits SUM only
    QualifiedName measure;
    std::string alias;

    bool operator==(const Aggregate&) const = default;
};

// Restriction operand: a literal (the generator emits string literals) or a
// second attribute; the parser accepts the grammar's broader operand form.
using Operand = std::variant<double, std::string, QualifiedName>;

struct Restriction {
    QualifiedName attribute;
    CompareOp op = CompareOp::Eq;
    Operand operand;

    bool operator==(const Restriction&) const = default;
};

struct JoinEquality {
    QualifiedName left;
    QualifiedName right;

    bool operator==(const JoinEquality&) const = default;
};

enum class GroupOperator { None, Cube, Rollup };

struct GroupBy {
    GroupOperator op = GroupOperator::None;
    std::vector<QualifiedName> attributes;

    bool operator==(const GroupBy&) const = default;
};

struct AggregateCall {
    std::string function;
    QualifiedName attribute;

    bool operator==(const AggregateCall&) const = default;
};

struct Having {
    std::variant<std::string, AggregateCall> target;  // alias or aggregate call
    CompareOp op = CompareOp::Ge;
    std::variant<double, std::string> value;

    bool operator==(const Having&) const = default;
};

struct Query {
    std::vector<QualifiedName> attributes;   // attribute clause
    std::vector<Aggregate> aggregates;       // aggregate clause
    std::vector<std::string> tables;         // table clause; tables[0] is the fact table
    std::vector<Restriction> restrictions;   // condition clause
    std::vector<JoinEquality> joins;         // join clause
    std::optional<GroupBy> group_by;
    std::optional<Having> having;

    bool operator==(const Query&) const = default;
};

struct StructuralError {
    std::string rule;
    std::string detail;
};

// Checks the query invariants: non-empty select, group-by/having/aggregate
// dependencies, fully qualified references against the table clause, and a
// join graph connecting every table to the first one.
std::optional<StructuralError> check_structure(const Query& q);

// Renders `SELECT ... FROM ... [WHERE ...] [GROUP BY [CUBE|ROLLUP] ...]
// [HAVING ...]` with deterministic formatting: uppercase keywords, single
// spaces, restrictions before joins, string literals single-quoted with quote
// doubling. Throws ValidationError naming the violated rule on bad structure.
std::string render_sql(const Query& q);

struct ParseError {
    std::size_t position = 0;
    std::string expected;
    std::string found;

    std::string to_string() const;
};

// Parses exactly the supported grammar subset and validates structure.
// parse_check(render_sql(q)) is structurally equal to q for every valid q.
std::variant<Query, ParseError> parse_check(std::string_view sql);

}  // namespace dweb
