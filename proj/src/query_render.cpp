#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "dweb/errors.hpp"
#include "dweb/query.hpp"
#include "dweb/text.hpp"

namespace dweb {

std::string_view to_sql(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "<>";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
    }
    return "?";
}

namespace {

std::string quote_string(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('\'');
    for (char c : s) {
        if (c == '\'') out.push_back('\'');
        out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

std::string operand_sql(const Operand& operand) {
    if (const double* num = std::get_if<double>(&operand)) return fmt_real(*num);
    if (const std::string* str = std::get_if<std::string>(&operand)) return quote_string(*str);
    return std::get<QualifiedName>(operand).to_string();
}

}  // namespace

std::optional<StructuralError> check_structure(const Query& q) {
    if (q.attributes.empty() && q.aggregates.empty()) {
        return StructuralError{"select-nonempty",
                               "a query needs an attribute clause or an aggregate clause"};
    }
    if (q.tables.empty()) {
        return StructuralError{"table-clause-nonempty", "the table clause is empty"};
    }
    if (q.having && !q.group_by) {
        return StructuralError{"having-requires-group-by",
                               "HAVING is only valid after GROUP BY"};
    }
    if (q.group_by && q.aggregates.empty()) {
        return StructuralError{"group-by-requires-aggregate",
                               "GROUP BY without an aggregate clause"};
    }

    std::unordered_set<std::string> tables(q.tables.begin(), q.tables.end());
    auto resolved = [&](const QualifiedName& name) { return tables.contains(name.table); };
    for (const auto& a : q.attributes) {
        if (!resolved(a)) {
            return StructuralError{"unresolved-attribute",
                                   a.to_string() + " references a table not in FROM"};
        }
    }
    for (const auto& agg : q.aggregates) {
        if (!resolved(agg.measure)) {
            return StructuralError{"unresolved-measure",
                                   agg.measure.to_string() + " references a table not in FROM"};
        }
    }
    for (const auto& r : q.restrictions) {
        if (!resolved(r.attribute)) {
            return StructuralError{"unresolved-restriction",
                                   r.attribute.to_string() + " references a table not in FROM"};
        }
        if (const QualifiedName* rhs = std::get_if<QualifiedName>(&r.operand)) {
            if (!resolved(*rhs)) {
                return StructuralError{"unresolved-restriction",
                                       rhs->to_string() + " references a table not in FROM"};
            }
        }
    }
    for (const auto& j : q.joins) {
        if (!resolved(j.left) || !resolved(j.right)) {
            return StructuralError{"unresolved-join", j.left.to_string() + " = " +
                                                          j.right.to_string() +
                                                          " references a table not in FROM"};
        }
    }
    if (q.group_by) {
        for (const auto& a : q.group_by->attributes) {
            if (!resolved(a)) {
                return StructuralError{"unresolved-group-by",
                                       a.to_string() + " references a table not in FROM"};
            }
        }
    }
    if (q.having) {
        if (const std::string* alias = std::get_if<std::string>(&q.having->target)) {
            bool found = std::any_of(q.aggregates.begin(), q.aggregates.end(),
                                     [&](const Aggregate& a) { return a.alias == *alias; });
            if (!found) {
                return StructuralError{"having-unknown-alias",
                                       "HAVING references alias " + *alias +
                                           " which no aggregate defines"};
            }
        } else {
            const auto& call = std::get<AggregateCall>(q.having->target);
            if (!resolved(call.attribute)) {
                return StructuralError{"unresolved-having",
                                       call.attribute.to_string() +
                                           " references a table not in FROM"};
            }
        }
    }

    // Every table must be reachable from tables[0] through join equalities.
    if (q.tables.size() > 1) {
        std::unordered_map<std::string, std::vector<std::string>> adjacency;
        for (const auto& j : q.joins) {
            adjacency[j.left.table].push_back(j.right.table);
            adjacency[j.right.table].push_back(j.left.table);
        }
        std::unordered_set<std::string> reached{q.tables.front()};
        std::vector<std::string> stack{q.tables.front()};
        while (!stack.empty()) {
            std::string t = std::move(stack.back());
            stack.pop_back();
            for (const auto& next : adjacency[t]) {
                if (reached.insert(next).second) stack.push_back(next);
            }
        }
        for (const auto& t : q.tables) {
            if (!reached.contains(t)) {
                return StructuralError{"join-graph-disconnected",
                                       "table " + t + " is not joined to " + q.tables.front()};
            }
        }
    }
    return std::nullopt;
}

std::string render_sql(const Query& q) {
    if (auto err = check_structure(q)) {
        throw ValidationError("render_sql: " + err->rule + ": " + err->detail);
    }

    std::string sql = "SELECT ";
    bool first = true;
    for (const auto& a : q.attributes) {
        if (!first) sql += ", ";
        sql += a.to_string();
        first = false;
    }
    for (const auto& agg : q.aggregates) {
        if (!first) sql += ", ";
        sql += agg.function + "(" + agg.measure.to_string() + ") AS " + agg.alias;
        first = false;
    }

    sql += " FROM ";
    first = true;
    for (const auto& t : q.tables) {
        if (!first) sql += ", ";
        sql += t;
        first = false;
    }

    if (!q.restrictions.empty() || !q.joins.empty()) {
        sql += " WHERE ";
        first = true;
        for (const auto& r : q.restrictions) {
            if (!first) sql += " AND ";
            sql += r.attribute.to_string();
            sql += ' ';
            sql += to_sql(r.op);
            sql += ' ';
            sql += operand_sql(r.operand);
            first = false;
        }
        for (const auto& j : q.joins) {
            if (!first) sql += " AND ";
            sql += j.left.to_string() + " = " + j.right.to_string();
            first = false;
        }
    }

    if (q.group_by) {
        sql += " GROUP BY ";
        std::string attrs;
        for (std::size_t i = 0; i < q.group_by->attributes.size(); ++i) {
            if (i) attrs += ", ";
            attrs += q.group_by->attributes[i].to_string();
        }
        switch (q.group_by->op) {
            case GroupOperator::None: sql += attrs; break;
            case GroupOperator::Cube: sql += "CUBE(" + attrs + ")"; break;
            case GroupOperator::Rollup: sql += "ROLLUP(" + attrs + ")"; break;
        }
    }

    if (q.having) {
        sql += " HAVING ";
        if (const std::string* alias = std::get_if<std::string>(&q.having->target)) {
            sql += *alias;
        } else {
            const auto& call = std::get<AggregateCall>(q.having->target);
            sql += call.function + "(" + call.attribute.to_string() + ")";
        }
        sql += ' ';
        sql += to_sql(q.having->op);
        sql += ' ';
        if (const double* num = std::get_if<double>(&q.having->value)) {
            sql += fmt_real(*num);
        } else {
            sql += quote_string(std::get<std::string>(q.having->value));
        }
    }
    return sql;
}

}  // namespace dweb
