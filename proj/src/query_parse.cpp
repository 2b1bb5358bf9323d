#include <cctype>

#include "dweb/query.hpp"
#include "dweb/text.hpp"

namespace dweb {

std::string ParseError::to_string() const {
    return "parse error at offset " + fmt_uint(position) + ": expected " + expected +
           ", found " + (found.empty() ? "end of input" : found);
}

namespace {

enum class TokenKind { Ident, Number, String, Comma, Dot, LParen, RParen, Op, Semi, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    std::size_t position = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view input) : input_(input) {}

    // Returns the token list or a lexing error.
    std::variant<std::vector<Token>, ParseError> run() {
        std::vector<Token> out;
        while (pos_ < input_.size()) {
            char c = input_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                continue;
            }
            std::size_t start = pos_;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (pos_ < input_.size() &&
                       (std::isalnum(static_cast<unsigned char>(input_[pos_])) ||
                        input_[pos_] == '_')) {
                    ++pos_;
                }
                out.push_back({TokenKind::Ident, std::string(input_.substr(start, pos_ - start)),
                               start});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '-' && pos_ + 1 < input_.size() &&
                 std::isdigit(static_cast<unsigned char>(input_[pos_ + 1])))) {
                ++pos_;
                while (pos_ < input_.size() && is_number_char(input_[pos_])) ++pos_;
                out.push_back({TokenKind::Number, std::string(input_.substr(start, pos_ - start)),
                               start});
                continue;
            }
            if (c == '\'') {
                std::string value;
                ++pos_;
                bool closed = false;
                while (pos_ < input_.size()) {
                    if (input_[pos_] == '\'') {
                        if (pos_ + 1 < input_.size() && input_[pos_ + 1] == '\'') {
                            value.push_back('\'');
                            pos_ += 2;
                            continue;
                        }
                        ++pos_;
                        closed = true;
                        break;
                    }
                    value.push_back(input_[pos_++]);
                }
                if (!closed) return ParseError{start, "closing quote", "end of input"};
                out.push_back({TokenKind::String, std::move(value), start});
                continue;
            }
            switch (c) {
                case ',': out.push_back({TokenKind::Comma, ",", start}); ++pos_; continue;
                case '.': out.push_back({TokenKind::Dot, ".", start}); ++pos_; continue;
                case '(': out.push_back({TokenKind::LParen, "(", start}); ++pos_; continue;
                case ')': out.push_back({TokenKind::RParen, ")", start}); ++pos_; continue;
                case ';': out.push_back({TokenKind::Semi, ";", start}); ++pos_; continue;
                case '=': out.push_back({TokenKind::Op, "=", start}); ++pos_; continue;
                case '<':
                case '>': {
                    std::string op(1, c);
                    ++pos_;
                    if (pos_ < input_.size() &&
                        (input_[pos_] == '=' || (c == '<' && input_[pos_] == '>'))) {
                        op.push_back(input_[pos_++]);
                    }
                    out.push_back({TokenKind::Op, op, start});
                    continue;
                }
                default:
                    return ParseError{start, "a token of the query grammar", std::string(1, c)};
            }
        }
        out.push_back({TokenKind::End, "", input_.size()});
        return out;
    }

private:
    static bool is_number_char(char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
               c == '+' || c == '-';
    }

    std::string_view input_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    std::variant<Query, ParseError> run() {
        Query q;
        if (!expect_keyword("SELECT")) return error_;
        if (!parse_select_list(q)) return error_;
        if (!expect_keyword("FROM")) return error_;
        if (!parse_table_list(q)) return error_;
        if (at_keyword("WHERE")) {
            advance();
            if (!parse_where_list(q)) return error_;
        }
        if (at_keyword("GROUP")) {
            advance();
            if (!expect_keyword("BY")) return error_;
            if (!parse_group_by(q)) return error_;
        }
        if (at_keyword("HAVING")) {
            advance();
            if (!parse_having(q)) return error_;
        }
        if (peek().kind == TokenKind::Semi) advance();
        if (peek().kind != TokenKind::End) {
            fail("end of statement");
            return error_;
        }
        if (auto err = check_structure(q)) {
            return ParseError{peek().position, "a query satisfying rule '" + err->rule + "'",
                              err->detail};
        }
        return q;
    }

private:
    const Token& peek() const { return tokens_[index_]; }
    void advance() { if (index_ + 1 < tokens_.size()) ++index_; }

    bool at_keyword(std::string_view kw) const {
        return peek().kind == TokenKind::Ident && iequals(peek().text, kw);
    }

    bool expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) return fail(std::string(kw));
        advance();
        return true;
    }

    bool fail(const std::string& expected) {
        error_ = ParseError{peek().position, expected, peek().text};
        return false;
    }

    static bool is_clause_keyword(const Token& t) {
        return t.kind == TokenKind::Ident &&
               (iequals(t.text, "FROM") || iequals(t.text, "WHERE") || iequals(t.text, "GROUP") ||
                iequals(t.text, "HAVING") || iequals(t.text, "AND") || iequals(t.text, "BY") ||
                iequals(t.text, "AS") || iequals(t.text, "SELECT"));
    }

    bool parse_identifier(std::string& out) {
        if (peek().kind != TokenKind::Ident || is_clause_keyword(peek())) {
            return fail("an identifier");
        }
        out = peek().text;
        advance();
        return true;
    }

    // IDENT or IDENT.IDENT; unqualified names get an empty table part.
    bool parse_name(QualifiedName& out) {
        std::string first;
        if (!parse_identifier(first)) return false;
        if (peek().kind == TokenKind::Dot) {
            advance();
            std::string second;
            if (!parse_identifier(second)) return false;
            out = {std::move(first), std::move(second)};
        } else {
            out = {"", std::move(first)};
        }
        return true;
    }

    bool parse_select_list(Query& q) {
        bool saw_aggregate = false;
        for (;;) {
            if (peek().kind != TokenKind::Ident || is_clause_keyword(peek())) {
                return fail("an attribute or aggregate");
            }
            // Function call when the identifier is directly followed by '('.
            if (tokens_[index_ + 1].kind == TokenKind::LParen) {
                Aggregate agg;
                agg.function = peek().text;
                advance();
                advance();  // '('
                if (!parse_name(agg.measure)) return false;
                if (peek().kind != TokenKind::RParen) return fail(")");
                advance();
                if (!expect_keyword("AS")) return false;
                if (!parse_identifier(agg.alias)) return false;
                q.aggregates.push_back(std::move(agg));
                saw_aggregate = true;
            } else {
                if (saw_aggregate) {
                    return fail("an aggregate (attributes precede aggregates)");
                }
                QualifiedName name;
                if (!parse_name(name)) return false;
                q.attributes.push_back(std::move(name));
            }
            if (peek().kind != TokenKind::Comma) break;
            advance();
        }
        return true;
    }

    bool parse_table_list(Query& q) {
        for (;;) {
            std::string table;
            if (!parse_identifier(table)) return false;
            q.tables.push_back(std::move(table));
            if (peek().kind != TokenKind::Comma) break;
            advance();
        }
        return true;
    }

    bool parse_comparison_op(CompareOp& out) {
        if (peek().kind != TokenKind::Op) return fail("a comparison operator");
        const std::string& t = peek().text;
        if (t == "=") out = CompareOp::Eq;
        else if (t == "<>") out = CompareOp::Ne;
        else if (t == "<") out = CompareOp::Lt;
        else if (t == "<=") out = CompareOp::Le;
        else if (t == ">") out = CompareOp::Gt;
        else if (t == ">=") out = CompareOp::Ge;
        else return fail("a comparison operator");
        advance();
        return true;
    }

    bool parse_where_list(Query& q) {
        for (;;) {
            QualifiedName lhs;
            if (!parse_name(lhs)) return false;
            CompareOp op;
            if (!parse_comparison_op(op)) return false;
            if (peek().kind == TokenKind::Number) {
                auto value = parse_real(peek().text);
                if (!value) return fail("a numeric literal");
                advance();
                q.restrictions.push_back({std::move(lhs), op, *value});
            } else if (peek().kind == TokenKind::String) {
                std::string value = peek().text;
                advance();
                q.restrictions.push_back({std::move(lhs), op, std::move(value)});
            } else if (peek().kind == TokenKind::Ident && !is_clause_keyword(peek())) {
                QualifiedName rhs;
                if (!parse_name(rhs)) return false;
                if (op == CompareOp::Eq) {
                    q.joins.push_back({std::move(lhs), std::move(rhs)});
                } else {
                    q.restrictions.push_back({std::move(lhs), op, std::move(rhs)});
                }
            } else {
                return fail("a literal or attribute operand");
            }
            if (!at_keyword("AND")) break;
            advance();
        }
        return true;
    }

    bool parse_attribute_list(std::vector<QualifiedName>& out) {
        for (;;) {
            QualifiedName name;
            if (!parse_name(name)) return false;
            out.push_back(std::move(name));
            if (peek().kind != TokenKind::Comma) break;
            advance();
        }
        return true;
    }

    bool parse_group_by(Query& q) {
        GroupBy gb;
        if (at_keyword("CUBE") || at_keyword("ROLLUP")) {
            gb.op = at_keyword("CUBE") ? GroupOperator::Cube : GroupOperator::Rollup;
            advance();
            if (peek().kind != TokenKind::LParen) return fail("(");
            advance();
            if (!parse_attribute_list(gb.attributes)) return false;
            if (peek().kind != TokenKind::RParen) return fail(")");
            advance();
        } else {
            gb.op = GroupOperator::None;
            if (!parse_attribute_list(gb.attributes)) return false;
        }
        q.group_by = std::move(gb);
        return true;
    }

    bool parse_having(Query& q) {
        Having h;
        if (peek().kind != TokenKind::Ident || is_clause_keyword(peek())) {
            return fail("an alias or aggregate call");
        }
        if (tokens_[index_ + 1].kind == TokenKind::LParen) {
            AggregateCall call;
            call.function = peek().text;
            advance();
            advance();  // '('
            if (!parse_name(call.attribute)) return false;
            if (peek().kind != TokenKind::RParen) return fail(")");
            advance();
            h.target = std::move(call);
        } else {
            std::string alias;
            if (!parse_identifier(alias)) return false;
            h.target = std::move(alias);
        }
        if (!parse_comparison_op(h.op)) return false;
        if (peek().kind == TokenKind::Number) {
            auto value = parse_real(peek().text);
            if (!value) return fail("a numeric literal");
            advance();
            h.value = *value;
        } else if (peek().kind == TokenKind::String) {
            h.value = peek().text;
            advance();
        } else {
            return fail("a literal");
        }
        q.having = std::move(h);
        return true;
    }

    std::vector<Token> tokens_;
    std::size_t index_ = 0;
    ParseError error_;
};

}  // namespace

std::variant<Query, ParseError> parse_check(std::string_view sql) {
    auto lexed = Lexer(sql).run();
    if (ParseError* err = std::get_if<ParseError>(&lexed)) return *err;
    return Parser(std::move(std::get<std::vector<Token>>(lexed))).run();
}

}  // namespace dweb
