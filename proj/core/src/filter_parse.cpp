/*
 * Copyright (c) 2026, The RAMP Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include "ramp/filter_dsl.hpp"
#include "ramp/text.hpp"

namespace ramp::dsl {

ParseError::ParseError(std::string message, std::size_t position)
    : Error("syntax error at position " + std::to_string(position) + ": " + message), position_(position) {}

std::string_view to_string(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
    }
    return "=";
}

bool compare_holds(CompareOp op, int c) {
    switch (op) {
        case CompareOp::Eq: return c == 0;
        case CompareOp::Ne: return c != 0;
        case CompareOp::Lt: return c < 0;
        case CompareOp::Le: return c <= 0;
        case CompareOp::Gt: return c > 0;
        case CompareOp::Ge: return c >= 0;
    }
    return false;
}

bool operator==(const Not& a, const Not& b) { return *a.operand == *b.operand; }
bool operator==(const And& a, const And& b) { return *a.lhs == *b.lhs && *a.rhs == *b.rhs; }
bool operator==(const Or& a, const Or& b) { return *a.lhs == *b.lhs && *a.rhs == *b.rhs; }

ExprPtr make_expr(FilterExpr::Node node) { return std::make_shared<const FilterExpr>(FilterExpr{std::move(node)}); }
ExprPtr make_not(ExprPtr e) { return make_expr(Not{std::move(e)}); }
ExprPtr make_and(ExprPtr a, ExprPtr b) { return make_expr(And{std::move(a), std::move(b)}); }
ExprPtr make_or(ExprPtr a, ExprPtr b) { return make_expr(Or{std::move(a), std::move(b)}); }

namespace {

enum class Tok { Ident, String, Number, LParen, RParen, LBracket, RBracket, Comma, Op, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws();
            if (i_ >= src_.size()) {
                out.push_back({Tok::End, {}, i_});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    void skip_ws() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    }

    Token next() {
        const std::size_t start = i_;
        const char c = src_[i_];
        switch (c) {
            case '(': ++i_; return {Tok::LParen, "(", start};
            case ')': ++i_; return {Tok::RParen, ")", start};
            case '[': ++i_; return {Tok::LBracket, "[", start};
            case ']': ++i_; return {Tok::RBracket, "]", start};
            case ',': ++i_; return {Tok::Comma, ",", start};
            case '"': return string_lit();
            case '=':
                ++i_;
                if (i_ < src_.size() && src_[i_] == '=') ++i_;
                return {Tok::Op, "=", start};
            case '!':
                if (i_ + 1 < src_.size() && src_[i_ + 1] == '=') {
                    i_ += 2;
                    return {Tok::Op, "!=", start};
                }
                throw ParseError("unexpected '!'", start);
            case '<':
            case '>': {
                ++i_;
                std::string op(1, c);
                if (i_ < src_.size() && src_[i_] == '=') {
                    op.push_back('=');
                    ++i_;
                } else if (c == '<' && i_ < src_.size() && src_[i_] == '>') {
                    ++i_;
                    return {Tok::Op, "!=", start};
                }
                return {Tok::Op, op, start};
            }
            default: break;
        }
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
                ++i_;
            }
            return {Tok::Ident, std::string(src_.substr(start, i_ - start)), start};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

    Token string_lit() {
        const std::size_t start = i_++;
        std::string out;
        while (i_ < src_.size()) {
            char c = src_[i_++];
            if (c == '"') return {Tok::String, out, start};
            if (c == '\\') {
                if (i_ >= src_.size()) break;
                char e = src_[i_++];
                if (e == 'n') out.push_back('\n');
                else if (e == 't') out.push_back('\t');
                else out.push_back(e);
                continue;
            }
            out.push_back(c);
        }
        throw ParseError("unterminated string literal", start);
    }

    Token number() {
        const std::size_t start = i_;
        if (src_[i_] == '-') ++i_;
        auto digits = [&] {
            std::size_t n = 0;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
                ++i_;
                ++n;
            }
            return n;
        };
        if (digits() == 0) throw ParseError("expected digits", i_);
        if (i_ < src_.size() && src_[i_] == '.') {
            ++i_;
            if (digits() == 0) throw ParseError("expected digits after decimal point", i_);
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            ++i_;
            if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
            if (digits() == 0) throw ParseError("expected exponent digits", i_);
        }
        return {Tok::Number, std::string(src_.substr(start, i_ - start)), start};
    }

    std::string_view src_;
    std::size_t i_ = 0;
};

bool is_keyword(std::string_view s) {
    static const std::unordered_set<std::string> kw = {
        "and",  "or",   "not",  "contains", "in",   "within_last", "days", "day", "is",
        "null", "true", "false", "date",   "limit", "by",          "asc",  "desc"};
    return kw.contains(text::to_lower(s));
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src), toks_(Lexer(src).run()) {}

    ExprPtr expr() { return or_expr(); }

    LimitClause limit() {
        expect_kw("limit");
        LimitClause out;
        out.n = positive_int("limit size");
        if (accept_kw("by")) {
            out.order_column = column();
            if (accept_kw("asc")) out.direction = SortDirection::Asc;
            else if (accept_kw("desc")) out.direction = SortDirection::Desc;
        }
        return out;
    }

    Predicate predicate() {
        if (peek_kw("row_count")) {
            ++p_;
            if (cur().kind != Tok::Op) throw ParseError("expected comparison operator after row_count", cur().pos);
            auto op = to_op(cur().text);
            ++p_;
            const auto pos = cur().pos;
            auto n = integer("row count");
            if (n < 0) throw ParseError("row count must be non-negative", pos);
            return RowCount{op, n};
        }
        if (peek_kw("all_rows")) {
            ++p_;
            expect(Tok::LParen, "'(' after all_rows");
            auto e = expr();
            expect(Tok::RParen, "')' closing all_rows");
            return AllRows{std::move(e)};
        }
        throw ParseError("expected 'row_count' or 'all_rows'", cur().pos);
    }

    bool starts_with_kw(std::string_view kw) const { return peek_kw(kw); }

    void finish() {
        if (cur().kind != Tok::End) {
            throw ParseError("unexpected trailing input '" + cur().text + "'", cur().pos);
        }
    }

    bool at_start_is_empty() const { return toks_.front().kind == Tok::End; }

private:
    const Token& cur() const { return toks_[p_]; }

    bool peek_kw(std::string_view kw) const { return cur().kind == Tok::Ident && text::iequals(cur().text, kw); }

    bool accept_kw(std::string_view kw) {
        if (!peek_kw(kw)) return false;
        ++p_;
        return true;
    }

    void expect_kw(std::string_view kw) {
        if (!accept_kw(kw)) throw ParseError("expected '" + std::string(kw) + "'", cur().pos);
    }

    void expect(Tok kind, std::string_view what) {
        if (cur().kind != kind) throw ParseError("expected " + std::string(what), cur().pos);
        ++p_;
    }

    static CompareOp to_op(const std::string& s) {
        if (s == "=") return CompareOp::Eq;
        if (s == "!=") return CompareOp::Ne;
        if (s == "<") return CompareOp::Lt;
        if (s == "<=") return CompareOp::Le;
        if (s == ">") return CompareOp::Gt;
        return CompareOp::Ge;
    }

    std::int64_t integer(std::string_view what) {
        if (cur().kind != Tok::Number) throw ParseError("expected integer " + std::string(what), cur().pos);
        const auto& t = cur().text;
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size()) {
            throw ParseError("expected integer " + std::string(what) + ", got '" + t + "'", cur().pos);
        }
        ++p_;
        return v;
    }

    std::int64_t positive_int(std::string_view what) {
        const auto pos = cur().pos;
        auto v = integer(what);
        if (v <= 0) throw ParseError(std::string(what) + " must be a positive integer", pos);
        return v;
    }

    std::string column() {
        if (cur().kind != Tok::Ident || is_keyword(cur().text)) {
            throw ParseError(cur().kind == Tok::End ? "expected column name, found end of input"
                                                    : "expected column name, found '" + cur().text + "'",
                             cur().pos);
        }
        return toks_[p_++].text;
    }

    ExprPtr or_expr() {
        auto lhs = and_expr();
        while (accept_kw("or")) lhs = make_or(std::move(lhs), and_expr());
        return lhs;
    }

    ExprPtr and_expr() {
        auto lhs = unary();
        while (accept_kw("and")) lhs = make_and(std::move(lhs), unary());
        return lhs;
    }

    ExprPtr unary() {
        if (accept_kw("not")) return make_not(unary());
        if (cur().kind == Tok::LParen) {
            ++p_;
            auto e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        return pred();
    }

    Literal literal() {
        const auto& t = cur();
        switch (t.kind) {
            case Tok::String: ++p_; return t.text;
            case Tok::Number: {
                double v = 0;
                auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (ec != std::errc{} || !std::isfinite(v)) throw ParseError("number out of range", t.pos);
                ++p_;
                return v == 0.0 ? 0.0 : v;
            }
            case Tok::Ident:
                if (text::iequals(t.text, "true")) {
                    ++p_;
                    return true;
                }
                if (text::iequals(t.text, "false")) {
                    ++p_;
                    return false;
                }
                if (text::iequals(t.text, "date")) {
                    ++p_;
                    if (cur().kind != Tok::String) throw ParseError("expected quoted date after 'date'", cur().pos);
                    auto d = Date::parse(cur().text);
                    if (!d) throw ParseError("invalid date '" + cur().text + "' (want YYYY-MM-DD)", cur().pos);
                    ++p_;
                    return *d;
                }
                break;
            default: break;
        }
        throw ParseError(t.kind == Tok::End ? "expected literal, found end of input"
                                            : "expected literal, found '" + t.text + "'",
                         t.pos);
    }

    ExprPtr pred() {
        auto col = column();
        const auto& t = cur();
        if (t.kind == Tok::Op) {
            auto op = to_op(t.text);
            ++p_;
            return make_expr(Compare{std::move(col), op, literal()});
        }
        if (accept_kw("contains")) {
            if (cur().kind != Tok::String) throw ParseError("expected quoted string after 'contains'", cur().pos);
            std::string needle = toks_[p_++].text;
            return make_expr(Contains{std::move(col), std::move(needle)});
        }
        if (accept_kw("in")) {
            expect(Tok::LBracket, "'[' after 'in'");
            std::vector<Literal> values;
            values.push_back(literal());
            while (cur().kind == Tok::Comma) {
                ++p_;
                values.push_back(literal());
            }
            expect(Tok::RBracket, "']' closing list");
            return make_expr(InList{std::move(col), std::move(values)});
        }
        if (accept_kw("within_last")) {
            auto n = positive_int("day count");
            if (!accept_kw("days") && !accept_kw("day")) throw ParseError("expected 'days'", cur().pos);
            return make_expr(WithinLastDays{std::move(col), n});
        }
        if (accept_kw("is")) {
            bool negated = accept_kw("not");
            expect_kw("null");
            return make_expr(IsNull{std::move(col), negated});
        }
        throw ParseError(t.kind == Tok::End ? "expected operator after column '" + col + "', found end of input"
                                            : "expected operator after column '" + col + "', found '" + t.text + "'",
                         t.pos);
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t p_ = 0;
};

void require_nonempty(std::string_view text) {
    if (text::trim(text).empty()) throw ParseError("empty input", 0);
}

}  // namespace

ExprPtr parse_filter(std::string_view text) {
    require_nonempty(text);
    Parser p(text);
    auto e = p.expr();
    p.finish();
    return e;
}

LimitClause parse_limit(std::string_view text) {
    require_nonempty(text);
    Parser p(text);
    auto l = p.limit();
    p.finish();
    return l;
}

Predicate parse_predicate(std::string_view text) {
    require_nonempty(text);
    Parser p(text);
    auto pr = p.predicate();
    p.finish();
    return pr;
}

Statement parse_statement(std::string_view text) {
    require_nonempty(text);
    Parser p(text);
    if (p.starts_with_kw("limit")) {
        auto l = p.limit();
        p.finish();
        return l;
    }
    auto e = p.expr();
    p.finish();
    return e;
}

// ---------------------------------------------------------------------------
// Printing

std::string literal_to_string(const Literal& lit) {
    struct V {
        std::string operator()(const std::string& s) const {
            std::string out = "\"";
            for (char c : s) {
                if (c == '"' || c == '\\') out.push_back('\\');
                if (c == '\n') {
                    out += "\\n";
                    continue;
                }
                if (c == '\t') {
                    out += "\\t";
                    continue;
                }
                out.push_back(c);
            }
            return out + "\"";
        }
        std::string operator()(double d) const { return text::format_number(d); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(Date d) const { return "date \"" + d.to_string() + "\""; }
    };
    return std::visit(V{}, lit);
}

namespace {

bool is_compound(const FilterExpr& e) {
    return std::holds_alternative<And>(e.node) || std::holds_alternative<Or>(e.node);
}

std::string print_child(const FilterExpr& e) {
    auto s = to_string(e);
    return is_compound(e) ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const FilterExpr& e) {
    struct V {
        std::string operator()(const Compare& c) const {
            return c.column + " " + std::string(to_string(c.op)) + " " + literal_to_string(c.value);
        }
        std::string operator()(const Contains& c) const {
            return c.column + " contains " + literal_to_string(Literal{c.needle});
        }
        std::string operator()(const InList& c) const {
            std::string out = c.column + " in [";
            for (std::size_t i = 0; i < c.values.size(); ++i) {
                if (i) out += ", ";
                out += literal_to_string(c.values[i]);
            }
            return out + "]";
        }
        std::string operator()(const WithinLastDays& w) const {
            return w.column + " within_last " + std::to_string(w.days) + " days";
        }
        std::string operator()(const IsNull& n) const {
            return n.column + (n.negated ? " is not null" : " is null");
        }
        std::string operator()(const Not& n) const { return "not " + print_child(*n.operand); }
        std::string operator()(const And& a) const { return print_child(*a.lhs) + " and " + print_child(*a.rhs); }
        std::string operator()(const Or& o) const { return print_child(*o.lhs) + " or " + print_child(*o.rhs); }
    };
    return std::visit(V{}, e.node);
}

std::string to_string(const LimitClause& l) {
    std::string out = "limit " + std::to_string(l.n);
    if (l.order_column) {
        out += " by " + *l.order_column + (l.direction == SortDirection::Asc ? " asc" : " desc");
    }
    return out;
}

std::string to_string(const Predicate& p) {
    if (const auto* rc = std::get_if<RowCount>(&p)) {
        return "row_count " + std::string(to_string(rc->op)) + " " + std::to_string(rc->n);
    }
    return "all_rows(" + to_string(*std::get<AllRows>(p).expr) + ")";
}

std::string to_string(const Statement& s) {
    if (const auto* e = std::get_if<ExprPtr>(&s)) return to_string(**e);
    return to_string(std::get<LimitClause>(s));
}

std::vector<std::string> referenced_columns(const FilterExpr& e) {
    std::vector<std::string> out;
    auto add = [&](const std::string& c) {
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    };
    auto walk = [&](auto&& self, const FilterExpr& x) -> void {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Not>) {
                    self(self, *n.operand);
                } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
                    self(self, *n.lhs);
                    self(self, *n.rhs);
                } else {
                    add(n.column);
                }
            },
            x.node);
    };
    walk(walk, e);
    return out;
}

}  // namespace ramp::dsl
