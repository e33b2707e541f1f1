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
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ramp/date.hpp"
#include "ramp/error.hpp"
#include "ramp/table.hpp"

// A closed, typed filter language. Actor output and verifier predicates are
// both compiled into it and executed against a CustomerTable.
//
//   expr     := or_expr
//   or_expr  := and_expr ("or" and_expr)*
//   and_expr := unary ("and" unary)*
//   unary    := "not" unary | "(" expr ")" | pred
//   pred     := col OP literal | col contains "s" | col in [lit, ...]
//             | col within_last N days | col is null | col is not null
//   literal  := "string" | number | true | false | date "YYYY-MM-DD"
//
//   limit     := limit N [by col [asc|desc]]
//   predicate := row_count OP N | all_rows(expr)
namespace ramp::dsl {

class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t position);
    [[nodiscard]] std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class BindError : public Error {
public:
    using Error::Error;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };
std::string_view to_string(CompareOp op);
bool compare_holds(CompareOp op, int three_way);

using Literal = std::variant<std::string, double, bool, Date>;

struct FilterExpr;
using ExprPtr = std::shared_ptr<const FilterExpr>;

struct Compare {
    std::string column;
    CompareOp op = CompareOp::Eq;
    Literal value;
    friend bool operator==(const Compare&, const Compare&) = default;
};

/// Case-insensitive substring; on text_list any element may match.
struct Contains {
    std::string column;
    std::string needle;
    friend bool operator==(const Contains&, const Contains&) = default;
};

struct InList {
    std::string column;
    std::vector<Literal> values;
    friend bool operator==(const InList&, const InList&) = default;
};

/// Keeps rows whose date lies in [today - days, today].
struct WithinLastDays {
    std::string column;
    std::int64_t days = 1;
    friend bool operator==(const WithinLastDays&, const WithinLastDays&) = default;
};

struct IsNull {
    std::string column;
    bool negated = false;  // "is not null"
    friend bool operator==(const IsNull&, const IsNull&) = default;
};

struct Not {
    ExprPtr operand;
};
struct And {
    ExprPtr lhs, rhs;
};
struct Or {
    ExprPtr lhs, rhs;
};

bool operator==(const Not& a, const Not& b);
bool operator==(const And& a, const And& b);
bool operator==(const Or& a, const Or& b);

struct FilterExpr {
    using Node = std::variant<Compare, Contains, InList, WithinLastDays, IsNull, Not, And, Or>;
    Node node;

    friend bool operator==(const FilterExpr&, const FilterExpr&) = default;
};

ExprPtr make_expr(FilterExpr::Node node);
ExprPtr make_not(ExprPtr e);
ExprPtr make_and(ExprPtr a, ExprPtr b);
ExprPtr make_or(ExprPtr a, ExprPtr b);

enum class SortDirection { Asc, Desc };

struct LimitClause {
    std::int64_t n = 1;
    std::optional<std::string> order_column;
    SortDirection direction = SortDirection::Desc;
    friend bool operator==(const LimitClause&, const LimitClause&) = default;
};

struct RowCount {
    CompareOp op = CompareOp::Ge;
    std::int64_t n = 0;
    friend bool operator==(const RowCount&, const RowCount&) = default;
};

struct AllRows {
    ExprPtr expr;
    friend bool operator==(const AllRows& a, const AllRows& b) { return *a.expr == *b.expr; }
};

using Predicate = std::variant<RowCount, AllRows>;

/// One actor step: a filter expression or a limit clause.
using Statement = std::variant<ExprPtr, LimitClause>;

ExprPtr parse_filter(std::string_view text);
LimitClause parse_limit(std::string_view text);
Predicate parse_predicate(std::string_view text);
/// Parses exactly one statement; anything after it (a second expression,
/// a second line) is a ParseError.
Statement parse_statement(std::string_view text);

/// Canonical rendering; parse_filter(to_string(e)) == e.
std::string to_string(const FilterExpr& e);
std::string to_string(const LimitClause& l);
std::string to_string(const Predicate& p);
std::string to_string(const Statement& s);
std::string literal_to_string(const Literal& lit);

/// Columns referenced anywhere in the expression, in first-seen order.
std::vector<std::string> referenced_columns(const FilterExpr& e);

// ---------------------------------------------------------------------------
// Binding and evaluation

class BoundNode;

/// A filter expression resolved against a schema: every column exists and
/// every operator is legal for the column's type.
class BoundFilter {
public:
    BoundFilter() = default;
    explicit BoundFilter(std::shared_ptr<const BoundNode> root, ExprPtr source);

    [[nodiscard]] const BoundNode& root() const { return *root_; }
    [[nodiscard]] const FilterExpr& source() const { return *source_; }
    [[nodiscard]] bool uses_today() const;

private:
    std::shared_ptr<const BoundNode> root_;
    ExprPtr source_;
};

struct BoundLimit {
    LimitClause clause;
    std::optional<std::size_t> order_col;
};

struct BoundRowCount {
    RowCount pred;
};
struct BoundAllRows {
    BoundFilter filter;
};
using BoundPredicate = std::variant<BoundRowCount, BoundAllRows>;

using BoundStatement = std::variant<BoundFilter, BoundLimit>;

BoundFilter bind(const ExprPtr& expr, const CustomerTable& table);
BoundLimit bind(const LimitClause& clause, const CustomerTable& table);
BoundPredicate bind(const Predicate& pred, const CustomerTable& table);
BoundStatement bind(const Statement& stmt, const CustomerTable& table);

/// Row mask for the view; mask[i] != 0 iff row i satisfies the filter.
std::vector<char> evaluate_mask(const CustomerTable& table, const BoundFilter& filter, Date today);

/// Subset preserving row order. Null cells never satisfy a comparison.
CustomerTable apply_filter(const CustomerTable& table, const BoundFilter& filter, Date today);

/// At most n rows. With an order column: stable sort by it (nulls last), ties
/// by id ascending, then the chosen rows are returned in original row order.
CustomerTable apply_limit(const CustomerTable& table, const BoundLimit& limit);

CustomerTable apply_statement(const CustomerTable& table, const BoundStatement& stmt, Date today);

struct PredicateResult {
    bool passed = false;
    std::string detail;
};

/// RowCount compares the row count; AllRows holds iff every row satisfies the
/// filter (vacuously true on an empty audience, flagged in detail).
PredicateResult eval_predicate(const CustomerTable& table, const BoundPredicate& pred, Date today);

}  // namespace ramp::dsl
