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
#include <algorithm>
#include <numeric>

#include "ramp/filter_dsl.hpp"
#include "ramp/text.hpp"

namespace ramp::dsl {

// Bound nodes carry resolved column indices and literals already converted
// to the column's representation.
struct BoundCompare {
    std::size_t col;
    ColumnType ctype;
    CompareOp op;
    Literal value;
};
struct BoundContains {
    std::size_t col;
    ColumnType ctype;
    std::string needle_lower;
};
struct BoundInList {
    std::size_t col;
    ColumnType ctype;
    std::vector<Literal> values;
};
struct BoundWithin {
    std::size_t col;
    std::int64_t days;
};
struct BoundIsNull {
    std::size_t col;
    bool negated;
};
struct BoundNot {
    std::shared_ptr<const BoundNode> operand;
};
struct BoundAnd {
    std::shared_ptr<const BoundNode> lhs, rhs;
};
struct BoundOr {
    std::shared_ptr<const BoundNode> lhs, rhs;
};

class BoundNode {
public:
    using Node = std::variant<BoundCompare, BoundContains, BoundInList, BoundWithin, BoundIsNull, BoundNot, BoundAnd,
                              BoundOr>;
    explicit BoundNode(Node n) : node(std::move(n)) {}
    Node node;
};

BoundFilter::BoundFilter(std::shared_ptr<const BoundNode> root, ExprPtr source)
    : root_(std::move(root)), source_(std::move(source)) {}

namespace {

bool node_uses_today(const BoundNode& n) {
    return std::visit(
        [](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, BoundWithin>) return true;
            else if constexpr (std::is_same_v<T, BoundNot>) return node_uses_today(*x.operand);
            else if constexpr (std::is_same_v<T, BoundAnd> || std::is_same_v<T, BoundOr>)
                return node_uses_today(*x.lhs) || node_uses_today(*x.rhs);
            else return false;
        },
        n.node);
}

}  // namespace

bool BoundFilter::uses_today() const { return root_ && node_uses_today(*root_); }

// ---------------------------------------------------------------------------
// Binding

namespace {

std::string_view literal_kind(const Literal& l) {
    switch (l.index()) {
        case 0: return "text";
        case 1: return "number";
        case 2: return "boolean";
        default: return "date";
    }
}

bool literal_fits(const Literal& l, ColumnType t) {
    switch (t) {
        case ColumnType::Text:
        case ColumnType::TextList: return std::holds_alternative<std::string>(l);
        case ColumnType::Number: return std::holds_alternative<double>(l);
        case ColumnType::Boolean: return std::holds_alternative<bool>(l);
        case ColumnType::Date: return std::holds_alternative<Date>(l);
    }
    return false;
}

struct Resolved {
    std::size_t col;
    ColumnType ctype;
};

Resolved resolve(const std::string& name, const CustomerTable& table) {
    if (auto idx = table.column_index(name)) return {*idx, table.column_meta(*idx).ctype};
    std::string valid;
    for (const auto& c : table.schema()) {
        if (!valid.empty()) valid += ", ";
        valid += c.name;
    }
    throw BindError("unknown column '" + name + "'; valid columns: " + valid);
}

[[noreturn]] void mismatch(const std::string& what, const std::string& column, ColumnType t) {
    throw BindError("type mismatch: " + what + " is not valid on column '" + column + "' of type " +
                    std::string(to_string(t)));
}

std::shared_ptr<const BoundNode> bind_node(const FilterExpr& e, const CustomerTable& table) {
    auto mk = [](BoundNode::Node n) { return std::make_shared<const BoundNode>(std::move(n)); };
    return std::visit(
        [&](const auto& x) -> std::shared_ptr<const BoundNode> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Compare>) {
                auto r = resolve(x.column, table);
                if (r.ctype == ColumnType::TextList) {
                    mismatch("comparison '" + std::string(to_string(x.op)) + "' (use contains or in)", x.column,
                             r.ctype);
                }
                const bool ordering = x.op != CompareOp::Eq && x.op != CompareOp::Ne;
                if (ordering && r.ctype != ColumnType::Number && r.ctype != ColumnType::Date) {
                    mismatch("ordering comparison '" + std::string(to_string(x.op)) + "'", x.column, r.ctype);
                }
                if (!literal_fits(x.value, r.ctype)) {
                    mismatch(std::string(literal_kind(x.value)) + " literal", x.column, r.ctype);
                }
                return mk(BoundCompare{r.col, r.ctype, x.op, x.value});
            } else if constexpr (std::is_same_v<T, Contains>) {
                auto r = resolve(x.column, table);
                if (r.ctype != ColumnType::Text && r.ctype != ColumnType::TextList) {
                    mismatch("contains", x.column, r.ctype);
                }
                return mk(BoundContains{r.col, r.ctype, text::to_lower(x.needle)});
            } else if constexpr (std::is_same_v<T, InList>) {
                auto r = resolve(x.column, table);
                for (const auto& v : x.values) {
                    if (!literal_fits(v, r.ctype)) {
                        mismatch("in-list with " + std::string(literal_kind(v)) + " literal", x.column, r.ctype);
                    }
                }
                return mk(BoundInList{r.col, r.ctype, x.values});
            } else if constexpr (std::is_same_v<T, WithinLastDays>) {
                auto r = resolve(x.column, table);
                if (r.ctype != ColumnType::Date) mismatch("within_last", x.column, r.ctype);
                if (x.days <= 0) throw BindError("within_last needs a positive day count");
                return mk(BoundWithin{r.col, x.days});
            } else if constexpr (std::is_same_v<T, IsNull>) {
                auto r = resolve(x.column, table);
                return mk(BoundIsNull{r.col, x.negated});
            } else if constexpr (std::is_same_v<T, Not>) {
                return mk(BoundNot{bind_node(*x.operand, table)});
            } else if constexpr (std::is_same_v<T, And>) {
                return mk(BoundAnd{bind_node(*x.lhs, table), bind_node(*x.rhs, table)});
            } else {
                return mk(BoundOr{bind_node(*x.lhs, table), bind_node(*x.rhs, table)});
            }
        },
        e.node);
}

}  // namespace

BoundFilter bind(const ExprPtr& expr, const CustomerTable& table) {
    if (!expr) throw BindError("empty expression");
    return BoundFilter(bind_node(*expr, table), expr);
}

BoundLimit bind(const LimitClause& clause, const CustomerTable& table) {
    if (clause.n <= 0) throw BindError("limit must be positive");
    BoundLimit out{clause, std::nullopt};
    if (clause.order_column) {
        auto r = resolve(*clause.order_column, table);
        if (r.ctype == ColumnType::TextList) mismatch("ordering", *clause.order_column, r.ctype);
        out.order_col = r.col;
    }
    return out;
}

BoundPredicate bind(const Predicate& pred, const CustomerTable& table) {
    if (const auto* rc = std::get_if<RowCount>(&pred)) {
        if (rc->n < 0) throw BindError("row count must be non-negative");
        return BoundRowCount{*rc};
    }
    return BoundAllRows{bind(std::get<AllRows>(pred).expr, table)};
}

BoundStatement bind(const Statement& stmt, const CustomerTable& table) {
    if (const auto* e = std::get_if<ExprPtr>(&stmt)) return bind(*e, table);
    return bind(std::get<LimitClause>(stmt), table);
}

// ---------------------------------------------------------------------------
// Evaluation: column-at-a-time masks.

namespace {

int three_way(const CellValue& cell, const Literal& lit) {
    return std::visit(
        [&](const auto& l) -> int {
            using L = std::decay_t<decltype(l)>;
            const auto& v = std::get<L>(cell);
            if constexpr (std::is_same_v<L, std::string>) {
                return v.compare(l) < 0 ? -1 : (v.compare(l) > 0 ? 1 : 0);
            } else {
                return v < l ? -1 : (l < v ? 1 : 0);
            }
        },
        lit);
}

bool literal_equals(const CellValue& cell, const Literal& lit) {
    // Both sides already share a type after binding.
    return three_way(cell, lit) == 0;
}

using Mask = std::vector<char>;

Mask eval(const BoundNode& n, const CustomerTable& t, Date today);

Mask eval_leaf(const CustomerTable& t, std::size_t col, auto&& keep) {
    const auto rows = t.row_count();
    Mask m(rows, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& c = t.cell(col, r);
        if (!is_null(c)) m[r] = keep(c) ? 1 : 0;
    }
    return m;
}

Mask eval(const BoundNode& n, const CustomerTable& t, Date today) {
    return std::visit(
        [&](const auto& x) -> Mask {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, BoundCompare>) {
                return eval_leaf(t, x.col, [&](const CellValue& c) { return compare_holds(x.op, three_way(c, x.value)); });
            } else if constexpr (std::is_same_v<T, BoundContains>) {
                return eval_leaf(t, x.col, [&](const CellValue& c) {
                    if (const auto* s = std::get_if<std::string>(&c)) return text::icontains(*s, x.needle_lower);
                    const auto& list = std::get<TextList>(c);
                    return std::any_of(list.begin(), list.end(),
                                       [&](const std::string& e) { return text::icontains(e, x.needle_lower); });
                });
            } else if constexpr (std::is_same_v<T, BoundInList>) {
                return eval_leaf(t, x.col, [&](const CellValue& c) {
                    if (const auto* list = std::get_if<TextList>(&c)) {
                        return std::any_of(list->begin(), list->end(), [&](const std::string& e) {
                            return std::any_of(x.values.begin(), x.values.end(),
                                               [&](const Literal& v) { return std::get<std::string>(v) == e; });
                        });
                    }
                    return std::any_of(x.values.begin(), x.values.end(),
                                       [&](const Literal& v) { return literal_equals(c, v); });
                });
            } else if constexpr (std::is_same_v<T, BoundWithin>) {
                const Date lo = today.minus_days(x.days);
                return eval_leaf(t, x.col, [&](const CellValue& c) {
                    const Date d = std::get<Date>(c);
                    return lo <= d && d <= today;
                });
            } else if constexpr (std::is_same_v<T, BoundIsNull>) {
                Mask m(t.row_count(), 0);
                for (std::size_t r = 0; r < m.size(); ++r) m[r] = (is_null(t.cell(x.col, r)) != x.negated) ? 1 : 0;
                return m;
            } else if constexpr (std::is_same_v<T, BoundNot>) {
                auto m = eval(*x.operand, t, today);
                for (auto& b : m) b = b ? 0 : 1;
                return m;
            } else if constexpr (std::is_same_v<T, BoundAnd>) {
                auto a = eval(*x.lhs, t, today);
                auto b = eval(*x.rhs, t, today);
                for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] && b[i]) ? 1 : 0;
                return a;
            } else {
                auto a = eval(*x.lhs, t, today);
                auto b = eval(*x.rhs, t, today);
                for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] || b[i]) ? 1 : 0;
                return a;
            }
        },
        n.node);
}

std::vector<std::size_t> positions_of(const Mask& m) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i]) out.push_back(i);
    }
    return out;
}

}  // namespace

std::vector<char> evaluate_mask(const CustomerTable& table, const BoundFilter& filter, Date today) {
    return eval(filter.root(), table, today);
}

CustomerTable apply_filter(const CustomerTable& table, const BoundFilter& filter, Date today) {
    return table.subset(positions_of(evaluate_mask(table, filter, today)));
}

CustomerTable apply_limit(const CustomerTable& table, const BoundLimit& limit) {
    const auto rows = table.row_count();
    const auto n = static_cast<std::size_t>(limit.clause.n);
    if (n >= rows) return table;
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (limit.order_col) {
        const auto col = *limit.order_col;
        const bool desc = limit.clause.direction == SortDirection::Desc;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& ca = table.cell(col, a);
            const auto& cb = table.cell(col, b);
            const bool na = is_null(ca), nb = is_null(cb);
            if (na != nb) return nb;  // nulls last
            if (!na) {
                int c = 0;
                std::visit(
                    [&](const auto& va) {
                        using V = std::decay_t<decltype(va)>;
                        if constexpr (!std::is_same_v<V, std::monostate> && !std::is_same_v<V, TextList>) {
                            const auto& vb = std::get<V>(cb);
                            c = va < vb ? -1 : (vb < va ? 1 : 0);
                        }
                    },
                    ca);
                if (c != 0) return desc ? c > 0 : c < 0;
            }
            return table.id(a) < table.id(b);
        });
    }
    order.resize(n);
    std::sort(order.begin(), order.end());
    return table.subset(order);
}

CustomerTable apply_statement(const CustomerTable& table, const BoundStatement& stmt, Date today) {
    if (const auto* f = std::get_if<BoundFilter>(&stmt)) return apply_filter(table, *f, today);
    return apply_limit(table, std::get<BoundLimit>(stmt));
}

PredicateResult eval_predicate(const CustomerTable& table, const BoundPredicate& pred, Date today) {
    if (const auto* rc = std::get_if<BoundRowCount>(&pred)) {
        const auto count = static_cast<std::int64_t>(table.row_count());
        const int c = count < rc->pred.n ? -1 : (count > rc->pred.n ? 1 : 0);
        return {compare_holds(rc->pred.op, c), "count=" + std::to_string(count)};
    }
    const auto& all = std::get<BoundAllRows>(pred);
    if (table.row_count() == 0) return {true, "empty audience (vacuously true)"};
    auto mask = evaluate_mask(table, all.filter, today);
    std::size_t failing = 0;
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) {
            ++failing;
            if (!first) first = i;
        }
    }
    if (failing == 0) return {true, "all " + std::to_string(mask.size()) + " rows satisfy"};
    return {false, std::to_string(failing) + " of " + std::to_string(mask.size()) +
                       " rows fail; first failing id=" + table.id(*first)};
}

}  // namespace ramp::dsl
