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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ramp/date.hpp"
#include "ramp/error.hpp"

namespace ramp {

enum class ColumnType { Text, Number, Boolean, Date, TextList };

std::string_view to_string(ColumnType t);
std::optional<ColumnType> parse_column_type(std::string_view s);

using TextList = std::vector<std::string>;

/// A single cell. monostate is null.
using CellValue = std::variant<std::monostate, std::string, double, bool, Date, TextList>;

inline bool is_null(const CellValue& v) { return std::holds_alternative<std::monostate>(v); }

/// Human-readable rendering used in summaries and CSV export.
std::string render_cell(const CellValue& v, char list_delimiter = ';');

struct ColumnMeta {
    std::string name;
    ColumnType ctype = ColumnType::Text;
    std::string description;
    char list_delimiter = ';';
    /// Up to five distinct values observed in the column, in first-seen row order.
    std::vector<std::string> sample_values;
};

using Schema = std::vector<ColumnMeta>;

/// Error raised while loading or assembling a table. row is 1-based over data
/// rows (the header is row 0); column may be empty for whole-file problems.
class TableError : public Error {
public:
    TableError(std::string message, std::size_t row = 0, std::string column = {}, std::string raw = {});

    [[nodiscard]] std::size_t row() const { return row_; }
    [[nodiscard]] const std::string& column() const { return column_; }
    [[nodiscard]] const std::string& raw() const { return raw_; }

private:
    std::size_t row_;
    std::string column_;
    std::string raw_;
};

/// Immutable columnar customer table.
///
/// A CustomerTable is a cheap handle: subsets share the underlying column
/// storage and only carry the selected base row indices, always in ascending
/// order so every derived audience keeps the pool's relative row order.
class CustomerTable {
public:
    struct Column {
        ColumnMeta meta;
        std::vector<CellValue> cells;
    };

    CustomerTable() = default;

    /// Validates equal column lengths, the id column's presence and type,
    /// and id uniqueness. Fills sample_values.
    static CustomerTable from_columns(std::vector<Column> columns, std::string id_column);

    [[nodiscard]] std::size_t row_count() const;
    [[nodiscard]] std::size_t column_count() const;
    [[nodiscard]] const Schema& schema() const;
    [[nodiscard]] const std::string& id_column() const;
    [[nodiscard]] std::optional<std::size_t> column_index(std::string_view name) const;
    [[nodiscard]] const ColumnMeta& column_meta(std::size_t col) const;

    /// Cell at view position `row` (0-based within this view).
    [[nodiscard]] const CellValue& cell(std::size_t col, std::size_t row) const;
    [[nodiscard]] const std::string& id(std::size_t row) const;
    [[nodiscard]] std::size_t base_row(std::size_t row) const;

    /// Ids in stable row order.
    [[nodiscard]] std::vector<std::string> ids() const;
    [[nodiscard]] bool contains_id(std::string_view id) const;

    /// The full pool this view was derived from.
    [[nodiscard]] CustomerTable pool() const;

    /// Sub-view from strictly increasing view positions.
    [[nodiscard]] CustomerTable subset(const std::vector<std::size_t>& positions) const;

    /// Sub-view of the pool restricted to the given ids (unknown ids are
    /// ignored); result is in pool row order.
    [[nodiscard]] CustomerTable with_ids(const std::vector<std::string>& ids) const;

private:
    struct Storage {
        Schema schema;
        std::vector<std::vector<CellValue>> columns;
        std::size_t id_col = 0;
        std::vector<std::string> ids;
        std::unordered_map<std::string, std::size_t> id_to_row;
    };

    std::shared_ptr<const Storage> data_;
    // nullptr means every row of the pool.
    std::shared_ptr<const std::vector<std::size_t>> rows_;
};

/// Reads a sidecar schema (JSON) and returns column metadata plus the id column.
struct SchemaSidecar {
    std::string id_column;
    std::vector<ColumnMeta> columns;
};
SchemaSidecar parse_schema_sidecar(std::string_view json_text);
SchemaSidecar load_schema_sidecar(const std::filesystem::path& path);

/// Parses RFC-4180 CSV text into rows of raw fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

CustomerTable load_table_from_text(std::string_view csv_text, const SchemaSidecar& schema);
CustomerTable load_table(const std::filesystem::path& csv_path, const std::filesystem::path& schema_sidecar);

/// One line per column: name, type, up to five sample values and the
/// description when present. Pure function of the table's schema.
std::string metadata_summary(const CustomerTable& table);

/// Ids in stable row order.
std::vector<std::string> audience_ids(const CustomerTable& table);

/// RFC-4180 CSV of the view (header + rows), using each column's list delimiter.
std::string to_csv(const CustomerTable& table);

/// Sidecar JSON for a table's schema.
std::string schema_to_json(const CustomerTable& table);

}  // namespace ramp
