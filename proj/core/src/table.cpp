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
#include "ramp/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "ramp/text.hpp"

namespace ramp {

using nlohmann::json;

std::string_view to_string(ColumnType t) {
    switch (t) {
        case ColumnType::Text: return "text";
        case ColumnType::Number: return "number";
        case ColumnType::Boolean: return "boolean";
        case ColumnType::Date: return "date";
        case ColumnType::TextList: return "text_list";
    }
    return "text";
}

std::optional<ColumnType> parse_column_type(std::string_view s) {
    if (s == "text") return ColumnType::Text;
    if (s == "number") return ColumnType::Number;
    if (s == "boolean") return ColumnType::Boolean;
    if (s == "date") return ColumnType::Date;
    if (s == "text_list") return ColumnType::TextList;
    return std::nullopt;
}

std::string render_cell(const CellValue& v, char list_delimiter) {
    struct Visitor {
        char delim;
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(double d) const { return text::format_number(d); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(Date d) const { return d.to_string(); }
        std::string operator()(const TextList& l) const { return text::join(l, std::string(1, delim)); }
    };
    return std::visit(Visitor{list_delimiter}, v);
}

TableError::TableError(std::string message, std::size_t row, std::string column, std::string raw)
    : Error([&] {
          std::string m = std::move(message);
          if (row > 0 || !column.empty()) {
              m += " (";
              if (row > 0) m += "row " + std::to_string(row);
              if (row > 0 && !column.empty()) m += ", ";
              if (!column.empty()) m += "column '" + column + "'";
              if (!raw.empty()) m += ", value '" + raw + "'";
              m += ")";
          }
          return m;
      }()),
      row_(row),
      column_(std::move(column)),
      raw_(std::move(raw)) {}

// ---------------------------------------------------------------------------

namespace {

void fill_samples(ColumnMeta& meta, const std::vector<CellValue>& cells) {
    meta.sample_values.clear();
    std::set<std::string> seen;
    auto offer = [&](std::string v) {
        if (meta.sample_values.size() >= 5 || v.empty()) return;
        if (seen.insert(v).second) meta.sample_values.push_back(std::move(v));
    };
    for (const auto& c : cells) {
        if (meta.sample_values.size() >= 5) break;
        if (const auto* list = std::get_if<TextList>(&c)) {
            for (const auto& e : *list) offer(e);
        } else if (!is_null(c)) {
            offer(render_cell(c));
        }
    }
}

}  // namespace

CustomerTable CustomerTable::from_columns(std::vector<Column> columns, std::string id_column) {
    auto storage = std::make_shared<Storage>();
    std::unordered_set<std::string> names;
    std::optional<std::size_t> rows;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        auto& col = columns[c];
        if (!names.insert(col.meta.name).second) {
            throw TableError("duplicate column name '" + col.meta.name + "'");
        }
        if (rows && *rows != col.cells.size()) {
            throw TableError("column '" + col.meta.name + "' has " + std::to_string(col.cells.size()) +
                             " cells, expected " + std::to_string(*rows));
        }
        rows = col.cells.size();
        if (col.meta.name == id_column) storage->id_col = c;
    }
    if (!names.contains(id_column)) {
        throw TableError("id column '" + id_column + "' is not declared");
    }
    if (columns[storage->id_col].meta.ctype != ColumnType::Text) {
        throw TableError("id column '" + id_column + "' must have type text");
    }
    const auto& id_cells = columns[storage->id_col].cells;
    storage->ids.reserve(id_cells.size());
    for (std::size_t r = 0; r < id_cells.size(); ++r) {
        const auto* s = std::get_if<std::string>(&id_cells[r]);
        if (s == nullptr || s->empty()) {
            throw TableError("missing customer id", r + 1, id_column);
        }
        if (!storage->id_to_row.emplace(*s, r).second) {
            throw TableError("duplicate customer id '" + *s + "'", r + 1, id_column, *s);
        }
        storage->ids.push_back(*s);
    }
    for (auto& col : columns) {
        fill_samples(col.meta, col.cells);
        storage->schema.push_back(std::move(col.meta));
        storage->columns.push_back(std::move(col.cells));
    }
    CustomerTable t;
    t.data_ = std::move(storage);
    return t;
}

std::size_t CustomerTable::row_count() const {
    if (!data_) return 0;
    return rows_ ? rows_->size() : data_->ids.size();
}

std::size_t CustomerTable::column_count() const { return data_ ? data_->schema.size() : 0; }

const Schema& CustomerTable::schema() const {
    static const Schema kEmpty;
    return data_ ? data_->schema : kEmpty;
}

const std::string& CustomerTable::id_column() const {
    static const std::string kEmpty;
    return data_ ? data_->schema[data_->id_col].name : kEmpty;
}

std::optional<std::size_t> CustomerTable::column_index(std::string_view name) const {
    if (!data_) return std::nullopt;
    for (std::size_t i = 0; i < data_->schema.size(); ++i) {
        if (data_->schema[i].name == name) return i;
    }
    return std::nullopt;
}

const ColumnMeta& CustomerTable::column_meta(std::size_t col) const { return data_->schema.at(col); }

std::size_t CustomerTable::base_row(std::size_t row) const { return rows_ ? (*rows_)[row] : row; }

const CellValue& CustomerTable::cell(std::size_t col, std::size_t row) const {
    return data_->columns[col][base_row(row)];
}

const std::string& CustomerTable::id(std::size_t row) const { return data_->ids[base_row(row)]; }

std::vector<std::string> CustomerTable::ids() const {
    std::vector<std::string> out;
    out.reserve(row_count());
    for (std::size_t i = 0; i < row_count(); ++i) out.push_back(id(i));
    return out;
}

bool CustomerTable::contains_id(std::string_view id) const {
    if (!data_) return false;
    auto it = data_->id_to_row.find(std::string(id));
    if (it == data_->id_to_row.end()) return false;
    if (!rows_) return true;
    return std::binary_search(rows_->begin(), rows_->end(), it->second);
}

CustomerTable CustomerTable::pool() const {
    CustomerTable t;
    t.data_ = data_;
    return t;
}

CustomerTable CustomerTable::subset(const std::vector<std::size_t>& positions) const {
    auto rows = std::make_shared<std::vector<std::size_t>>();
    rows->reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] >= row_count() || (i > 0 && positions[i] <= positions[i - 1])) {
            throw std::invalid_argument("subset positions must be strictly increasing and in range");
        }
        rows->push_back(base_row(positions[i]));
    }
    CustomerTable t;
    t.data_ = data_;
    t.rows_ = std::move(rows);
    return t;
}

CustomerTable CustomerTable::with_ids(const std::vector<std::string>& ids) const {
    auto rows = std::make_shared<std::vector<std::size_t>>();
    if (data_) {
        for (const auto& id : ids) {
            auto it = data_->id_to_row.find(id);
            if (it != data_->id_to_row.end()) rows->push_back(it->second);
        }
    }
    std::sort(rows->begin(), rows->end());
    rows->erase(std::unique(rows->begin(), rows->end()), rows->end());
    CustomerTable t;
    t.data_ = data_;
    t.rows_ = std::move(rows);
    return t;
}

// ---------------------------------------------------------------------------

SchemaSidecar parse_schema_sidecar(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw TableError(std::string("schema sidecar is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("id_column") || !doc["id_column"].is_string() ||
        !doc.contains("columns") || !doc["columns"].is_array()) {
        throw TableError("schema sidecar needs a string 'id_column' and an array 'columns'");
    }
    SchemaSidecar out;
    out.id_column = doc["id_column"].get<std::string>();
    for (const auto& c : doc["columns"]) {
        if (!c.is_object() || !c.contains("name") || !c.contains("type") || !c["name"].is_string() ||
            !c["type"].is_string()) {
            throw TableError("every schema column needs string 'name' and 'type'");
        }
        ColumnMeta meta;
        meta.name = c["name"].get<std::string>();
        auto type = parse_column_type(c["type"].get<std::string>());
        if (!type) {
            throw TableError("unknown column type '" + c["type"].get<std::string>() + "'", 0, meta.name);
        }
        meta.ctype = *type;
        if (c.contains("description") && c["description"].is_string()) {
            meta.description = c["description"].get<std::string>();
        }
        if (c.contains("list_delimiter")) {
            auto d = c["list_delimiter"].get<std::string>();
            if (d.size() != 1) throw TableError("list_delimiter must be a single character", 0, meta.name);
            meta.list_delimiter = d[0];
        }
        out.columns.push_back(std::move(meta));
    }
    return out;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TableError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

SchemaSidecar load_schema_sidecar(const std::filesystem::path& path) { return parse_schema_sidecar(read_file(path)); }

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t i = 0;
    if (text.starts_with("\xEF\xBB\xBF")) i = 3;  // UTF-8 BOM
    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty()) {
                    throw TableError("stray quote inside unquoted CSV field", rows.size());
                }
                in_quotes = true;
                field_started = true;
                break;
            case ',': end_field(); break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_row();
                break;
            case '\n': end_row(); break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (in_quotes) throw TableError("unterminated quoted CSV field", rows.size());
    if (field_started || !row.empty() || !field.empty()) end_row();
    return rows;
}

namespace {

CellValue parse_cell(const std::string& raw, const ColumnMeta& meta, std::size_t row) {
    auto t = text::trim(raw);
    if (t.empty()) return std::monostate{};
    switch (meta.ctype) {
        case ColumnType::Text: return std::string(raw);
        case ColumnType::Number: {
            double v = 0;
            const char* first = t.data();
            if (*first == '+') ++first;
            auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
            if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
                throw TableError("cannot parse number", row, meta.name, raw);
            }
            return v;
        }
        case ColumnType::Boolean: {
            auto l = text::to_lower(t);
            if (l == "true" || l == "1" || l == "yes" || l == "t" || l == "y") return true;
            if (l == "false" || l == "0" || l == "no" || l == "f" || l == "n") return false;
            throw TableError("cannot parse boolean", row, meta.name, raw);
        }
        case ColumnType::Date: {
            auto d = Date::parse(t);
            if (!d) throw TableError("cannot parse ISO date", row, meta.name, raw);
            return *d;
        }
        case ColumnType::TextList: {
            TextList items;
            for (auto& part : text::split(t, meta.list_delimiter)) {
                auto p = text::trim(part);
                if (!p.empty()) items.emplace_back(p);
            }
            if (items.empty()) return std::monostate{};
            return items;
        }
    }
    return std::monostate{};
}

}  // namespace

CustomerTable load_table_from_text(std::string_view csv_text, const SchemaSidecar& schema) {
    auto rows = parse_csv(csv_text);
    if (rows.empty()) throw TableError("CSV has no header row");
    const auto& header = rows.front();

    std::vector<int> col_for_field(header.size(), -1);
    std::vector<bool> seen(schema.columns.size(), false);
    for (std::size_t f = 0; f < header.size(); ++f) {
        auto name = std::string(text::trim(header[f]));
        auto it = std::find_if(schema.columns.begin(), schema.columns.end(),
                               [&](const ColumnMeta& m) { return m.name == name; });
        if (it == schema.columns.end()) {
            throw TableError("unknown column '" + name + "' (not declared in schema)", 0, name);
        }
        auto idx = static_cast<std::size_t>(it - schema.columns.begin());
        if (seen[idx]) throw TableError("column '" + name + "' appears twice in CSV header", 0, name);
        seen[idx] = true;
        col_for_field[f] = static_cast<int>(idx);
    }
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (!seen[c]) {
            throw TableError("missing column '" + schema.columns[c].name + "' (declared in schema, absent from CSV)",
                             0, schema.columns[c].name);
        }
    }

    std::vector<CustomerTable::Column> columns;
    for (const auto& meta : schema.columns) columns.push_back({meta, {}});
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& fields = rows[r];
        if (fields.size() == 1 && text::trim(fields[0]).empty() && header.size() > 1) continue;  // blank line
        if (fields.size() != header.size()) {
            throw TableError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             r);
        }
        for (std::size_t f = 0; f < fields.size(); ++f) {
            auto& col = columns[static_cast<std::size_t>(col_for_field[f])];
            col.cells.push_back(parse_cell(fields[f], col.meta, r));
        }
    }
    return CustomerTable::from_columns(std::move(columns), schema.id_column);
}

CustomerTable load_table(const std::filesystem::path& csv_path, const std::filesystem::path& schema_sidecar) {
    auto schema = load_schema_sidecar(schema_sidecar);
    return load_table_from_text(read_file(csv_path), schema);
}

std::string metadata_summary(const CustomerTable& table) {
    std::string out;
    for (const auto& col : table.schema()) {
        out += "- " + col.name + " (" + std::string(to_string(col.ctype)) + "): samples [";
        for (std::size_t i = 0; i < col.sample_values.size(); ++i) {
            if (i) out += ", ";
            if (col.ctype == ColumnType::Text || col.ctype == ColumnType::TextList) {
                out += "\"" + col.sample_values[i] + "\"";
            } else {
                out += col.sample_values[i];
            }
        }
        out += "]";
        if (!col.description.empty()) out += "; " + col.description;
        out += "\n";
    }
    return out;
}

std::vector<std::string> audience_ids(const CustomerTable& table) { return table.ids(); }

namespace {
std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}
}  // namespace

std::string to_csv(const CustomerTable& table) {
    std::string out;
    const auto& schema = table.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (c) out += ",";
        out += csv_escape(schema[c].name);
    }
    out += "\n";
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        for (std::size_t c = 0; c < schema.size(); ++c) {
            if (c) out += ",";
            out += csv_escape(render_cell(table.cell(c, r), schema[c].list_delimiter));
        }
        out += "\n";
    }
    return out;
}

std::string schema_to_json(const CustomerTable& table) {
    json doc;
    doc["id_column"] = table.id_column();
    doc["columns"] = json::array();
    for (const auto& c : table.schema()) {
        json col{{"name", c.name}, {"type", std::string(to_string(c.ctype))}};
        if (!c.description.empty()) col["description"] = c.description;
        if (c.ctype == ColumnType::TextList) col["list_delimiter"] = std::string(1, c.list_delimiter);
        doc["columns"].push_back(std::move(col));
    }
    return doc.dump(2);
}

}  // namespace ramp
