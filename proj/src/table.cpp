// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#include "carbonledger/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "carbonledger/errors.hpp"

namespace carbonledger {

namespace {

std::string group_integer_digits(std::string digits) {
    // digits is the integer part only, no sign.
    std::string out;
    const std::size_t n = digits.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && (n - i) % 3 == 0) out.push_back(',');
        out.push_back(digits[i]);
    }
    return out;
}

std::string format_cell_for_display(const Cell& cell, CellFormat format) {
    struct Visitor {
        CellFormat format;
        std::string operator()(std::monostate) const { return "-"; }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(std::int64_t v) const {
            const bool negative = v < 0;
            std::string digits = std::to_string(negative ? -v : v);
            return (negative ? "-" : "") + group_integer_digits(std::move(digits));
        }
        std::string operator()(double v) const {
            switch (format) {
            case CellFormat::scientific: {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.2e", v);
                return buf;
            }
            case CellFormat::percent: return format_significant(v, 4, false) + "%";
            case CellFormat::integer: {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.0f", v);
                std::string s = buf;
                const bool negative = !s.empty() && s[0] == '-';
                if (negative) s.erase(0, 1);
                return (negative ? "-" : "") + group_integer_digits(std::move(s));
            }
            default: return format_significant(v, 4, true);
            }
        }
    };
    return std::visit(Visitor{format}, cell);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string format_cell_for_csv(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(const std::string& s) const { return csv_escape(s); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return double_to_string(v); }
    };
    return std::visit(Visitor{}, cell);
}

std::string render_table_text(const Table& table) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::size_t> widths(table.columns.size(), 0);

    std::vector<std::string> header;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        header.push_back(table.columns[c].name);
        widths[c] = header.back().size();
    }
    grid.push_back(std::move(header));
    for (const auto& row : table.rows) {
        std::vector<std::string> cells;
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            Cell cell = c < row.size() ? row[c] : Cell{};
            cells.push_back(format_cell_for_display(cell, table.columns[c].format));
            widths[c] = std::max(widths[c], cells.back().size());
        }
        grid.push_back(std::move(cells));
    }

    std::ostringstream out;
    if (!table.title.empty()) out << table.title << '\n';
    for (std::size_t r = 0; r < grid.size(); ++r) {
        for (std::size_t c = 0; c < grid[r].size(); ++c) {
            const bool right_align = table.columns[c].format != CellFormat::text;
            const std::string& cell = grid[r][c];
            if (c > 0) out << "  ";
            if (right_align) out << std::string(widths[c] - cell.size(), ' ') << cell;
            else if (c + 1 == grid[r].size()) out << cell;
            else out << cell << std::string(widths[c] - cell.size(), ' ');
        }
        out << '\n';
        if (r == 0) {
            for (std::size_t c = 0; c < widths.size(); ++c) {
                if (c > 0) out << "  ";
                out << std::string(widths[c], '-');
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string render_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out << ',';
        out << csv_escape(table.columns[c].name);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c > 0) out << ',';
            out << format_cell_for_csv(c < row.size() ? row[c] : Cell{});
        }
        out << '\n';
    }
    return out.str();
}

std::string render_json(const Table& table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const Cell cell = c < row.size() ? row[c] : Cell{};
            const std::string& name = table.columns[c].name;
            if (std::holds_alternative<std::monostate>(cell)) obj[name] = nullptr;
            else if (const auto* s = std::get_if<std::string>(&cell)) obj[name] = *s;
            else if (const auto* i = std::get_if<std::int64_t>(&cell)) obj[name] = *i;
            else obj[name] = std::get<double>(cell);
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

} // namespace

RenderFormat parse_render_format(std::string_view name) {
    if (name == "table") return RenderFormat::table;
    if (name == "json") return RenderFormat::json;
    if (name == "csv") return RenderFormat::csv;
    throw UsageError(detail::cat("unknown format '", name, "' (expected table, json or csv)"));
}

std::string render(const Table& table, RenderFormat format) {
    switch (format) {
    case RenderFormat::table: return render_table_text(table);
    case RenderFormat::csv: return render_csv(table);
    case RenderFormat::json: return render_json(table);
    }
    throw UsageError("unknown render format");
}

std::string format_significant(double value, int sig_figs, bool group_thousands) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";

    const double magnitude = std::floor(std::log10(std::fabs(value)));
    // Very large or tiny values read better in scientific notation.
    if (magnitude >= 15 || magnitude <= -7) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.*e", sig_figs - 1, value);
        return buf;
    }
    const int decimals = sig_figs - 1 - static_cast<int>(magnitude);
    char buf[64];
    if (decimals >= 0) {
        std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    } else {
        // More integer digits than significant figures: zero out the tail.
        const double scale = std::pow(10.0, -decimals);
        std::snprintf(buf, sizeof(buf), "%.0f", std::round(value / scale) * scale);
    }
    std::string s = buf;
    if (!group_thousands) return s;

    const bool negative = !s.empty() && s[0] == '-';
    if (negative) s.erase(0, 1);
    const auto dot = s.find('.');
    std::string integer_part = dot == std::string::npos ? s : s.substr(0, dot);
    std::string fraction = dot == std::string::npos ? "" : s.substr(dot);
    return (negative ? "-" : "") + group_integer_digits(std::move(integer_part)) + fraction;
}

std::string double_to_string(double value) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace carbonledger
