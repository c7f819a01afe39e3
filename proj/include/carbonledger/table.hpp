// Copyright (c) 2026, the carbonledger authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace carbonledger {

/// Display hint for the human-readable table format. The machine formats
/// (csv, json) always carry full precision and ignore these.
enum class CellFormat { text, integer, number, scientific, percent };

struct Column {
    std::string name;
    CellFormat format = CellFormat::number;
};

using Cell = std::variant<std::monostate, std::string, double, std::int64_t>;

/// A flat report: named columns plus rows of cells. Every renderable output
/// of the tool is one of these.
struct Table {
    std::string title; // table format only; may be empty
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
};

enum class RenderFormat { table, json, csv };

/// Maps "table" | "json" | "csv"; throws UsageError otherwise.
RenderFormat parse_render_format(std::string_view name);

/// Renders a table. Output is byte-stable for identical inputs: the table
/// format applies paper-style display rounding (4 significant figures),
/// csv and json serialize doubles with shortest round-trip precision.
std::string render(const Table& table, RenderFormat format);

/// Rounds to `sig_figs` significant figures; optional thousands grouping.
std::string format_significant(double value, int sig_figs, bool group_thousands);

/// Shortest decimal string that parses back to exactly `value`.
std::string double_to_string(double value);

} // namespace carbonledger
