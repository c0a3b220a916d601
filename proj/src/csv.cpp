#include "irfkit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "irfkit/errors.hpp"

namespace irfkit {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool is_missing(const std::string& cell) {
    static const std::set<std::string> na = {"", "NA", "na", "N/A", "NaN", "nan", "."};
    return na.count(cell) > 0;
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // file row numbers in row_no
    std::vector<long> row_no;                    // 1-based data row numbers
};

RawTable read_raw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open '" + path + "'");
    RawTable t;
    std::string line;
    bool have_header = false;
    long data_row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        auto cells = split_line(line);
        if (!have_header) {
            t.header = cells;
            have_header = true;
            continue;
        }
        ++data_row;
        if (cells.size() != t.header.size())
            throw ParseError("'" + path + "' row " + std::to_string(data_row) + ": expected " +
                             std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
        t.row_no.push_back(data_row);
    }
    if (!have_header) throw IngestionError("'" + path + "': no header row");
    if (t.rows.empty()) throw IngestionError("'" + path + "': no data rows");
    return t;
}

std::size_t column_index(const RawTable& t, const std::string& name, const std::string& path) {
    auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end())
        throw StructuralError("'" + path + "': no column named '" + name + "'");
    return static_cast<std::size_t>(it - t.header.begin());
}

double parse_cell(const std::string& cell, const std::string& path, long row,
                  const std::string& col) {
    char* end = nullptr;
    double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size())
        throw ParseError("'" + path + "' row " + std::to_string(row) + ", column '" + col +
                         "': cannot parse '" + cell + "' as a number");
    if (!std::isfinite(v))
        throw ParseError("'" + path + "' row " + std::to_string(row) + ", column '" + col +
                         "': non-finite value '" + cell + "'");
    return v;
}

}  // namespace

LoadResult load_csv(const std::string& path, const CsvSchema& schema, NaPolicy na_policy) {
    RawTable t = read_raw(path);

    std::optional<std::size_t> period_ix, entity_ix;
    if (schema.period) period_ix = column_index(t, *schema.period, path);
    if (schema.entity) entity_ix = column_index(t, *schema.entity, path);

    std::vector<std::string> value_cols = schema.values;
    if (value_cols.empty()) {
        for (const auto& h : t.header)
            if ((!schema.period || h != *schema.period) && (!schema.entity || h != *schema.entity))
                value_cols.push_back(h);
    }
    if (value_cols.empty()) throw StructuralError("'" + path + "': schema names no value columns");
    std::vector<std::size_t> value_ix;
    for (const auto& c : value_cols) value_ix.push_back(column_index(t, c, path));

    // Missing-cell pass: reject or mark rows for dropping.
    std::vector<bool> keep(t.rows.size(), true);
    long dropped = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t j : value_ix) {
            if (is_missing(t.rows[r][j])) {
                if (na_policy == NaPolicy::reject)
                    throw IngestionError("'" + path + "' row " + std::to_string(t.row_no[r]) +
                                         ", column '" + t.header[j] + "': missing value");
                keep[r] = false;
            }
        }
        if (!keep[r]) ++dropped;
    }

    if (!entity_ix) {
        std::vector<std::vector<double>> cols(value_ix.size());
        std::optional<std::vector<std::string>> periods;
        if (period_ix) periods.emplace();
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            if (!keep[r]) continue;
            for (std::size_t k = 0; k < value_ix.size(); ++k)
                cols[k].push_back(
                    parse_cell(t.rows[r][value_ix[k]], path, t.row_no[r], value_cols[k]));
            if (periods) periods->push_back(t.rows[r][*period_ix]);
        }
        if (cols[0].empty()) throw InsufficientSampleError("'" + path + "': all rows dropped");
        SeriesTable out;
        out.rows_dropped = dropped;
        for (std::size_t k = 0; k < value_ix.size(); ++k)
            out.series.emplace_back(value_cols[k], std::move(cols[k]), periods);
        return out;
    }

    // Panel path: group rows by entity, preserving first-appearance order.
    std::vector<std::string> entity_order;
    std::map<std::string, std::vector<std::size_t>> by_entity;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (!keep[r]) continue;
        const std::string& e = t.rows[r][*entity_ix];
        if (by_entity.find(e) == by_entity.end()) entity_order.push_back(e);
        by_entity[e].push_back(r);
    }
    std::map<std::string, std::map<std::string, Series>> data;
    for (const auto& e : entity_order) {
        const auto& rows = by_entity[e];
        std::optional<std::vector<std::string>> periods;
        if (period_ix) {
            periods.emplace();
            std::set<std::string> seen;
            for (auto r : rows) {
                const std::string& p = t.rows[r][*period_ix];
                if (!seen.insert(p).second)
                    throw StructuralError("'" + path + "': duplicate (entity '" + e +
                                          "', period '" + p + "')");
                periods->push_back(p);
            }
        }
        for (std::size_t k = 0; k < value_ix.size(); ++k) {
            std::vector<double> v;
            v.reserve(rows.size());
            for (auto r : rows)
                v.push_back(parse_cell(t.rows[r][value_ix[k]], path, t.row_no[r], value_cols[k]));
            data[e].emplace(value_cols[k], Series(value_cols[k], std::move(v), periods));
        }
    }
    return PanelTable{Panel(std::move(entity_order), std::move(data)), dropped};
}

void write_csv(const std::string& path, const std::vector<Series>& series,
               const std::vector<std::string>& comments) {
    if (series.empty()) throw ParameterError("write_csv: no series");
    const std::size_t n = series.front().size();
    const auto& periods = series.front().periods();
    for (const auto& s : series) {
        if (s.size() != n) throw StructuralError("write_csv: unequal series lengths");
        if (s.periods() != periods) throw StructuralError("write_csv: mismatched period indices");
    }
    std::ofstream out(path);
    if (!out) throw IngestionError("cannot write '" + path + "'");
    for (const auto& c : comments) out << "# " << c << "\n";
    if (periods) out << "period";
    for (std::size_t k = 0; k < series.size(); ++k)
        out << (k == 0 && !periods ? "" : ",") << series[k].name();
    out << "\n";
    char buf[40];
    for (std::size_t t = 0; t < n; ++t) {
        if (periods) out << (*periods)[t];
        for (std::size_t k = 0; k < series.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", series[k][t]);
            out << (k == 0 && !periods ? "" : ",") << buf;
        }
        out << "\n";
    }
}

}  // namespace irfkit
