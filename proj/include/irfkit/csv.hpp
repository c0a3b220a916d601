#ifndef IRFKIT_CSV_HPP
#define IRFKIT_CSV_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "irfkit/series.hpp"

namespace irfkit {

/// Column-role map for CSV ingestion. Empty `values` means "every column
/// not claimed by period/entity".
struct CsvSchema {
    std::optional<std::string> period;
    std::optional<std::string> entity;
    std::vector<std::string> values;
};

enum class NaPolicy { reject, drop_rows };

struct SeriesTable {
    std::vector<Series> series;  // shared period index
    long rows_dropped = 0;
};

struct PanelTable {
    Panel panel;
    long rows_dropped = 0;
};

using LoadResult = std::variant<SeriesTable, PanelTable>;

/// Reads a UTF-8 comma-separated file with a header row. Lines starting
/// with '#' are skipped. Missing cells (empty, NA, NaN, .) are handled per
/// `na_policy`: reject aborts, drop_rows removes the whole row. A non-missing
/// cell that does not parse as a finite number is always a ParseError.
/// An entity column in the schema yields a PanelTable, otherwise a SeriesTable.
LoadResult load_csv(const std::string& path, const CsvSchema& schema,
                    NaPolicy na_policy = NaPolicy::reject);

/// Writes aligned series as CSV with an optional shared period column.
/// Values are printed with 17 significant digits so a reload reproduces
/// them exactly. `comments` are emitted first as '#'-prefixed lines.
void write_csv(const std::string& path, const std::vector<Series>& series,
               const std::vector<std::string>& comments = {});

}  // namespace irfkit

#endif
