#pragma once

#include <string>
#include <vector>

// Deterministic CSV emission: RFC-4180 quoting, LF line endings, trailing
// newline, and atomic file replacement (write to a sibling temp file, then
// rename) so interrupted runs never leave half-written artifacts.

namespace mvnlab {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Quotes a field iff it contains a comma, quote, CR or LF; quotes doubled.
std::string csv_quote(const std::string& field);

std::string render_csv(const CsvTable& table);

void write_csv_atomic(const std::string& path, const CsvTable& table);

// Inverse of render_csv (quoted fields, embedded newlines); first record is
// the header.  Used by round-trip tests.
CsvTable parse_csv(const std::string& text);

} // namespace mvnlab
