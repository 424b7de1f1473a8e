#include "mvnlab/csv.hpp"

#include <cstdio>
#include <fstream>

#include "mvnlab/errors.hpp"

namespace mvnlab {

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

void append_record(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_quote(fields[i]);
    }
    out += '\n';
}

} // namespace

std::string render_csv(const CsvTable& table) {
    std::string out;
    append_record(out, table.header);
    for (const auto& row : table.rows) append_record(out, row);
    return out;
}

void write_csv_atomic(const std::string& path, const CsvTable& table) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open '" + tmp + "' for writing");
        out << render_csv(table);
        out.flush();
        if (!out) throw ConfigError("failed writing '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ConfigError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any_field = false;

    const auto flush_field = [&] {
        record.push_back(field);
        field.clear();
        any_field = false;
    };
    const auto flush_record = [&] {
        flush_field();
        if (table.header.empty())
            table.header = std::move(record);
        else
            table.rows.push_back(std::move(record));
        record = {};
    };

    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                } else {
                    quoted = false;
                    ++i;
                }
            } else {
                field += c;
                ++i;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                any_field = true;
                ++i;
                break;
            case ',':
                flush_field();
                any_field = true;  // a comma implies a following (possibly empty) field
                ++i;
                break;
            case '\r':
                ++i;
                break;
            case '\n':
                flush_record();
                ++i;
                break;
            default:
                field += c;
                any_field = true;
                ++i;
                break;
        }
    }
    if (!field.empty() || any_field || !record.empty()) flush_record();
    return table;
}

} // namespace mvnlab
