#include <ddball/csv.hpp>
#include <ddball/types.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace ddball {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw Error("CSV row width does not match the header");
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << csv_escape(cells[k]);
        out << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

void CsvTable::save(const std::string& path) const {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error("cannot write '" + path + "'");
    write(f);
}

}  // namespace ddball
