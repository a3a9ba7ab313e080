#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ddball {

// Fixed-precision formatting so identical runs give identical bytes.
std::string format_double(double v);
std::string csv_escape(const std::string& s);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row);
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    void write(std::ostream& out) const;
    // Writes to `path`, or to standard output when path is empty or "-".
    void save(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace ddball
