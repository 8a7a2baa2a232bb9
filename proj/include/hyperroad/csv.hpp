#pragma once

#include <istream>
#include <string>
#include <vector>

namespace hyperroad {

// Minimal CSV support: comma-separated, no quoting (ids and numbers only),
// trailing \r tolerated. Empty field = missing value.
struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
};

class CsvReader {
public:
    CsvReader(std::istream& in, std::string source_name);

    const std::vector<std::string>& header() const { return header_; }
    const std::string& source() const { return source_name_; }

    // false at EOF; throws FileError on column-count mismatch
    bool next(CsvRow& row);

private:
    std::istream& in_;
    std::string source_name_;
    std::vector<std::string> header_;
    std::size_t line_no_ = 0;
};

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace hyperroad
