#include "hyperroad/csv.hpp"

#include "hyperroad/errors.hpp"

namespace hyperroad {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
        out.back().pop_back();
    }
    return out;
}

CsvReader::CsvReader(std::istream& in, std::string source_name)
    : in_(in), source_name_(std::move(source_name)) {
    std::string line;
    if (!std::getline(in_, line)) {
        throw FileError(source_name_ + ": empty file, expected header row");
    }
    ++line_no_;
    header_ = split_csv_line(line);
}

bool CsvReader::next(CsvRow& row) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        if (line.empty() || line == "\r") continue;
        row.fields = split_csv_line(line);
        row.line_no = line_no_;
        if (row.fields.size() != header_.size()) {
            throw FileError(source_name_ + ": line " + std::to_string(line_no_) + ": expected " +
                            std::to_string(header_.size()) + " fields, got " +
                            std::to_string(row.fields.size()));
        }
        return true;
    }
    return false;
}

}  // namespace hyperroad
