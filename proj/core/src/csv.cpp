#include "pvtwin/csv.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pvtwin {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

// splits one physical line; returns false on unbalanced quotes
bool split_line(const std::string& line, std::vector<std::string>& cells) {
    cells.clear();
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) return false;
    cells.push_back(std::move(cur));
    return true;
}

}  // namespace

bool parse_csv(const std::string& text, CsvTable& out, CsvError& err) {
    out = CsvTable{};
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        if (!split_line(line, cells)) {
            err.message = "unbalanced quotes at line " + std::to_string(line_no);
            return false;
        }
        if (line_no == 1) {
            out.header = std::move(cells);
        } else {
            out.rows.push_back(std::move(cells));
            out.row_lines.push_back(line_no);
        }
    }
    if (out.header.empty()) {
        err.message = "empty CSV (no header row)";
        return false;
    }
    return true;
}

bool read_csv_file(const std::string& path, CsvTable& out, CsvError& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err.message = "cannot open " + path;
        return false;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), out, err);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    assert(columns_ > 0);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

void CsvWriter::add_row() {
    assert(!row_open_ || cells_in_row_ == columns_);
    if (row_open_) out_ += '\n';
    row_open_ = true;
    cells_in_row_ = 0;
}

void CsvWriter::add(const std::string& cell) {
    assert(row_open_ && cells_in_row_ < columns_);
    if (cells_in_row_) out_ += ',';
    if (cell.find_first_of(",\"\n") != std::string::npos) {
        out_ += '"';
        for (const char c : cell) {
            if (c == '"') out_ += '"';
            out_ += c;
        }
        out_ += '"';
    } else {
        out_ += cell;
    }
    ++cells_in_row_;
}

std::string CsvWriter::format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";  // normalizes -0
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void CsvWriter::add(double value) { add(format_double(value)); }
void CsvWriter::add(int value) { add(std::to_string(value)); }
void CsvWriter::add(long long value) { add(std::to_string(value)); }

std::string CsvWriter::str() const {
    assert(!row_open_ || cells_in_row_ == columns_);
    return row_open_ ? out_ + "\n" : out_;
}

bool CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    const std::string s = str();
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
    return static_cast<bool>(out);
}

}  // namespace pvtwin
