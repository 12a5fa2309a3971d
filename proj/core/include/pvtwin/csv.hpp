#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pvtwin {

// Plain-text CSV table. Cells are kept as strings; typed access converts on
// demand so ingest can report malformed cells with their line numbers.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based source line of each row (header is line 1)
    std::vector<std::size_t> row_lines;

    // index of a header column, -1 when absent
    int column(const std::string& name) const;
};

struct CsvError {
    std::string message;
};

// Reads the whole file. Quoted fields with embedded commas/quotes are
// supported ("" escapes a quote); newlines inside quotes are not.
bool read_csv_file(const std::string& path, CsvTable& out, CsvError& err);
bool parse_csv(const std::string& text, CsvTable& out, CsvError& err);

// Row-oriented writer with deterministic number formatting: doubles are
// emitted via std::to_chars (shortest round-trip form), so equal inputs
// always produce identical bytes.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row();
    void add(const std::string& cell);
    void add(double value);
    void add(int value);
    void add(long long value);

    std::string str() const;
    bool write_file(const std::string& path) const;

    static std::string format_double(double value);

private:
    std::size_t columns_;
    std::string out_;
    std::size_t cells_in_row_ = 0;
    bool row_open_ = false;
};

}  // namespace pvtwin
