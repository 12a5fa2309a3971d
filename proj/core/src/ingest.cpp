#include "pvtwin/ingest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pvtwin/csv.hpp"

namespace pvtwin {

namespace {

void add_error(IngestReport& report, std::size_t line, const std::string& message) {
    if (report.errors.size() < kIngestMaxReportedErrors)
        report.errors.push_back("line " + std::to_string(line) + ": " + message);
    else if (report.errors.size() == kIngestMaxReportedErrors)
        report.errors.push_back("(further row errors suppressed)");
}

bool parse_number(const std::string& field, double& out) {
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = first + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

struct ColumnSet {
    std::vector<int> required;  // column indices, [0] is the timestamp
    std::vector<int> optional;  // -1 when absent
};

bool resolve_columns(const CsvTable& table, const std::vector<std::string>& required_names,
                     const std::vector<std::string>& optional_names, ColumnSet& cols,
                     IngestReport& report) {
    for (const auto& name : required_names) {
        const int idx = table.column(name);
        if (idx < 0) {
            report.errors.push_back("line 1: missing required column '" + name + "'");
            return false;
        }
        cols.required.push_back(idx);
    }
    for (const auto& name : optional_names) cols.optional.push_back(table.column(name));
    return true;
}

// Shared row walk: validates the timestamp and the required numeric fields,
// then hands each accepted row to `emit`. Returns false when the file as a
// whole must be rejected.
template <typename Emit>
bool walk_rows(const CsvTable& table, const ColumnSet& cols, IngestReport& report, Emit emit) {
    bool have_prev = false;
    Timestamp prev{};
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.row_lines[r];
        ++report.total_rows;

        const std::string& ts_field = row[static_cast<std::size_t>(cols.required[0])];
        Timestamp ts{};
        if (!parse_timestamp(ts_field, ts)) {
            ++report.dropped_rows;
            add_error(report, line, "unparseable timestamp '" + ts_field + "'");
            continue;
        }
        if (have_prev && !(prev < ts)) {
            report.errors.push_back("line " + std::to_string(line) +
                                    ": duplicate or out-of-order timestamp " +
                                    format_timestamp(ts));
            return false;
        }

        std::vector<double> values(cols.required.size() - 1, 0.0);
        bool bad = false;
        for (std::size_t c = 1; c < cols.required.size(); ++c) {
            const std::string& field = row[static_cast<std::size_t>(cols.required[c])];
            if (!parse_number(field, values[c - 1])) {
                ++report.dropped_rows;
                add_error(report, line,
                          field.empty() ? "missing required field"
                                        : "non-numeric field '" + field + "'");
                bad = true;
                break;
            }
        }
        if (bad) continue;

        std::vector<double> extras(cols.optional.size(), 0.0);
        for (std::size_t c = 0; c < cols.optional.size(); ++c) {
            if (cols.optional[c] < 0) continue;
            const std::string& field = row[static_cast<std::size_t>(cols.optional[c])];
            if (!field.empty()) parse_number(field, extras[c]);  // bad optional -> 0
        }

        prev = ts;
        have_prev = true;
        ++report.accepted_rows;
        emit(ts, values, extras);
    }
    return true;
}

bool finalize(IngestReport& report) {
    if (report.drop_fraction() > kIngestMaxDropFraction) {
        report.errors.push_back("dropped " + std::to_string(report.dropped_rows) + " of " +
                                std::to_string(report.total_rows) +
                                " rows; exceeds the 10% malformed-row limit");
        return false;
    }
    report.ok = true;
    return true;
}

bool read_text_file(const std::string& path, std::string& text, std::string& error) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        error = "cannot open file: " + path;
        return false;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
    return true;
}

}  // namespace

ProductionSeries ingest_production_csv(const std::string& text, IngestReport& report) {
    report = IngestReport{};
    ProductionSeries out;
    CsvTable table;
    CsvError parse_error;
    if (!parse_csv(text, table, parse_error)) {
        report.errors.push_back(parse_error.message);
        return out;
    }

    ColumnSet cols;
    if (!resolve_columns(table,
                         {"timestamp", "g_poa", "t_amb", "t_cell", "i_dc", "v_dc", "p_dc",
                          "p_ac"},
                         {"i_l", "i_sc", "v_oc", "eta_cell", "eta_inv"}, cols, report))
        return out;

    const bool walked = walk_rows(
        table, cols, report,
        [&](const Timestamp& ts, const std::vector<double>& v, const std::vector<double>& e) {
            double g = v[0];
            if (g <= kIrradianceFloorWm2) {
                if (g != 0.0) ++report.zeroed_irradiance;
                g = 0.0;
            }
            out.t.push_back(ts);
            out.g_poa.push_back(g);
            out.t_amb.push_back(v[1]);
            out.t_cell.push_back(v[2]);
            out.i_dc.push_back(v[3]);
            out.v_dc.push_back(v[4]);
            out.p_dc.push_back(v[5]);
            out.p_ac.push_back(v[6]);
            out.i_l.push_back(e[0]);
            out.i_sc.push_back(e[1]);
            out.v_oc.push_back(e[2]);
            out.eta_cell.push_back(e[3]);
            out.eta_inv.push_back(e[4]);
        });
    if (!walked || !finalize(report)) return ProductionSeries{};
    return out;
}

ProductionSeries ingest_production_file(const std::string& path, IngestReport& report) {
    std::string text, error;
    if (!read_text_file(path, text, error)) {
        report = IngestReport{};
        report.errors.push_back(error);
        return ProductionSeries{};
    }
    return ingest_production_csv(text, report);
}

MeteoSeries ingest_meteo_csv(const std::string& text, IngestReport& report) {
    report = IngestReport{};
    MeteoSeries out;
    CsvTable table;
    CsvError parse_error;
    if (!parse_csv(text, table, parse_error)) {
        report.errors.push_back(parse_error.message);
        return out;
    }
    ColumnSet cols;
    if (!resolve_columns(table, {"timestamp", "ghi", "g_poa", "t_amb", "t_cell"}, {}, cols,
                         report))
        return out;
    const bool walked = walk_rows(
        table, cols, report,
        [&](const Timestamp& ts, const std::vector<double>& v, const std::vector<double>&) {
            double ghi = v[0];
            double g = v[1];
            if (ghi <= kIrradianceFloorWm2 && ghi != 0.0) ghi = 0.0;
            if (g <= kIrradianceFloorWm2) {
                if (g != 0.0) ++report.zeroed_irradiance;
                g = 0.0;
            }
            out.t.push_back(ts);
            out.ghi.push_back(ghi);
            out.g_poa.push_back(g);
            out.t_amb.push_back(v[2]);
            out.t_cell.push_back(v[3]);
        });
    if (!walked || !finalize(report)) return MeteoSeries{};
    return out;
}

MeteoSeries ingest_meteo_file(const std::string& path, IngestReport& report) {
    std::string text, error;
    if (!read_text_file(path, text, error)) {
        report = IngestReport{};
        report.errors.push_back(error);
        return MeteoSeries{};
    }
    return ingest_meteo_csv(text, report);
}

namespace {

std::vector<std::pair<Date, double>> integrate_daily(const std::vector<Timestamp>& t,
                                                     const std::vector<double>& values) {
    if (t.size() != values.size())
        throw std::invalid_argument("daily integration: ragged inputs");
    std::vector<std::pair<Date, double>> out;
    const double hours_per_sample = static_cast<double>(kSlotMinutes) / 60.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (out.empty() || !(out.back().first == t[i].date)) out.push_back({t[i].date, 0.0});
        out.back().second += values[i] * hours_per_sample;
    }
    return out;
}

}  // namespace

std::vector<std::pair<Date, double>> daily_energy_wh(const std::vector<Timestamp>& t,
                                                     const std::vector<double>& p_ac) {
    return integrate_daily(t, p_ac);
}

std::vector<std::pair<Date, double>> daily_insolation_whm2(const std::vector<Timestamp>& t,
                                                           const std::vector<double>& g_poa) {
    return integrate_daily(t, g_poa);
}

}  // namespace pvtwin
