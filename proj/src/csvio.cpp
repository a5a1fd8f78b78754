#include "qoc/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qoc/errors.hpp"

namespace qoc {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    for (size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << '\n';
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_csv_numeric(const std::string& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
    std::vector<std::vector<std::string>> cells(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        cells[r].reserve(rows[r].size());
        for (double x : rows[r]) cells[r].push_back(format_double(x));
    }
    write_csv(path, header, cells);
}

CsvTable read_csv_numeric(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("'" + path + "' is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    const size_t n_cols = table.header.size();
    if (n_cols == 0) throw ValidationError("'" + path + "' has an empty header");

    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw ValidationError("'" + path + "' line " + std::to_string(line_no) +
                                      ": '" + cell + "' is not a number");
            }
            if (used != cell.size())
                throw ValidationError("'" + path + "' line " + std::to_string(line_no) +
                                      ": '" + cell + "' is not a number");
            row.push_back(x);
        }
        if (row.size() != n_cols)
            throw ValidationError("'" + path + "' line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(n_cols) + " columns, got " +
                                  std::to_string(row.size()));
        rows.push_back(std::move(row));
    }

    table.values.resize(rows.size(), n_cols);
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < n_cols; ++c) table.values(r, c) = rows[r][c];
    return table;
}

void write_pulse_csv(const std::string& path, const ControlSequence& seq) {
    seq.validate();
    std::vector<std::string> header{"t_ps"};
    for (int v = 0; v < seq.n_qubits(); ++v)
        header.push_back("dng" + std::to_string(v + 1));
    std::vector<std::vector<double>> rows(seq.n_slices);
    for (int k = 0; k < seq.n_slices; ++k) {
        rows[k].push_back(seq.slice_mid(k));
        for (int v = 0; v < seq.n_qubits(); ++v) rows[k].push_back(seq.amplitudes(k, v));
    }
    write_csv_numeric(path, header, rows);
}

ControlSequence read_pulse_csv(const std::string& path) {
    const CsvTable table = read_csv_numeric(path);
    if (table.header.size() < 2 || table.header[0] != "t_ps")
        throw ValidationError("'" + path + "': pulse files start with a t_ps column");
    const int n = static_cast<int>(table.values.rows());
    if (n < 1) throw ValidationError("'" + path + "' has no slices");

    ControlSequence seq;
    seq.n_slices = n;
    // rows hold slice midpoints (k + 1/2) dt, so dt = 2 t_0 even for one slice
    seq.dt = 2.0 * table.values(0, 0);
    if (!(seq.dt > 0.0))
        throw ValidationError("'" + path + "': first midpoint must be positive");
    for (int k = 0; k < n; ++k) {
        const double expected = (k + 0.5) * seq.dt;
        if (std::abs(table.values(k, 0) - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
            throw ValidationError("'" + path + "': time grid is not uniform at row " +
                                  std::to_string(k + 2));
    }
    seq.amplitudes = table.values.rightCols(table.values.cols() - 1);
    seq.validate();
    return seq;
}

}  // namespace qoc
