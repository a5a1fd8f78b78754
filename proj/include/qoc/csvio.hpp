#pragma once

#include <string>
#include <vector>

#include "qoc/sequence.hpp"

namespace qoc {

// Shortest exact decimal form (%.17g): reruns must be byte-identical and
// values must survive a read-back untouched.
std::string format_double(double x);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_csv_numeric(const std::string& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    MatrixXd values;
};

// Numeric table with a header line.  Missing file -> IoError; malformed
// content -> ValidationError naming the line.
CsvTable read_csv_numeric(const std::string& path);

// Pulse files: header t_ps,dng1,dng2[,...]; one row per slice, t at the
// slice midpoint (so dt = 2 t_0 reads back exactly, single-slice files
// included).
void write_pulse_csv(const std::string& path, const ControlSequence& seq);
ControlSequence read_pulse_csv(const std::string& path);

}  // namespace qoc
