#pragma once

#include <string>
#include <vector>

#include "pam/config.hpp"

namespace pam {

// One line of the cross-engine comparison table. Fields that do not apply to
// a given engine are NaN and serialize as empty CSV cells.
struct ReportRow {
    std::string engine;       // variational | prediction | fk | chaos | hyper
    double p = 0.0;
    double q = 0.0;           // hyper rows only
    double lambda = 0.0;
    double t = 0.0;
    double value = 0.0;       // engine-specific headline number
    double log_value = 0.0;
    double stderr_of_mean = 0.0;
    double norm_log_moment = 0.0;
    double prediction = 0.0;  // coefficient from the rate calculators
    double margin = 0.0;      // hyper rows: rhs + 2 se - lhs
    int heavy_tail = 0;
    double tail_proxy = 0.0;
    std::string error;        // nonempty if this row's engine failed
};

struct Report {
    RunConfig config;
    double E1 = 0.0;          // variational constant estimate at lambda = 1
    std::vector<ReportRow> rows;
    bool any_error = false;
};

// Full pipeline: variational E(1) -> predictions -> Feynman-Kac and chaos
// estimates -> hypercontractive margins. Engine failures become per-row
// error markers; the report is still produced.
Report run_report(const RunConfig& cfg);

std::string report_csv(const Report& report);
std::string report_summary(const Report& report);
std::string report_plotdata(const Report& report);

// Writes <out>_report.csv, <out>_summary.txt and <out>_plot.csv.
void write_report_files(const Report& report);

} // namespace pam
