#pragma once

// Parameter-surface scans over real cat amplitudes (alpha, omega) at fixed
// measurement settings, with CSV/JSON emission. Output is a pure function
// of the grid: identical bytes across runs and worker counts.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "catbell/analytic.hpp"

namespace catbell {

struct AxisRange {
    double min = 0.0;
    double max = 0.0;
    int steps = 0;  // >= 2
};

struct ScanGrid {
    AxisRange alpha_range;
    AxisRange omega_range;
    MeasurementSettings settings;
    double phi = 0.0;
};

struct ScanRecord {
    double alpha = 0.0;
    double omega = 0.0;
    double e_zw = 0.0;
    double e_zpw = 0.0;
    double e_zwp = 0.0;
    double e_zpwp = 0.0;
    double chsh = 0.0;
    Classification classification = Classification::Classical;
};

struct ScanResult {
    std::vector<ScanRecord> records;                  // row-major over (alpha, omega)
    std::vector<std::pair<double, double>> skipped;   // degenerate grid points, grid order
};

// Evaluates every grid point; degenerate points are skipped and reported,
// not zero-filled. `workers` only partitions the work, never the output.
ScanResult run_scan(const ScanGrid& grid, int workers = 1);

struct ScanSummary {
    double max_abs_chsh = 0.0;
    double argmax_alpha = 0.0;
    double argmax_omega = 0.0;
    std::size_t violating = 0;
    std::size_t total = 0;

    double violating_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(violating) / static_cast<double>(total);
    }
};

// Max |chsh| over the records; ties broken by smallest (alpha, then omega).
// Throws EmptyScanError on an empty list.
ScanSummary summarize(const std::vector<ScanRecord>& records);

// Header `alpha,omega,E_zw,E_zpw,E_zwp,E_zpwp,chsh,classification`, one line
// per record. Numbers use 17 significant digits, '.' decimal separator,
// no locale dependence.
void write_scan_csv(const std::vector<ScanRecord>& records, std::ostream& out);

// JSON mirror with identical field names.
nlohmann::json scan_to_json(const std::vector<ScanRecord>& records);

// 17-significant-digit decimal formatting shared by the writers.
std::string format_double(double value);

const char* to_string(Classification c);

}  // namespace catbell
