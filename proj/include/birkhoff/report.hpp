#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "birkhoff/rational.hpp"

namespace birkhoff {

struct RateRow {
    std::string index;  // t or n, as text
    Rat sup_abs;        // certified sup |A| (upper end of the interval)
    Rat bound;          // theoretical bound asserted for this row
    double ratio = 0.0; // sup_abs / bound convenience column
};

struct FitResult {
    bool degenerate = false;          // some rows had sup|A| = 0
    std::vector<std::size_t> excluded; // their indices
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
};

struct RateReport {
    std::vector<RateRow> rows;
    bool bound_asserted = true;
    std::size_t violations = 0;
    std::string witness; // first violating row, if any
};

// Least-squares line through (log t, log sup|A|). Rows with zero values are
// excluded and reported rather than crashing the fit.
FitResult rate_fit(const std::vector<std::pair<double, double>>& rows);

std::string rate_report_csv(const RateReport& r, const std::string& index_name);

} // namespace birkhoff
