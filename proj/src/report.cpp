#include "birkhoff/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace birkhoff {

FitResult rate_fit(const std::vector<std::pair<double, double>>& rows) {
    FitResult out;
    std::vector<std::pair<double, double>> kept;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].second <= 0.0) {
            out.degenerate = true;
            out.excluded.push_back(i);
        } else {
            kept.emplace_back(std::log(rows[i].first), std::log(rows[i].second));
        }
    }
    if (kept.size() < 3) {
        out.degenerate = true;
        return out;
    }
    double n = static_cast<double>(kept.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : kept) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    double ss = 0;
    for (auto& [x, y] : kept) {
        double r = y - (out.intercept + out.slope * x);
        ss += r * r;
    }
    if (kept.size() > 2)
        out.stderr_slope = std::sqrt(ss / (n - 2) / (sxx - sx * sx / n));
    return out;
}

std::string rate_report_csv(const RateReport& r, const std::string& index_name) {
    std::ostringstream os;
    os << index_name << ",sup_abs_num,sup_abs_den,bound_num,bound_den,ratio_float\n";
    char buf[64];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%.17g", row.ratio);
        os << row.index << "," << rat_num(row.sup_abs).str() << "," << rat_den(row.sup_abs).str()
           << "," << rat_num(row.bound).str() << "," << rat_den(row.bound).str() << "," << buf
           << "\n";
    }
    return os.str();
}

} // namespace birkhoff
