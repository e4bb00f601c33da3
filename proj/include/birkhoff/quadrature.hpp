#pragma once

#include <functional>
#include <vector>

namespace birkhoff {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0; // absolute error estimate
};

// Composite Simpson quadrature over [a, b] split at the supplied interior
// breakpoints, with per-interval adaptive refinement until the Richardson
// error estimate meets tol. Throws ToleranceNotMet if refinement stalls.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    std::vector<double> breakpoints, double tol);

} // namespace birkhoff
