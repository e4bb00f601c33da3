#include "birkhoff/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "birkhoff/errors.hpp"

namespace birkhoff {

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

void adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
           double fb, double whole, double tol, int depth, QuadratureResult& out) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, m, fa, flm, fm);
    double right = simpson(f, m, b, fm, frm, fb);
    double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth >= 48) {
        if (depth >= 48 && std::abs(err) > tol)
            throw ToleranceNotMet("adaptive quadrature stalled before reaching tolerance");
        out.value += left + right + err;
        out.error += std::abs(err);
        return;
    }
    adapt(f, a, m, fa, flm, fm, left, tol * 0.5, depth + 1, out);
    adapt(f, m, b, fm, frm, fb, right, tol * 0.5, depth + 1, out);
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    std::vector<double> breakpoints, double tol) {
    if (!(tol > 0)) throw ToleranceNotMet("tolerance must be positive");
    QuadratureResult out;
    if (a == b) return out;
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    breakpoints.erase(std::remove_if(breakpoints.begin(), breakpoints.end(),
                                     [&](double x) { return x < a || x > b; }),
                      breakpoints.end());
    std::size_t cells = breakpoints.size() - 1;
    for (std::size_t i = 0; i < cells; ++i) {
        double x0 = breakpoints[i], x1 = breakpoints[i + 1];
        if (!(x0 < x1)) continue;
        double xm = 0.5 * (x0 + x1);
        double f0 = f(x0), fm = f(xm), f1 = f(x1);
        double whole = simpson(f, x0, x1, f0, fm, f1);
        adapt(f, x0, x1, f0, fm, f1, whole, tol / static_cast<double>(cells), 0, out);
    }
    return out;
}

} // namespace birkhoff
