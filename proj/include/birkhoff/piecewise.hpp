#pragma once

#include <utility>
#include <vector>

#include "birkhoff/rational.hpp"

namespace birkhoff {

// Periodic step function: value values[i] on [breaks[i], breaks[i+1]),
// breaks[0] = 0, breaks.back() = period. Evaluation is right-continuous;
// boundary values never affect integrals.
class PiecewiseConst {
  public:
    PiecewiseConst(Rat period, std::vector<Rat> breaks, std::vector<Rat> values);

    static PiecewiseConst constant(const Rat& period, const Rat& value);

    const Rat& period() const { return period_; }
    const std::vector<Rat>& breaks() const { return breaks_; }
    const std::vector<Rat>& values() const { return values_; }

    Rat eval(const Rat& y) const;

    // Exact Lebesgue integral of the periodic extension over [a, b), a <= b.
    Rat integrate(const Rat& a, const Rat& b) const;

    Rat integral_over_period() const;
    Rat mean() const { return integral_over_period() / period_; }
    Rat l1_over_period() const;
    Rat sup_abs() const;
    // Total variation contributed by one period of jumps (wrap jump included).
    Rat variation_per_period() const;

    PiecewiseConst abs() const;

  private:
    std::size_t piece_index(const Rat& y_reduced) const;

    Rat period_;
    std::vector<Rat> breaks_;
    std::vector<Rat> values_;
};

// Continuous piecewise-affine function on the circle of circumference
// `period`; nodes span [0, period] with equal first and last value.
class PiecewiseLinear {
  public:
    PiecewiseLinear(Rat period, std::vector<std::pair<Rat, Rat>> nodes);

    const Rat& period() const { return period_; }
    const std::vector<std::pair<Rat, Rat>>& nodes() const { return nodes_; }

    Rat eval(const Rat& y) const;
    Rat max_value() const;
    Rat min_value() const;
    Rat max_abs() const;

    struct LevelMeasures {
        Rat eq; // measure of {y : g(y) = v} within one period
        Rat ge; // measure of {y : g(y) >= v}
    };
    LevelMeasures level_set_measures(const Rat& v) const;

    // Same measures restricted to [lo, hi] within one period (no wrap).
    LevelMeasures level_set_measures_on(const Rat& v, const Rat& lo, const Rat& hi) const;

    // Distinct values attained on flat segments, with total flat measure per value.
    std::vector<std::pair<Rat, Rat>> plateau_measures() const;
    // Total measure of non-flat (strictly monotone) segments.
    Rat ramp_measure() const;

  private:
    Rat period_;
    std::vector<std::pair<Rat, Rat>> nodes_;
};

// Sliding-window average profile g(y) = (1/w) * integral of f over [y, y+w).
// Exact: g is piecewise affine with breakpoints among {b_i - w, b_i} mod period.
PiecewiseLinear window_average_profile(const PiecewiseConst& f, const Rat& w);

// Exact interval with a certified remainder: the represented value lies in
// [exact - tail, exact + tail].
struct CertifiedValue {
    Rat exact;
    Rat tail;

    Rat lo() const { return exact - tail; }
    Rat hi() const { return exact + tail; }
    Rat abs_hi() const { return abs_rat(exact) + tail; }
    // Largest lower bound for |value| that the interval certifies.
    Rat abs_lo() const {
        Rat l = abs_rat(exact) - tail;
        return l > 0 ? l : Rat(0);
    }
};

} // namespace birkhoff
