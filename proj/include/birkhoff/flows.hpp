#pragma once

#include <vector>

#include "birkhoff/odometer.hpp"
#include "birkhoff/piecewise.hpp"

namespace birkhoff {
namespace flows {

// --- circle rotation -------------------------------------------------------

// T_t x = {x + t} on [0, 1).
Rat circle_evolve(const Rat& x, const Rat& t);

// Exact A(f, t, x) = (1/t) * integral_x^{x+t} f, for period-1 f.
Rat birkhoff_avg_rotation(const PiecewiseConst& f, const Rat& t, const Rat& x);

struct PeriodicBoundReport {
    Rat lhs; // |A(f,t,x) - mean(f)|
    Rat rhs; // (2/t) * integral_0^1 |f(T_s x)| ds
    bool holds() const { return lhs <= rhs; }
};

// Periodic-orbit estimate for the rotation (every point has period 1).
PeriodicBoundReport periodic_bound_check(const PiecewiseConst& f, const Rat& t, const Rat& x);

// --- suspension flow over the odometer -------------------------------------

// Unit-speed vertical flow with base jump x -> Sx at the roof.
SquarePoint odometer_flow_evolve(const SquarePoint& p, const Rat& t);

// One term f_n of a tower series: a function on M_n = [0, 2^-n) x [0, 2^n)
// given by finitely many x_n-slices, each with a piecewise-constant column
// profile of period 2^n and zero column integral.
class TowerFunction {
  public:
    struct Slice {
        Dyadic x_lo; // slice covers [x_lo, x_hi) in the base
        Dyadic x_hi;
        PiecewiseConst profile;
    };

    // Constant-in-x term.
    TowerFunction(unsigned level, PiecewiseConst profile);
    TowerFunction(unsigned level, std::vector<Slice> slices);

    unsigned level() const { return level_; }
    const std::vector<Slice>& slices() const { return slices_; }
    const PiecewiseConst& profile_at(const Dyadic& x_n) const;

    Rat height() const { return pow2_rat(static_cast<long>(level_)); }
    Rat sup_norm() const { return sup_norm_; }
    // ||f_n||_{inf,1} = sup over slices of the column L1 norm.
    Rat infty1_norm() const { return infty1_norm_; }

    Rat eval(const SquarePoint& p) const;

  private:
    unsigned level_;
    std::vector<Slice> slices_;
    Rat sup_norm_;
    Rat infty1_norm_;
};

// Exact A(f_n, t, p) via the proof decomposition: head integral to the roof,
// full columns (zero by the column-integral condition), tail integral from
// the advanced base point. Cost is O(pieces), independent of t.
Rat avg_tower_term(const TowerFunction& term, const Rat& t, const SquarePoint& p);

// f = sum of finitely many tower terms with strictly increasing levels.
class SeriesFunction {
  public:
    explicit SeriesFunction(std::vector<TowerFunction> terms);

    const std::vector<TowerFunction>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    // sum_{m > trunc} of per-term sup norms / infty1 norms (stored terms).
    Rat sup_tail_after(std::size_t trunc) const;
    Rat infty1_tail_after(std::size_t trunc) const;
    Rat infty1_total() const { return infty1_tail_after(0); }

    Rat eval(const SquarePoint& p) const;

  private:
    std::vector<TowerFunction> terms_;
    std::vector<Rat> sup_suffix_;    // sup_suffix_[i] = sum_{m >= i} sup
    std::vector<Rat> infty1_suffix_;
};

// Certified A(f, t, p): exact sum of the first `trunc` terms plus a
// t-independent-valid tail bound min(sum of sup norms, (2/t) sum of
// infty1 norms) over the remaining stored terms.
CertifiedValue birkhoff_avg_tower(const SeriesFunction& f, const Rat& t, const SquarePoint& p,
                                  std::size_t trunc);

// --- independent oracle -----------------------------------------------------

struct RiemannResult {
    Rat value;     // left-endpoint Riemann sum of A(f, t, p) at the given step
    Rat variation; // total variation of s -> f(T_s p) over [0, t], exact
};

// Brute-force oracle: steps along the orbit on a uniform dyadic grid. Exact
// rational output; t must be a multiple of the step.
RiemannResult riemann_oracle_tower(const TowerFunction& term, const Rat& t, const SquarePoint& p,
                                   const Rat& step);

// Same for the circle rotation.
Rat riemann_oracle_rotation(const PiecewiseConst& f, const Rat& t, const Rat& x, const Rat& step);

} // namespace flows
} // namespace birkhoff
