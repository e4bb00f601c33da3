#pragma once

#include <cstdint>
#include <vector>

#include "birkhoff/phi.hpp"
#include "birkhoff/piecewise.hpp"

namespace birkhoff {
namespace rudolph {

// One stage of the two-column special flow: a short column of height h over
// a base of width c_w and a tall column of height h + eps over width d_w,
// normalized to total measure one.
struct RudolphParams {
    Rat h;     // short roof
    Rat eps;   // tall roof excess, roof_tall = h + eps
    Rat c_w;   // short base width
    Rat d_w;   // tall base width
    Rat delta; // window fraction, t = h * delta
    Rat a;     // amplitude

    Rat t() const { return h * delta; }
    Rat roof_short() const { return h; }
    Rat roof_tall() const { return h + eps; }
    Rat base_total() const { return c_w + d_w; }

    void validate() const; // measure-1 constraint and ranges
};

enum class Column { Short, Tall };

struct RudolphPoint {
    Column column = Column::Short;
    Rat x; // within the column base
    Rat y; // in [0, roof(column))
};

// Exact interval exchange on the union of the two bases [0, c_w + d_w):
// rotation by a configured rational (a convergent of a quadratic irrational).
struct BaseMap {
    Rat shift;
    Rat total;

    Rat apply(const Rat& u) const { return mod_rat(u + shift, total); }
};

BaseMap default_base_map(const RudolphParams& p);

// Height profile of f_n: +a on [0, h/4), -a on [h/2, 3h/4), 0 elsewhere.
Rat fn_rudolph(const Rat& y, const RudolphParams& p);

// The same profile as step data on [0, roof(column)).
PiecewiseConst column_profile(const RudolphParams& p, Column col);

RudolphPoint rudolph_evolve(const RudolphPoint& pt, const Rat& t, const RudolphParams& p,
                            const BaseMap& base);

// Exact distribution of A(f_n, t_n, .) over starts that do not cross the
// roof within the window; crossing starts are reported as a bounded
// exceptional set.
struct StageDistribution {
    Rat plus_measure;  // {A = +a}
    Rat minus_measure; // {A = -a}
    Rat zero_measure;
    Rat ramp_measure;
    Rat exceptional_bound; // roof-crossing starts: measure <= (c_w + d_w) t
    Rat mD;                // plus + minus
    Rat mD_formula;        // 2 (1/4 - delta)(1 - eps d_w)
    Rat mD_lower;          // 1/2 - 2 delta - eps d_w / 2
};

StageDistribution stage_distribution(const RudolphParams& p);

struct StageSchedule {
    std::vector<RudolphParams> stages;

    const RudolphParams& stage(std::size_t n) const { return stages.at(n - 1); } // 1-based
    Rat tail_sum(std::size_t n) const;                                           // sum_{m>n} a_m
    // upper bound including terms beyond the stored prefix (a_m = 2^-m^2)
    Rat tail_sum_upper(std::size_t n) const;
    Rat alpha(std::size_t n) const; // tail_sum / a_n
    // paper estimate for the earlier terms: (2/t_n) sum_{m<n} a_m h_m
    Rat earlier_bound(std::size_t n) const;
    // condition (I) prefix sum: sum (eps_n d_n + 4 delta_n)
    Rat condition1_sum() const;
};

// Solves h_n (powers of two) for the fixed sequences a_n = 2^-n^2,
// delta_n = 2^-(n+3), eps_n = 2^-n, with d_n and c_w from the measure-1
// constraint; each h_n is the smallest admissible power of two making the
// prefix conditions hold and the certified phi-ratio grow by the factor
// `growth` per stage. Exponents above `exponent_cap` raise PhiTooSlow.
StageSchedule stage_schedule_solve(std::size_t N, const Phi& phi, unsigned exponent_cap = 1000000,
                                   const Rat& growth = Rat(16));

struct PhiRatioRow {
    std::size_t n = 0;
    RatInterval certified_abs; // |A(f, t_n, .)| at plateau points
    RatInterval phi;
    RatInterval ratio;
};

struct PhiRatioReport {
    std::vector<PhiRatioRow> rows;
    bool strictly_increasing = true;
};

PhiRatioReport phi_ratio_experiment(const StageSchedule& sched, const Phi& phi,
                                    std::size_t samples_per_stage, std::uint64_t seed);

} // namespace rudolph
} // namespace birkhoff
