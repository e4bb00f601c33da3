#include "birkhoff/rudolph.hpp"

#include <random>

namespace birkhoff {
namespace rudolph {

void RudolphParams::validate() const {
    if (!(h > 0 && eps > 0 && c_w > 0 && d_w > 0 && a > 0))
        throw Error("RudolphParams: h, eps, widths and amplitude must be positive");
    if (!(delta > 0 && delta < Rat(1, 4)))
        throw Error("RudolphParams: delta must lie in (0, 1/4)");
    if (h * c_w + (h + eps) * d_w != 1)
        throw Error("RudolphParams: measure-1 constraint h c + (h+eps) d = 1 violated");
}

BaseMap default_base_map(const RudolphParams& p) {
    // rotation by the golden-mean convergent 13/21 of the base circle
    Rat total = p.base_total();
    return BaseMap{total * Rat(13, 21), total};
}

Rat fn_rudolph(const Rat& y, const RudolphParams& p) {
    if (y < 0 || y >= p.roof_tall()) throw Error("fn_rudolph: y outside the column range");
    if (y < p.h / 4) return p.a;
    if (y >= p.h / 2 && y < 3 * p.h / 4) return -p.a;
    return Rat(0);
}

PiecewiseConst column_profile(const RudolphParams& p, Column col) {
    Rat roof = col == Column::Short ? p.roof_short() : p.roof_tall();
    return PiecewiseConst(roof, {Rat(0), p.h / 4, p.h / 2, 3 * p.h / 4, roof},
                          {p.a, Rat(0), -p.a, Rat(0)});
}

namespace {

Rat base_pos(const RudolphPoint& pt, const RudolphParams& p) {
    return pt.column == Column::Short ? pt.x : p.c_w + pt.x;
}

RudolphPoint from_base(const Rat& u, const RudolphParams& p) {
    if (u < p.c_w) return RudolphPoint{Column::Short, u, Rat(0)};
    return RudolphPoint{Column::Tall, u - p.c_w, Rat(0)};
}

} // namespace

RudolphPoint rudolph_evolve(const RudolphPoint& pt, const Rat& t, const RudolphParams& p,
                            const BaseMap& base) {
    if (t < 0) throw Error("rudolph_evolve: t must be nonnegative");
    RudolphPoint cur = pt;
    Rat rem = t;
    for (;;) {
        Rat roof = cur.column == Column::Short ? p.roof_short() : p.roof_tall();
        Rat room = roof - cur.y;
        if (rem < room) {
            cur.y += rem;
            return cur;
        }
        rem -= room;
        cur = from_base(base.apply(base_pos(cur, p)), p);
    }
}

StageDistribution stage_distribution(const RudolphParams& p) {
    p.validate();
    StageDistribution out;
    Rat t = p.t();
    out.plus_measure = out.minus_measure = out.zero_measure = out.ramp_measure = Rat(0);
    for (Column col : {Column::Short, Column::Tall}) {
        Rat width = col == Column::Short ? p.c_w : p.d_w;
        Rat roof = col == Column::Short ? p.roof_short() : p.roof_tall();
        if (!(t < roof)) throw Error("stage_distribution: window exceeds the column height");
        PiecewiseConst prof = column_profile(p, col);
        PiecewiseLinear g = window_average_profile(prof, t);
        Rat lim = roof - t; // non-crossing starts
        auto plus = g.level_set_measures_on(p.a, Rat(0), lim);
        auto minus = g.level_set_measures_on(-p.a, Rat(0), lim);
        auto zero = g.level_set_measures_on(Rat(0), Rat(0), lim);
        out.plus_measure += width * plus.eq;
        out.minus_measure += width * minus.eq;
        out.zero_measure += width * zero.eq;
        out.ramp_measure += width * (lim - plus.eq - minus.eq - zero.eq);
    }
    out.exceptional_bound = p.base_total() * t;
    out.mD = out.plus_measure + out.minus_measure;
    out.mD_formula = 2 * (Rat(1, 4) - p.delta) * (Rat(1) - p.eps * p.d_w);
    out.mD_lower = Rat(1, 2) - 2 * p.delta - p.eps * p.d_w / 2;
    return out;
}

Rat StageSchedule::tail_sum(std::size_t n) const {
    Rat s = 0;
    for (std::size_t m = n + 1; m <= stages.size(); ++m) s += stage(m).a;
    return s;
}

Rat StageSchedule::tail_sum_upper(std::size_t n) const {
    // sum_{m>n} 2^-m^2 <= 2^-(n+1)^2 * 32/31 for the solver's amplitudes
    long e = static_cast<long>((n + 1) * (n + 1));
    return pow2_rat(-e) * Rat(32, 31);
}

Rat StageSchedule::alpha(std::size_t n) const { return tail_sum(n) / stage(n).a; }

Rat StageSchedule::earlier_bound(std::size_t n) const {
    Rat s = 0;
    for (std::size_t m = 1; m < n; ++m) s += stage(m).a * stage(m).h;
    return 2 * s / stage(n).t();
}

Rat StageSchedule::condition1_sum() const {
    Rat s = 0;
    for (const auto& st : stages) s += st.eps * st.d_w + 4 * st.delta;
    return s;
}

StageSchedule stage_schedule_solve(std::size_t N, const Phi& phi, unsigned exponent_cap,
                                   const Rat& growth) {
    if (N < 1) throw Error("stage_schedule_solve: N >= 1 required");
    StageSchedule sched;
    Rat prev_ratio_hi = 0;
    Rat h_sum = 0; // h_1 + ... + h_{n-1}
    for (std::size_t n = 1; n <= N; ++n) {
        Rat a = pow2_rat(-static_cast<long>(n * n));
        Rat delta = pow2_rat(-static_cast<long>(n + 3));
        Rat eps = pow2_rat(-static_cast<long>(n));
        // amplitude tail from the closed form, upper bound
        Rat tail_hi = pow2_rat(-static_cast<long>((n + 1) * (n + 1))) * Rat(32, 31);

        // t_n = h delta = 2^(k - n - 3); k is aligned so t_n is a 4th
        // power, which keeps phi exact for the power kind. Feasibility is
        // monotone in k, so bisect over the aligned exponents.
        Rat earlier_mass = 0; // sum a_m h_m over solved stages
        for (std::size_t m = 1; m < n; ++m) earlier_mass += sched.stage(m).a * sched.stage(m).h;
        auto feasible = [&](unsigned long long kk) {
            Rat h = pow2_rat(static_cast<long>(kk));
            Rat t = h * delta;
            // condition (III) first part, prefix form
            if (n > 1 && !(h_sum <= pow2_rat(-static_cast<long>(n)) * h * a * delta)) return false;
            // rounding the slack to 64 dyadic digits keeps every operand
            // small; the check stays conservative
            Rat slack = ceil_to_dyadic(2 * earlier_mass / t + tail_hi, 64);
            if (!(slack < a)) return false; // plateau value must dominate its own bounds
            if (n == 1) return true;
            return a - slack >= growth * prev_ratio_hi * phi.enclosure(t).hi;
        };
        // aligned exponents are k = n + 3 + 4j; find the minimal feasible j
        auto k_of = [&](unsigned long long j) { return n + 3 + 4 * j; };
        unsigned long long j_lo = 1; // h >= 2^(n+7)
        unsigned long long j_cap = (exponent_cap > n + 3) ? (exponent_cap - n - 3) / 4 : 0;
        unsigned long long k;
        if (feasible(k_of(j_lo))) {
            k = k_of(j_lo);
        } else {
            if (j_cap <= j_lo || !feasible(k_of(j_cap)))
                throw PhiTooSlow("stage " + std::to_string(n) +
                                 " requires tower exponent above the cap " +
                                 std::to_string(exponent_cap) + " for phi = " + phi.describe());
            unsigned long long bad = j_lo, good = j_cap;
            while (good - bad > 1) {
                unsigned long long mid = bad + (good - bad) / 2;
                if (feasible(k_of(mid)))
                    good = mid;
                else
                    bad = mid;
            }
            k = k_of(good);
        }
        Rat h = pow2_rat(static_cast<long>(k));
        Rat t = h * delta;
        Rat slack = ceil_to_dyadic(2 * earlier_mass / t + tail_hi, 64);
        RatInterval phi_t = phi.enclosure(t);
        RudolphParams p;
        p.h = h;
        p.eps = eps;
        p.delta = delta;
        p.a = a;
        p.d_w = Rat(1, 4) / (h + eps); // (h + eps) d = 1/4
        p.c_w = Rat(3, 4) / h;         // h c = 3/4
        p.validate();
        sched.stages.push_back(p);
        prev_ratio_hi = (a + slack) / phi_t.lo;
        h_sum += h;
    }
    // condition (I): prefix sum strictly below 1
    if (!(sched.condition1_sum() < 1))
        throw Error("stage_schedule_solve: condition (I) prefix sum reached 1");
    return sched;
}

PhiRatioReport phi_ratio_experiment(const StageSchedule& sched, const Phi& phi,
                                    std::size_t samples_per_stage, std::uint64_t seed) {
    PhiRatioReport rep;
    std::mt19937_64 rng(seed);
    auto rand01 = [&](unsigned depth) {
        return Rat(Int(rng() >> (64 - depth)), pow2_int(depth));
    };
    for (std::size_t n = 1; n <= sched.stages.size(); ++n) {
        const RudolphParams& p = sched.stage(n);
        Rat t = p.t();
        Rat earlier = sched.earlier_bound(n);
        Rat tail = sched.tail_sum_upper(n);
        PhiRatioRow row;
        row.n = n;
        bool first = true;
        for (std::size_t i = 0; i < samples_per_stage; ++i) {
            // plateau starts: window [y, y+t] inside the +a band [0, h/4)
            Rat span = p.h / 4 - t;
            Rat y = rand01(40) * span;
            Column col = (rng() & 1) ? Column::Tall : Column::Short;
            PiecewiseConst prof = column_profile(p, col);
            Rat v = prof.integrate(y, y + t) / t; // exact, = a on the plateau
            Rat lo = abs_rat(v) - earlier - tail;
            if (lo < 0) lo = 0;
            RatInterval cert(lo, abs_rat(v) + earlier + tail);
            row.certified_abs = first ? cert : hull(row.certified_abs, cert);
            first = false;
        }
        row.phi = phi.enclosure(t);
        row.ratio = row.certified_abs / row.phi;
        rep.rows.push_back(std::move(row));
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i].ratio.lo > rep.rows[i - 1].ratio.hi)) rep.strictly_increasing = false;
    return rep;
}

} // namespace rudolph
} // namespace birkhoff
