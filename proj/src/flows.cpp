#include "birkhoff/flows.hpp"

#include <algorithm>

namespace birkhoff {
namespace flows {

Rat circle_evolve(const Rat& x, const Rat& t) { return mod_rat(x + t, Rat(1)); }

Rat birkhoff_avg_rotation(const PiecewiseConst& f, const Rat& t, const Rat& x) {
    if (f.period() != 1) throw Error("birkhoff_avg_rotation expects period-1 profiles");
    if (t <= 0) throw Error("birkhoff_avg_rotation: t must be positive");
    return f.integrate(x, x + t) / t;
}

PeriodicBoundReport periodic_bound_check(const PiecewiseConst& f, const Rat& t, const Rat& x) {
    PeriodicBoundReport r;
    r.lhs = abs_rat(birkhoff_avg_rotation(f, t, x) - f.mean());
    // the orbit of any x covers one full period, so the orbit L1 equals the
    // spatial L1 norm
    r.rhs = Rat(2) * f.l1_over_period() / t;
    return r;
}

SquarePoint odometer_flow_evolve(const SquarePoint& p, const Rat& t) {
    if (t < 0) throw Error("odometer_flow_evolve: t must be nonnegative");
    Rat y = p.y + t;
    Int k = floor_rat(y);
    return SquarePoint{odometer::odometer_pow(p.x, k), y - Rat(k)};
}

TowerFunction::TowerFunction(unsigned level, PiecewiseConst profile)
    : TowerFunction(level, std::vector<Slice>{Slice{Dyadic(), Dyadic(Int(1), level), std::move(profile)}}) {}

TowerFunction::TowerFunction(unsigned level, std::vector<Slice> slices)
    : level_(level), slices_(std::move(slices)) {
    if (slices_.empty()) throw Error("TowerFunction: need at least one slice");
    Rat base_width = pow2_rat(-static_cast<long>(level_));
    Rat covered = 0;
    sup_norm_ = 0;
    infty1_norm_ = 0;
    for (std::size_t i = 0; i < slices_.size(); ++i) {
        const auto& s = slices_[i];
        if (!(s.x_lo < s.x_hi)) throw Error("TowerFunction: empty slice");
        if (i == 0 && !s.x_lo.is_zero()) throw Error("TowerFunction: slices must start at 0");
        if (i > 0 && s.x_lo != slices_[i - 1].x_hi)
            throw Error("TowerFunction: slices must partition the base");
        if (s.profile.period() != height())
            throw Error("TowerFunction: profile period must be 2^level");
        if (s.profile.integral_over_period() != 0)
            throw Error("TowerFunction: column integral must vanish (condition on every slice)");
        covered += s.x_hi.to_rat() - s.x_lo.to_rat();
        sup_norm_ = std::max(sup_norm_, s.profile.sup_abs());
        infty1_norm_ = std::max(infty1_norm_, s.profile.l1_over_period());
    }
    if (covered != base_width || slices_.back().x_hi.to_rat() != base_width)
        throw Error("TowerFunction: slices must cover [0, 2^-level)");
}

const PiecewiseConst& TowerFunction::profile_at(const Dyadic& x_n) const {
    for (const auto& s : slices_)
        if (s.x_lo <= x_n && x_n < s.x_hi) return s.profile;
    throw Error("TowerFunction: base point outside [0, 2^-level): " + x_n.to_string());
}

Rat TowerFunction::eval(const SquarePoint& p) const {
    TowerCoords c = odometer::tower_coords(p, level_);
    return profile_at(c.x_n).eval(c.y_n);
}

Rat avg_tower_term(const TowerFunction& term, const Rat& t, const SquarePoint& p) {
    if (t <= 0) throw Error("avg_tower_term: t must be positive");
    const unsigned n = term.level();
    const Rat H = term.height();
    TowerCoords c = odometer::tower_coords(p, n);

    Rat to_roof = H - c.y_n;
    if (t <= to_roof) {
        // window stays within the starting column
        return term.profile_at(c.x_n).integrate(c.y_n, c.y_n + t) / t;
    }
    Rat head = term.profile_at(c.x_n).integrate(c.y_n, H);
    Rat rem = t - to_roof;
    Int full_columns = floor_rat(rem / H);
    Rat tail_len = rem - Rat(full_columns) * H;
    // full columns contribute zero; only the final partial column matters
    Rat tail = 0;
    if (tail_len > 0) {
        Dyadic x_tail = odometer::odometer_pow(c.x_n, (Int(1) + full_columns) << n);
        tail = term.profile_at(x_tail).integrate(Rat(0), tail_len);
    }
    return (head + tail) / t;
}

SeriesFunction::SeriesFunction(std::vector<TowerFunction> terms) : terms_(std::move(terms)) {
    for (std::size_t i = 0; i + 1 < terms_.size(); ++i)
        if (!(terms_[i].level() < terms_[i + 1].level()))
            throw Error("SeriesFunction: term levels must strictly increase");
    sup_suffix_.assign(terms_.size() + 1, Rat(0));
    infty1_suffix_.assign(terms_.size() + 1, Rat(0));
    for (std::size_t i = terms_.size(); i-- > 0;) {
        sup_suffix_[i] = sup_suffix_[i + 1] + terms_[i].sup_norm();
        infty1_suffix_[i] = infty1_suffix_[i + 1] + terms_[i].infty1_norm();
    }
}

Rat SeriesFunction::sup_tail_after(std::size_t trunc) const {
    if (trunc > terms_.size()) throw TruncationTooDeep("trunc beyond stored terms");
    return sup_suffix_[trunc];
}

Rat SeriesFunction::infty1_tail_after(std::size_t trunc) const {
    if (trunc > terms_.size()) throw TruncationTooDeep("trunc beyond stored terms");
    return infty1_suffix_[trunc];
}

Rat SeriesFunction::eval(const SquarePoint& p) const {
    Rat s = 0;
    for (const auto& term : terms_) s += term.eval(p);
    return s;
}

CertifiedValue birkhoff_avg_tower(const SeriesFunction& f, const Rat& t, const SquarePoint& p,
                                  std::size_t trunc) {
    if (trunc > f.size())
        throw TruncationTooDeep("trunc " + std::to_string(trunc) + " > " +
                                std::to_string(f.size()) + " stored terms");
    CertifiedValue out{Rat(0), Rat(0)};
    for (std::size_t m = 0; m < trunc; ++m)
        out.exact += avg_tower_term(f.terms()[m], t, p);
    Rat sup_tail = f.sup_tail_after(trunc);
    Rat thm1_tail = Rat(2) * f.infty1_tail_after(trunc) / t;
    out.tail = std::min(sup_tail, thm1_tail);
    return out;
}

RiemannResult riemann_oracle_tower(const TowerFunction& term, const Rat& t, const SquarePoint& p,
                                   const Rat& step) {
    if (step <= 0 || t <= 0) throw Error("riemann_oracle_tower: step and t must be positive");
    Rat count = t / step;
    if (!is_integer(count)) throw Error("riemann_oracle_tower: t must be a multiple of step");
    Int n_steps = rat_num(count);

    const unsigned n = term.level();
    const Rat H = term.height();
    TowerCoords c = odometer::tower_coords(p, n);
    Dyadic x = c.x_n;
    Rat y = c.y_n;

    // Walk the orbit piece by piece so both the sample sum and the total
    // variation are exact even when a piece is narrower than the step.
    const PiecewiseConst* prof = &term.profile_at(x);
    Rat sum = 0;
    Rat variation = 0;
    Rat prev;
    bool have_prev = false;
    Rat s_cur = 0;        // time elapsed since window start
    Int next_sample = 0;  // first sample index not yet consumed
    while (s_cur < t) {
        const auto& breaks = prof->breaks();
        auto it = std::upper_bound(breaks.begin(), breaks.end(), y);
        std::size_t pi = static_cast<std::size_t>(it - breaks.begin()) - 1;
        Rat v = prof->values()[pi];
        Rat room = std::min(breaks[pi + 1] - y, t - s_cur);
        Rat s_end = s_cur + room;
        // samples i with next_sample <= i < n_steps and i*step < s_end
        Int upper = std::min(ceil_rat(s_end / step), n_steps);
        if (upper > next_sample) {
            sum += v * Rat(upper - next_sample);
            next_sample = upper;
        }
        if (have_prev && v != prev) variation += abs_rat(v - prev);
        prev = v;
        have_prev = true;
        s_cur = s_end;
        y += room;
        if (y >= H) {
            x = odometer::tower_roof_map(x, n);
            y = Rat(0);
            prof = &term.profile_at(x);
        }
    }
    return RiemannResult{sum * step / t, variation};
}

Rat riemann_oracle_rotation(const PiecewiseConst& f, const Rat& t, const Rat& x, const Rat& step) {
    Rat count = t / step;
    if (!is_integer(count)) throw Error("riemann_oracle_rotation: t must be a multiple of step");
    long long n_steps = count.convert_to<long long>();
    Rat sum = 0;
    Rat y = mod_rat(x, Rat(1));
    for (long long i = 0; i < n_steps; ++i) {
        sum += f.eval(y);
        y += step;
        if (y >= 1) y -= 1;
    }
    return sum * step / t;
}

} // namespace flows
} // namespace birkhoff
