#include "birkhoff/constructions.hpp"

#include <sstream>

namespace birkhoff {
namespace constructions {

Thm2Schedule::Thm2Schedule(std::vector<Thm2Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw Error("Thm2Schedule: need at least one entry");
    tail_.assign(entries_.size() + 1, Rat(0));
    for (std::size_t i = entries_.size(); i-- > 0;)
        tail_[i] = tail_[i + 1] + entries_[i].a;
}

Rat Thm2Schedule::plateau_len(std::size_t n) const {
    const auto& e = entry(n);
    return e.d * pow2_rat(static_cast<long>(e.p) - 1);
}

Rat Thm2Schedule::t_n(std::size_t n) const {
    return pow2_rat(static_cast<long>(entry(n).p) - 2);
}

Rat Thm2Schedule::tail_sum(std::size_t n) const {
    if (n > entries_.size()) throw Error("tail_sum: index out of range");
    return tail_[n];
}

Rat Thm2Schedule::alpha(std::size_t n) const { return tail_sum(n) / entry(n).a; }

Rat Thm2Schedule::eta(std::size_t n) const {
    return tail_sum(n) / (entry(n).a * entry(n).d);
}

Thm2Schedule schedule_default(std::size_t N, FamilyMode mode) {
    if (N < 1) throw Error("schedule_default: N must be at least 1");
    std::vector<Thm2Entry> es;
    es.reserve(N);
    for (std::size_t n = 1; n <= N; ++n) {
        Thm2Entry e;
        e.d = Rat(1, 4);
        if (mode == FamilyMode::Divergent) {
            // p_n = n^2 + 3n, a_n = 2^-(n^2): a_n d_n 2^(p_n) = 2^(3n-2) grows
            e.p = static_cast<unsigned>(n * n + 3 * n);
            e.a = pow2_rat(-static_cast<long>(n * n));
        } else {
            // p_n = 2n with a_n = 2^-(3n), so the increments 2 a_n L_n =
            // 2^-(n+2) decrease geometrically and the norm series is summable
            e.p = static_cast<unsigned>(2 * n);
            e.a = pow2_rat(-static_cast<long>(3 * n));
        }
        es.push_back(std::move(e));
    }
    Thm2Schedule s(std::move(es));
    auto cert = schedule_validate(s, mode);
    if (!cert.ok) throw Error("schedule_default produced an invalid schedule: " + cert.violations.front());
    return s;
}

ScheduleCertificate schedule_validate(const Thm2Schedule& s, FamilyMode mode) {
    ScheduleCertificate cert;
    auto fail = [&](const std::string& msg) {
        cert.ok = false;
        cert.violations.push_back(msg);
    };
    const auto& es = s.entries();
    for (std::size_t i = 0; i < es.size(); ++i) {
        std::ostringstream tag;
        tag << "entry " << (i + 1) << ": ";
        if (es[i].p < 2) fail(tag.str() + "p_n >= 2 required (t_n = 2^(p_n-2) must be >= 1)");
        if (!(es[i].a > 0)) fail(tag.str() + "a_n > 0 required");
        if (!(es[i].d > 0 && es[i].d < Rat(1, 2))) fail(tag.str() + "d_n in (0, 1/2) required");
        if (i > 0) {
            if (!(es[i].p >= es[i - 1].p + 2))
                fail(tag.str() + "spacing p_{n+1} >= p_n + 2 violated");
            if (!(es[i].a < es[i - 1].a)) fail(tag.str() + "a_n must be strictly decreasing");
        }
    }
    // cross condition: t_n = 2^(p_n - 2) < L_m = d_m 2^(p_m - 1) for all n < m
    for (std::size_t n = 1; n <= es.size() && cert.ok; ++n)
        for (std::size_t m = n + 1; m <= es.size(); ++m)
            if (!(s.t_n(n) < s.plateau_len(m))) {
                std::ostringstream msg;
                msg << "cross condition 2^(p_" << n << "-2) < d_" << m << " 2^(p_" << m
                    << "-1) violated";
                fail(msg.str());
            }
    for (std::size_t n = 1; n <= es.size(); ++n) {
        ScheduleTrendRow row;
        row.n = n;
        row.eta = cert.ok ? s.eta(n) : Rat(0);
        row.alpha = cert.ok ? s.alpha(n) : Rat(0);
        row.divergence_term = es[n - 1].a * es[n - 1].d * pow2_rat(es[n - 1].p);
        row.increment = Rat(2) * es[n - 1].a * s.plateau_len(n);
        cert.trend.push_back(std::move(row));
    }
    if (cert.ok && es.size() > 1) {
        // finite-prefix trend checks; the limits themselves are not certified
        if (mode == FamilyMode::Divergent) {
            for (std::size_t n = 1; n + 1 <= es.size(); ++n)
                if (!(cert.trend[n].divergence_term >= cert.trend[n - 1].divergence_term))
                    fail("divergence trend a_n d_n 2^(p_n) must be nondecreasing");
        } else {
            for (std::size_t n = 1; n + 1 <= es.size(); ++n)
                if (!(cert.trend[n].increment * 2 <= cert.trend[n - 1].increment))
                    fail("summability trend: increments 2 a_n L_n must at least halve");
        }
    }
    return cert;
}

flows::TowerFunction build_fn_thm2(const Thm2Schedule& s, std::size_t n) {
    const auto& e = s.entry(n);
    Rat P = pow2_rat(e.p);
    Rat L = s.plateau_len(n);
    Rat half = P / 2;
    PiecewiseConst prof(P, {Rat(0), L, half, half + L, P}, {e.a, Rat(0), -e.a, Rat(0)});
    return flows::TowerFunction(e.p, std::move(prof));
}

flows::SeriesFunction build_series(const Thm2Schedule& s) {
    std::vector<flows::TowerFunction> terms;
    terms.reserve(s.size());
    for (std::size_t n = 1; n <= s.size(); ++n) terms.push_back(build_fn_thm2(s, n));
    return flows::SeriesFunction(std::move(terms));
}

std::optional<SquarePoint> vanish_check_earlier_terms(const Thm2Schedule& s, std::size_t n,
                                                      const std::vector<SquarePoint>& points) {
    if (n < 1) throw Error("vanish_check_earlier_terms: n >= 1 required");
    Rat tn = s.t_n(n);
    for (const auto& p : points) {
        Rat sum = 0;
        for (std::size_t m = 1; m < n; ++m)
            sum += flows::avg_tower_term(build_fn_thm2(s, m), tn, p);
        if (sum != 0) return p;
    }
    return std::nullopt;
}

Thm2Distribution thm2_distribution(const Thm2Schedule& s, std::size_t n) {
    const auto& e = s.entry(n);
    Rat P = pow2_rat(e.p);
    auto prof = build_fn_thm2(s, n).slices().front().profile;
    PiecewiseLinear g = window_average_profile(prof, s.t_n(n));

    Thm2Distribution out;
    out.value_max = Rat(2) * e.a * e.d;
    if (g.max_value() != out.value_max || g.min_value() != -out.value_max)
        throw Error("thm2_distribution: window profile extrema disagree with 2 a_n d_n");
    out.measure_zero = g.level_set_measures(Rat(0)).eq / P;
    out.measure_max = g.level_set_measures(out.value_max).eq / P;
    out.measure_min = g.level_set_measures(-out.value_max).eq / P;
    out.measure_ramps = g.ramp_measure() / P;
    return out;
}

RateReport thm1_uniform_bound_sweep(const flows::SeriesFunction& f, const std::vector<Rat>& ts,
                                    const std::vector<SquarePoint>& points) {
    RateReport rep;
    Rat norm_sum = f.infty1_total();
    for (const Rat& t : ts) {
        Rat bound = Rat(2) * norm_sum / t;
        Rat sup = 0;
        for (const auto& p : points) {
            CertifiedValue v = flows::birkhoff_avg_tower(f, t, p, f.size());
            sup = std::max(sup, v.abs_hi());
        }
        RateRow row;
        row.index = rat_to_string(t);
        row.sup_abs = sup;
        row.bound = bound;
        row.ratio = rat_to_double(sup / bound);
        if (sup > bound) {
            ++rep.violations;
            if (rep.witness.empty())
                rep.witness = "t=" + rat_to_string(t) + " sup=" + rat_to_string(sup) +
                              " bound=" + rat_to_string(bound);
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

RateReport thm2_rate_sweep(const Thm2Schedule& s, const flows::SeriesFunction& f,
                           std::size_t n_lo, std::size_t n_hi,
                           const std::vector<SquarePoint>& points) {
    if (n_lo < 1 || n_hi > s.size() || n_lo > n_hi)
        throw Error("thm2_rate_sweep: bad stage range");
    RateReport rep;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
        Rat tn = s.t_n(n);
        Rat and_ = s.entry(n).a * s.entry(n).d;
        Rat stage_bound = Rat(2) * and_; // |A(sum_{m<=n} f_m, t_n, .)| <= 2 a_n d_n, exactly
        Rat sup_partial = 0;
        for (const auto& p : points) {
            CertifiedValue v = flows::birkhoff_avg_tower(f, tn, p, n);
            // earlier terms vanish at t_n, so |exact| here is |A_n| itself
            if (abs_rat(v.exact) > stage_bound) {
                ++rep.violations;
                if (rep.witness.empty())
                    rep.witness = "n=" + std::to_string(n) + " x=" + p.x.to_string() +
                                  " y=" + rat_to_string(p.y);
            }
            sup_partial = std::max(sup_partial, abs_rat(v.exact));
        }
        Rat tail = std::min(f.sup_tail_after(n), Rat(2) * f.infty1_tail_after(n) / tn);
        RateRow row;
        row.index = std::to_string(n);
        row.sup_abs = sup_partial + tail;
        row.bound = stage_bound + tail;
        row.ratio = rat_to_double(row.sup_abs / and_);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace constructions
} // namespace birkhoff
