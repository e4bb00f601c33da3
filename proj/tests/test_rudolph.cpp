#include <doctest.h>

#include <random>

#include "birkhoff/rudolph.hpp"

using namespace birkhoff;
using namespace birkhoff::rudolph;

namespace {

// params with h, eps, d_w free and c_w solved from the measure-1 constraint
RudolphParams make_params(const Rat& h, const Rat& eps, const Rat& d_w, const Rat& delta,
                          const Rat& a) {
    RudolphParams p;
    p.h = h;
    p.eps = eps;
    p.d_w = d_w;
    p.c_w = (Rat(1) - (h + eps) * d_w) / h;
    p.delta = delta;
    p.a = a;
    p.validate();
    return p;
}

} // namespace

TEST_CASE("params validation") {
    auto p = make_params(Rat(16), Rat(1, 8), Rat(2, 129), Rat(1, 16), Rat(1, 2));
    CHECK(p.c_w == Rat(3, 64)); // the worked instance: (16, 1/8, 3/64, 2/129)
    CHECK(p.t() == Rat(1));
    RudolphParams bad = p;
    bad.c_w += Rat(1, 1000);
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = p;
    bad.delta = Rat(1, 3);
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("height profile of f_n") {
    auto p = make_params(Rat(8), Rat(1, 4), Rat(1, 33), Rat(1, 16), Rat(2, 3));
    CHECK(fn_rudolph(Rat(0), p) == p.a);
    CHECK(fn_rudolph(p.h / 2, p) == -p.a);
    CHECK(fn_rudolph(7 * p.h / 8, p) == 0);
    CHECK(fn_rudolph(p.h + p.eps / 2, p) == 0); // tall-column excess band
    for (Column col : {Column::Short, Column::Tall}) {
        auto prof = column_profile(p, col);
        CHECK(prof.integral_over_period() == 0);
        CHECK(prof.l1_over_period() == p.a * p.h / 2);
    }
}

TEST_CASE("evolution: vertical motion and roof jumps") {
    auto p = make_params(Rat(4), Rat(1, 2), Rat(1, 18), Rat(1, 8), Rat(1));
    auto base = default_base_map(p);
    RudolphPoint pt{Column::Short, Rat(1, 100), Rat(0)};
    auto q1 = rudolph_evolve(pt, Rat(1, 2), p, base);
    CHECK(q1.column == Column::Short);
    CHECK(q1.y == Rat(1, 2));
    auto q0 = rudolph_evolve(pt, Rat(0), p, base);
    CHECK(q0.y == pt.y);
    // crossing from the short top lands at y + t - h
    RudolphPoint top{Column::Short, Rat(1, 100), p.h - Rat(1, 4)};
    auto q2 = rudolph_evolve(top, Rat(1, 2), p, base);
    CHECK(q2.y == Rat(1, 4));
    // step-by-step composition
    auto a = rudolph_evolve(rudolph_evolve(pt, Rat(7, 3), p, base), Rat(5, 2), p, base);
    auto b = rudolph_evolve(pt, Rat(7, 3) + Rat(5, 2), p, base);
    CHECK(a.column == b.column);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
}

TEST_CASE("stage distribution: exact identity and inequality") {
    auto p = make_params(Rat(16), Rat(1, 8), Rat(2, 129), Rat(1, 16), Rat(1, 2));
    auto d = stage_distribution(p);
    CHECK(d.mD == d.mD_formula);
    CHECK(d.mD > d.mD_lower);
    CHECK(d.plus_measure == d.minus_measure);
    CHECK(d.plus_measure == (p.c_w + p.d_w) * p.h * (Rat(1, 4) - p.delta));
    CHECK(d.zero_measure >= 2 * (p.c_w + p.d_w) * p.h * (Rat(1, 4) - p.delta));
    CHECK(d.exceptional_bound == (p.c_w + p.d_w) * p.t());
    // the measures partition everything
    CHECK(d.plus_measure + d.minus_measure + d.zero_measure + d.ramp_measure +
              d.exceptional_bound ==
          1);
    // value inside the plateau margin: y = delta h with delta <= 1/8
    CHECK(fn_rudolph(p.delta * p.h, p) == p.a);
}

TEST_CASE("stage distribution on 100 random parameter tuples") {
    std::mt19937_64 rng(606);
    auto rnd = [&](long lo_num, long hi_num, long den) {
        return Rat(lo_num + static_cast<long>(rng() % static_cast<unsigned long>(hi_num - lo_num)),
                   den);
    };
    for (int rep = 0; rep < 100; ++rep) {
        Rat h = Rat(4) + rnd(0, 64, 4);
        Rat eps = rnd(1, 16, 64);
        Rat d_w = Rat(1, 8) / (h + eps); // (h+eps) d_w = 1/8 keeps c_w > 0
        Rat delta = rnd(1, 15, 64);
        auto p = make_params(h, eps, d_w, delta, rnd(1, 9, 8));
        auto d = stage_distribution(p);
        CHECK(d.mD == d.mD_formula);
        CHECK(d.mD > d.mD_lower);
        CHECK(d.plus_measure == d.minus_measure);
        CHECK(d.plus_measure + d.minus_measure + d.zero_measure + d.ramp_measure +
                  d.exceptional_bound ==
              1);
    }
}

TEST_CASE("solver: power-law phi") {
    Phi phi = Phi::power(Rat(-1, 4));
    auto sched = stage_schedule_solve(3, phi);
    CHECK(sched.stages.size() == 3);
    // measure-1 and condition (I)
    for (const auto& st : sched.stages) st.validate();
    CHECK(sched.condition1_sum() < 1);
    // single-stage solve always works
    CHECK(stage_schedule_solve(1, phi).stages.size() == 1);
    // h grows and the earlier-terms bound collapses
    for (std::size_t n = 2; n <= 3; ++n) {
        CHECK(sched.stage(n).h > sched.stage(n - 1).h);
        CHECK(sched.earlier_bound(n) <
              pow2_rat(-static_cast<long>(n) + 1) * sched.stage(n).a);
    }
    // paper's form of the earlier-terms estimate
    for (std::size_t n = 2; n <= 3; ++n) {
        Rat hsum = 0, asum = 0;
        for (std::size_t m = 1; m < n; ++m) hsum += sched.stage(m).h;
        for (const auto& st : sched.stages) asum += st.a;
        CHECK(sched.earlier_bound(n) <=
              2 * asum * hsum / (sched.stage(n).h * sched.stage(n).delta));
    }
}

TEST_CASE("solver: log-reciprocal phi exhausts the exponent cap") {
    Phi phi = Phi::log_reciprocal(2);
    // three stages need h_3 ~ 2^320000: a desk-scale cap rejects them
    CHECK_THROWS_AS(stage_schedule_solve(3, phi, 100000), PhiTooSlow);
    CHECK_THROWS_AS(stage_schedule_solve(4, phi, 1000000), PhiTooSlow);
    // a single stage is always solvable, and the default cap admits three
    CHECK(stage_schedule_solve(1, phi).stages.size() == 1);
    CHECK(stage_schedule_solve(3, phi, 1000000).stages.size() == 3);
}

TEST_CASE("phi ratio experiment grows stage over stage") {
    Phi phi = Phi::power(Rat(-1, 4));
    auto sched = stage_schedule_solve(3, phi);
    auto rep = phi_ratio_experiment(sched, phi, 20, 2027);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.strictly_increasing);
    for (std::size_t i = 1; i < 3; ++i)
        CHECK(rep.rows[i].ratio.lo >= 10 * rep.rows[i - 1].ratio.hi);
    // stage 1 has no earlier terms: certified slack is the amplitude tail
    CHECK(rep.rows[0].certified_abs.hi - rep.rows[0].certified_abs.lo <=
          2 * sched.tail_sum_upper(1) + Rat(1, 1000000));
    // empty sample set gives an empty-but-wellformed report
    auto rep0 = phi_ratio_experiment(sched, phi, 0, 1);
    CHECK(rep0.rows.size() == 3);
}

TEST_CASE("phi enclosures") {
    Phi pow = Phi::power(Rat(-1, 4));
    auto v = pow.enclosure(Rat(16));
    CHECK(v.lo == Rat(1, 2));
    CHECK(v.hi == Rat(1, 2));
    auto w = pow.enclosure(Rat(17));
    CHECK(w.lo < w.hi);
    // 17^(-1/4) = 0.4924790...
    CHECK(w.lo > Rat(4924, 10000));
    CHECK(w.hi < Rat(4925, 10000));
    Phi lg = Phi::log_reciprocal(2);
    auto u = lg.enclosure(pow2_rat(10));
    CHECK(u.contains(Rat(1, 10)));
    CHECK(u.width() < Rat(1, 1000));
}
