#include <doctest.h>

#include <random>
#include <set>

#include "birkhoff/constructions.hpp"
#include "birkhoff/flows.hpp"
#include "birkhoff/rng.hpp"

using namespace birkhoff;
using namespace birkhoff::flows;

namespace {

PiecewiseConst square_wave() {
    return PiecewiseConst(Rat(1), {Rat(0), Rat(1, 2), Rat(1)}, {Rat(1), Rat(-1)});
}

TowerFunction slow_term(unsigned p, const Rat& a, const Rat& d) {
    Rat P = pow2_rat(p);
    Rat L = d * pow2_rat(static_cast<long>(p) - 1);
    return TowerFunction(p, PiecewiseConst(P, {Rat(0), L, P / 2, P / 2 + L, P},
                                           {a, Rat(0), -a, Rat(0)}));
}

} // namespace

TEST_CASE("circle rotation evolution") {
    CHECK(circle_evolve(Rat(0), Rat(1)) == 0);
    CHECK(circle_evolve(Rat(1, 3), Rat(1, 2)) == Rat(5, 6));
    CHECK(circle_evolve(Rat(3, 4), Rat(1, 2)) == Rat(1, 4));
}

TEST_CASE("rotation averages: zero-mean square wave") {
    PiecewiseConst f = square_wave();
    CHECK(birkhoff_avg_rotation(f, Rat(1), Rat(0)) == 0);
    CHECK(birkhoff_avg_rotation(f, Rat(1, 2), Rat(0)) == 1);
    // |A| <= ||f||_1 / t on a seeded sweep
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
        Rat x(Int(rng() >> 44), pow2_int(20));
        Rat t = Rat(Int(rng() >> 34) + 1, pow2_int(10));
        Rat v = birkhoff_avg_rotation(f, t, x);
        CHECK(abs_rat(v) <= f.l1_over_period() / t);
        if (is_integer(t)) CHECK(v == 0);
    }
    // engine vs Riemann oracle on the rotation
    Rat step = pow2_rat(-10);
    for (int i = 0; i < 20; ++i) {
        Rat x(Int(rng() >> 44), pow2_int(20));
        Rat t = Rat(Int(rng() % 4096) + 1, pow2_int(10));
        Rat exact = birkhoff_avg_rotation(f, t, x);
        Rat oracle = riemann_oracle_rotation(f, t, x, step);
        // |f' jumps| contribute at most step * TV / t
        CHECK(abs_rat(exact - oracle) <= step * Rat(4) * (t + 1) / t);
    }
}

TEST_CASE("periodic bound report") {
    PiecewiseConst f = square_wave();
    auto r1 = periodic_bound_check(f, Rat(7, 3), Rat(0));
    CHECK(r1.holds());
    auto r2 = periodic_bound_check(f, Rat(5), Rat(1, 3));
    CHECK(r2.lhs == 0);
    PiecewiseConst c = PiecewiseConst::constant(Rat(1), Rat(4, 7));
    auto r3 = periodic_bound_check(c, Rat(3, 2), Rat(0));
    CHECK(r3.lhs == 0);
    CHECK(r3.rhs == Rat(2) * Rat(4, 7) / Rat(3, 2));
}

TEST_CASE("odometer flow evolution") {
    SquarePoint p{Dyadic(), Rat(1, 2)};
    SquarePoint q = odometer_flow_evolve(p, Rat(1, 4));
    CHECK(q.x == p.x);
    CHECK(q.y == Rat(3, 4));
    q = odometer_flow_evolve(p, Rat(1));
    CHECK(q.x.to_rat() == Rat(1, 2));
    CHECK(q.y == Rat(1, 2));
    q = odometer_flow_evolve(SquarePoint{Dyadic(), Rat(0)}, Rat(3));
    CHECK(q.x.to_rat() == Rat(3, 4));
    CHECK(q.y == 0);
}

TEST_CASE("flow property: evolve composes") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 1000; ++i) {
        SquarePoint p{Dyadic(Int(rng() >> 44), 20), Rat(Int(rng() >> 44), pow2_int(20))};
        Rat s(Int(rng() >> 50), pow2_int(10));
        Rat t(Int(rng() >> 50), pow2_int(10));
        SquarePoint a = odometer_flow_evolve(odometer_flow_evolve(p, s), t);
        SquarePoint b = odometer_flow_evolve(p, s + t);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
    }
}

TEST_CASE("odometer flow permutes dyadic grid cells") {
    // t on the dyadic grid permutes the n x n cells
    for (unsigned n = 1; n <= 8; ++n) {
        Rat cell = pow2_rat(-static_cast<long>(n));
        std::set<std::pair<Rat, Rat>> image;
        for (std::uint64_t ix = 0; ix < (1ull << n); ++ix) {
            for (std::uint64_t iy = 0; iy < (1ull << n); ++iy) {
                SquarePoint p{Dyadic(Int(ix), n), Rat(Int(iy)) * cell};
                SquarePoint q = odometer_flow_evolve(p, Rat(5) * cell);
                image.insert({q.x.to_rat(), q.y});
            }
        }
        CHECK(image.size() == (1ull << (2 * n)));
    }
}

TEST_CASE("tower function validation") {
    // non-zero column integral is rejected
    CHECK_THROWS_AS(TowerFunction(2, PiecewiseConst::constant(Rat(4), Rat(1))), Error);
    // wrong period is rejected
    CHECK_THROWS_AS(TowerFunction(2, PiecewiseConst::constant(Rat(8), Rat(0))), Error);
    TowerFunction ok = slow_term(3, Rat(1, 2), Rat(1, 4));
    CHECK(ok.sup_norm() == Rat(1, 2));
    CHECK(ok.infty1_norm() == Rat(2) * Rat(1, 2) * Rat(1)); // 2 a L, L = 1
}

TEST_CASE("tower term average: full columns vanish") {
    TowerFunction f = slow_term(4, Rat(1, 2), Rat(1, 4));
    SquarePoint base{Dyadic(), Rat(0)};
    // one full column (t = 2^4 at y_n = 0) integrates to zero
    CHECK(avg_tower_term(f, pow2_rat(4), base) == 0);
    CHECK(avg_tower_term(f, pow2_rat(12), base) == 0);
    // a window inside the positive band
    CHECK(avg_tower_term(f, Rat(1), base) == Rat(1, 2));
}

TEST_CASE("tower term engine against the Riemann oracle") {
    std::mt19937_64 seeds(4242);
    const Rat step = pow2_rat(-14);
    for (int rep = 0; rep < 50; ++rep) {
        DyadicSampler rng(seeds());
        unsigned p = 3 + static_cast<unsigned>(rng.bits(3)) % 5;
        Rat P = pow2_rat(p);
        Rat L = P / 8 + Dyadic(Int(rng.bits(14)) * 2 + 1, 16).to_rat();
        Rat a = Rat(1, Int(1 + rng.bits(5)));
        PiecewiseConst prof(P, {Rat(0), L, P / 2, P / 2 + L, P}, {a, Rat(0), -a, Rat(0)});
        TowerFunction term(p, prof);
        SquarePoint pt = rng.square_point(20);
        Rat t = Rat(Int(rng.bits(17)) + (Int(1) << 14), pow2_int(14));
        Rat exact = avg_tower_term(term, t, pt);
        auto oracle = riemann_oracle_tower(term, t, pt, step);
        CHECK(abs_rat(exact - oracle.value) <= step * oracle.variation);
    }
}

TEST_CASE("x-dependent tower function: slices matter") {
    unsigned p = 3;
    Rat P = pow2_rat(p);
    Rat a(1, 2);
    PiecewiseConst prof_pos(P, {Rat(0), Rat(1), P / 2, P / 2 + 1, P}, {a, Rat(0), -a, Rat(0)});
    PiecewiseConst prof_big(P, {Rat(0), Rat(2), P / 2, P / 2 + 2, P},
                            {Rat(1), Rat(0), Rat(-1), Rat(0)});
    Dyadic mid(Int(1), p + 1);
    std::vector<TowerFunction::Slice> slices;
    slices.push_back({Dyadic(), mid, prof_pos});
    slices.push_back({mid, Dyadic(Int(1), p), prof_big});
    TowerFunction f(p, std::move(slices));
    // the sup slice dominates the infty1 norm: max(2*1/2*1, 2*1*2) = 4
    CHECK(f.infty1_norm() == 4);
    CHECK(f.sup_norm() == 1);
    // a long window from the first slice crosses into the second via the
    // roof map; verify against the oracle
    SquarePoint pt{Dyadic(), Rat(1, 3)};
    Rat t = 3 * P + Rat(1, 2);
    Rat exact = avg_tower_term(f, t, pt);
    auto oracle = riemann_oracle_tower(f, t, pt, pow2_rat(-12));
    CHECK(abs_rat(exact - oracle.value) <= pow2_rat(-12) * oracle.variation);
}

TEST_CASE("series function: certified truncation") {
    auto sched = constructions::schedule_default(4, constructions::FamilyMode::Divergent);
    auto series = constructions::build_series(sched);
    SquarePoint pt{Dyadic(Int(5), 4), Rat(1, 3)};
    Rat t(97, 8);
    CertifiedValue full = birkhoff_avg_tower(series, t, pt, series.size());
    CHECK(full.tail == 0);
    CertifiedValue part = birkhoff_avg_tower(series, t, pt, 2);
    // the certified interval always contains the full value
    CHECK(part.lo() <= full.exact);
    CHECK(full.exact <= part.hi());
    // tail shrinks monotonically with the truncation depth
    Rat prev = birkhoff_avg_tower(series, t, pt, 0).tail;
    for (std::size_t k = 1; k <= series.size(); ++k) {
        Rat cur = birkhoff_avg_tower(series, t, pt, k).tail;
        CHECK(cur <= prev);
        prev = cur;
    }
    CHECK_THROWS_AS(birkhoff_avg_tower(series, t, pt, series.size() + 1), TruncationTooDeep);
}

TEST_CASE("averages are linear in the function") {
    TowerFunction f = slow_term(3, Rat(1, 2), Rat(1, 4));
    TowerFunction g = slow_term(3, Rat(1, 4), Rat(3, 8));
    // A(f + g) = A(f) + A(g): sum profiles piecewise
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        DyadicSampler s(rng());
        SquarePoint pt = s.square_point(16);
        Rat t = Rat(Int(s.bits(12)) + 1, pow2_int(6));
        Rat va = avg_tower_term(f, t, pt);
        Rat vb = avg_tower_term(g, t, pt);
        // build f + g explicitly on the common breakpoint set
        std::vector<Rat> breaks;
        for (const auto& b : f.slices().front().profile.breaks()) breaks.push_back(b);
        for (const auto& b : g.slices().front().profile.breaks()) breaks.push_back(b);
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        std::vector<Rat> vals;
        for (std::size_t j = 0; j + 1 < breaks.size(); ++j)
            vals.push_back(f.slices().front().profile.eval(breaks[j]) +
                           g.slices().front().profile.eval(breaks[j]));
        TowerFunction fg(3, PiecewiseConst(pow2_rat(3), breaks, vals));
        CHECK(avg_tower_term(fg, t, pt) == va + vb);
    }
}
