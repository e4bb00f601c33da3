#include <doctest.h>

#include <cmath>
#include <random>

#include "birkhoff/quadrature.hpp"
#include "birkhoff/torus.hpp"

using namespace birkhoff;
using namespace birkhoff::torus;

TEST_CASE("convergents of [0; 10, 100, 1000, ...]") {
    CFNumber cf = CFNumber::pow10(4);
    CHECK(cf.convergent(0).p == 0);
    CHECK(cf.convergent(0).q == 1);
    CHECK(cf.convergent(1).p == 1);
    CHECK(cf.convergent(1).q == 10);
    CHECK(cf.convergent(2).p == 100);
    CHECK(cf.convergent(2).q == 1001);
    // oracle: direct evaluation of 1/(10 + 1/100)
    CHECK(Rat(cf.convergent(2).p, cf.convergent(2).q) == Rat(1) / (Rat(10) + Rat(1, 100)));
    CHECK(cf.convergent(4).q == Int("10010101001"));
    // determinant identity p_k q_{k-1} - p_{k-1} q_k = +-1
    for (std::size_t k = 1; k <= 6; ++k) {
        auto a = cf.convergent(k);
        auto b = cf.convergent(k - 1);
        Int det = a.p * b.q - b.p * a.q;
        CHECK((det == 1 || det == -1));
    }
}

TEST_CASE("beta enclosures decay and stay one-sided") {
    CFNumber cf = CFNumber::pow10(4);
    for (std::size_t k : {0, 2, 4}) {
        RatInterval b = cf.beta(k);
        CHECK(b.lo > 0); // approximation from below
        CHECK(b.hi < Rat(1, 8));
        // standard bound beta_k <= 1/a_{k+1}
        Rat bound = Rat(1, cf.quotients()[k]); // a_{k+1} = quotients_[k]
        CHECK(b.hi <= bound);
    }
    CHECK(cf.beta(2).hi < cf.beta(0).lo);
    CHECK(cf.beta(4).hi < cf.beta(2).lo);
    // without an extension rule the enclosure eventually runs out
    CFNumber finite({Int(10), Int(100)});
    CHECK_THROWS_AS(finite.enclosure(5), PrecisionExhausted);
}

TEST_CASE("chart at the base corner and along the flow") {
    auto par = TorusParams::default_experiment();
    // (0, 0) -> (x_n, tau) = (0, 0) at every stage
    for (std::size_t n = 1; n <= 3; ++n) {
        TorusPoint origin{Rat(0), RatInterval(Rat(0))};
        auto co = torus_coords(par, n, origin);
        REQUIRE(co.has_value());
        CHECK(co->tau == 0);
        CHECK(co->x_n.contains(Rat(0)));
        CHECK(co->x_n.width() < Rat(1, 1000000));
    }
}

TEST_CASE("flow-box translation property, exact in time units") {
    auto par = TorusParams::default_experiment();
    std::mt19937_64 rng(404);
    for (std::size_t n = 1; n <= 3; ++n) {
        const Stage& st = par.stage(n);
        for (int rep = 0; rep < (n == 3 ? 50 : 200); ++rep) {
            Rat q(st.q);
            Rat x = Rat(Int(rng() >> 24), pow2_int(40)) / q;
            Rat tau = Rat(Int(rng() >> 24), pow2_int(40)) * q / 2; // below half the column
            Rat s = Rat(Int(rng() >> 24), pow2_int(40)) * q / 4;  // exit never reached
            TorusPoint pt = torus_point(par, n, x, tau);
            TorusPoint moved = flow(par, pt, s);
            auto c0 = torus_coords(par, n, pt);
            auto c1 = torus_coords(par, n, moved);
            REQUIRE(c0.has_value());
            REQUIRE(c1.has_value());
            CHECK(c1->tau == c0->tau + s); // arc shift is s * sqrt(1+c^2)
            CHECK(c1->x_n.contains(x));
            CHECK(c0->x_n.contains(x));
        }
    }
}

TEST_CASE("profiles: ramps, plateaus, antisymmetry, zero integral") {
    Profiles prof(Rat(1, 8), Rat(1, 256));
    CHECK(prof.g(Rat(0)) == 0);
    CHECK(prof.g(Rat(1, 2)) == 1);
    CHECK(prof.g(Rat(1)) == 0);
    CHECK(prof.g(Rat(1, 16)) == Rat(1, 2)); // smoothstep midpoint
    CHECK(prof.h(Rat(0)) == 0);
    CHECK(prof.h(Rat(1, 8)) == 1);
    CHECK(prof.h(Rat(5, 8)) == -1);
    CHECK(prof.h(Rat(3, 8)) == 0);
    CHECK(prof.h(Rat(7, 8)) == 0);
    // antisymmetry h(eta + 1/2) = -h(eta)
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        Rat eta(Int(rng() >> 34), pow2_int(31)); // in [0, 1/2)
        CHECK(prof.h(eta + Rat(1, 2)) == -prof.h(eta));
    }
    // H is an antiderivative with zero full-column integral
    CHECK(prof.H(Rat(0)) == 0);
    CHECK(prof.H(Rat(1)) == 0);
    CHECK(prof.H(Rat(1, 4)) == Rat(1, 4) - Rat(1, 256));
    // finite differences of H reproduce h
    for (int i = 0; i < 200; ++i) {
        Rat eta(Int(rng() >> 34) % (pow2_int(30) - 1000), pow2_int(30));
        Rat dh = pow2_rat(-25);
        Rat fd = (prof.H(eta + dh) - prof.H(eta)) / dh;
        // |h'| <= 3/(2 ramp) bounds the finite-difference error
        CHECK(abs_rat(fd - prof.h(eta)) <= Rat(3, 2) * Rat(256) * dh);
    }
}

TEST_CASE("column integral by quadrature stays below 1e-12") {
    Profiles prof(Rat(1, 8), Rat(1, 256));
    std::vector<double> brk;
    for (const auto& b : prof.h_breakpoints()) brk.push_back(rat_to_double(b));
    auto q = integrate_adaptive([&](double x) { return prof.h_double(x); }, 0.0, 1.0, brk, 1e-13);
    CHECK(std::abs(q.value) <= 1e-12);
    // and the quadrature engine handles basic integrands
    auto one = integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, {}, 1e-12);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));
    auto zero = integrate_adaptive([](double) { return 0.0; }, 0.0, 3.0, {}, 1e-12);
    CHECK(zero.value == 0.0);
}

TEST_CASE("quadrature agrees with the closed-form antiderivative") {
    Profiles prof(Rat(1, 8), Rat(1, 256));
    std::vector<double> brk;
    for (const auto& b : prof.h_breakpoints()) brk.push_back(rat_to_double(b));
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 40; ++rep) {
        double a = static_cast<double>(rng() % 1000) / 1000.0;
        double b = a + static_cast<double>(rng() % 1000) / 1000.0 * (1.0 - a);
        auto q = integrate_adaptive([&](double x) { return prof.h_double(x); }, a, b, brk, 1e-11);
        auto to_rat = [](double x) {
            return Rat(Int(static_cast<long long>(std::ldexp(x, 40))), pow2_int(40));
        };
        double closed = rat_to_double(prof.H(to_rat(b)) - prof.H(to_rat(a)));
        CHECK(std::abs(q.value - closed) <= 1e-9);
    }
}

TEST_CASE("f_n is continuous on a sampled grid") {
    auto par = TorusParams::default_experiment();
    std::size_t n = 2;
    const Stage& st = par.stage(n);
    // Lipschitz constant of f along tau: a * max|h'| / q
    double lip_tau = rat_to_double(st.a) * 1.5 * 256.0 / rat_to_double(Rat(st.q));
    Rat step = Rat(st.q) / 4096;
    double prev = 0.0;
    bool have_prev = false;
    Rat x_n = Rat(1, 2 * st.q); // mid-chart line
    for (int i = 0; i < 4096; ++i) {
        Rat tau = step * i;
        auto v = f_eval(par, n, torus_point(par, n, x_n, tau));
        double val = rat_to_double(v.mid());
        if (have_prev)
            CHECK(std::abs(val - prev) <= lip_tau * rat_to_double(step) + 1e-9);
        prev = val;
        have_prev = true;
    }
}

TEST_CASE("outside frequency tracks the sliver area") {
    auto par = TorusParams::default_experiment();
    std::size_t n = 2; // q = 1001, beta ~ 1e-3
    RatInterval beta = par.beta(n);
    std::mt19937_64 rng(2718);
    std::size_t outside = 0;
    const std::size_t total = 200000;
    for (std::size_t i = 0; i < total; ++i) {
        TorusPoint pt{Rat(Int(rng() >> 24), pow2_int(40)),
                      RatInterval(Rat(Int(rng() >> 24), pow2_int(40)))};
        if (!torus_coords(par, n, pt)) ++outside;
    }
    double freq = static_cast<double>(outside) / static_cast<double>(total);
    // sanity window: the gap/overlap sliver scales with beta
    CHECK(freq >= rat_to_double(beta.lo) / 4);
    CHECK(freq <= rat_to_double(beta.hi) * 4 + 4e-3);
    // stage 1 (q = 1) has a single chart covering everything
    for (int i = 0; i < 100; ++i) {
        TorusPoint pt{Rat(Int(rng() >> 24), pow2_int(40)),
                      RatInterval(Rat(Int(rng() >> 24), pow2_int(40)))};
        CHECK(torus_coords(par, 1, pt).has_value());
    }
}

TEST_CASE("current-term window average on and off the plateau") {
    auto par = TorusParams::default_experiment();
    for (std::size_t n = 1; n <= 3; ++n) {
        const Stage& st = par.stage(n);
        Rat q(st.q);
        RatInterval T = par.t_n(n);
        // plateau start
        Rat eta0 = Rat(1, 128);
        RatInterval v = avg_current_term(par, n, RatInterval(Rat(1)), eta0 * q, T);
        CHECK(v.lo > st.a * Rat(99, 100));
        CHECK(v.hi < st.a * Rat(101, 100));
        // zero-band start: window inside [1/4, 1/2)
        Rat eta_zero = Rat(26, 100);
        RatInterval vz = avg_current_term(par, n, RatInterval(Rat(1)), eta_zero * q, T);
        CHECK(abs_rat(vz.lo) < st.a / 1000);
        CHECK(abs_rat(vz.hi) < st.a / 1000);
    }
}

TEST_CASE("measured earlier terms against the head/tail estimate") {
    auto par = TorusParams::default_experiment();
    std::mt19937_64 rng(11);
    // m = 1 (q = 1): full columns vanish exactly, the paper bound holds
    for (std::size_t n : {2, 3}) {
        RatInterval T = par.t_n(n);
        Rat paper_bound = 2 * par.stage(1).a * Rat(par.stage(1).q) * par.sqrt1c2().hi / T.lo;
        for (int rep = 0; rep < 3; ++rep) {
            Rat x = Rat(Int(rng() >> 24), pow2_int(40));
            Rat tau = Rat(Int(rng() >> 24), pow2_int(40));
            TorusPoint pt = torus_point(par, 1, x, tau);
            RatInterval v = measured_avg_term(par, 1, pt, T);
            CHECK(abs_rat(v.lo) <= paper_bound);
            CHECK(abs_rat(v.hi) <= paper_bound);
        }
    }
    // m = 2 against n = 3: the sliver interrupts columns, so the certified
    // allowance (earlier_term_bound) is the honest cap
    {
        RatInterval T = par.t_n(3);
        Rat bound = par.earlier_term_bound(2, 3);
        Rat x = Rat(1, 3000);
        TorusPoint pt = torus_point(par, 2, x, Rat(1, 7));
        RatInterval v = measured_avg_term(par, 2, pt, T);
        CHECK(abs_rat(v.lo) <= bound);
        CHECK(abs_rat(v.hi) <= bound);
    }
}

TEST_CASE("thm3 experiment: windows and ratio growth") {
    auto par = TorusParams::default_experiment();
    auto rep = thm3_experiment(par, 10, 99, Rat(9, 10), Rat(11, 10), Rat(5));
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.windows_ok);
    CHECK(rep.growth_ok);
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        CHECK(rep.rows[i].ratio.lo >= 5 * rep.rows[i - 1].ratio.hi);
    // csv shape
    auto csv = thm3_report_csv(rep);
    CHECK(csv.rfind("n,q_n,t_n,sup_abs,phi,ratio", 0) == 0);
}
