#include <doctest.h>

#include <random>
#include <set>

#include "birkhoff/odometer.hpp"

using namespace birkhoff;
using namespace birkhoff::odometer;

namespace {
Dyadic dy(const Rat& r) { return Dyadic::from_rat(r); }
} // namespace

TEST_CASE("odometer_step matches the digit rules") {
    CHECK(odometer_step(Dyadic()).to_rat() == Rat(1, 2));       // S(00...) = (10...)
    CHECK(odometer_step(dy(Rat(1, 2))).to_rat() == Rat(1, 4));  // S(10...) = (01...)
    CHECK(odometer_step(dy(Rat(3, 4))).to_rat() == Rat(1, 8));  // S(110...) = (001...)
    // carry leaves higher digits alone: 0.1101 -> 0.0011
    CHECK(odometer_step(dy(Rat(13, 16))).to_rat() == Rat(3, 16));
}

TEST_CASE("odometer_pow is addition on the digit integer") {
    CHECK(odometer_pow(Dyadic(), 3).to_rat() == Rat(3, 4));
    Dyadic x = odometer_pow(dy(Rat(3, 4)), 4);
    CHECK(x.to_rat() == Rat(7, 8));
    // first two digits (11) unchanged under S^4
    CHECK(x.digit(1));
    CHECK(x.digit(2));
    CHECK(odometer_pow(dy(Rat(1, 2)), -1).to_rat() == 0);
    CHECK_THROWS_AS(odometer_pow(Dyadic(), -1), NegativeOrbitUnderflow);
    CHECK_THROWS_AS(odometer_pow(dy(Rat(1, 4)), -3), NegativeOrbitUnderflow);
}

TEST_CASE("odometer_pow composes") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        Dyadic x(Int(rng() >> 40), 24);
        Int a = Int(rng() % 1000);
        Int b = Int(rng() % 1000) - 300;
        if (digit_integer(x) + a + b < 0) continue;
        Dyadic lhs = odometer_pow(x, a + b);
        Dyadic rhs = odometer_pow(odometer_pow(x, a), b);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("single cycle on the 2^n interval indices") {
    for (unsigned n = 1; n <= 12; ++n) {
        const std::uint64_t size = 1ull << n;
        // induced map on interval indices: conjugate of +1 on digit integers
        std::uint64_t idx = 0; // start at the interval of 0
        std::set<std::uint64_t> seen;
        Dyadic x; // 0, exact representative of index 0
        for (std::uint64_t step = 0; step < size; ++step) {
            CHECK(seen.insert(idx).second);
            x = odometer_step(x);
            Rat scaled = x.to_rat() * pow2_rat(static_cast<long>(n));
            idx = floor_rat(scaled).convert_to<std::uint64_t>();
        }
        CHECK(seen.size() == size);
        CHECK(idx == 0); // closes into a single 2^n-cycle
    }
}

TEST_CASE("S^(2^n) fixes the first n digits") {
    std::mt19937_64 rng(11);
    for (unsigned n = 1; n <= 12; ++n) {
        for (int rep = 0; rep < 400; ++rep) {
            Dyadic x(Int(rng() >> 40), 24);
            Dyadic y = odometer_pow(x, pow2_int(n));
            for (unsigned i = 1; i <= n; ++i) CHECK(x.digit(i) == y.digit(i));
        }
    }
}

TEST_CASE("S permutes the dyadic grid cells bijectively") {
    for (unsigned n = 1; n <= 12; ++n) {
        const std::uint64_t size = 1ull << n;
        std::vector<bool> hit(size, false);
        for (std::uint64_t j = 0; j < size; ++j) {
            Dyadic x = from_digit_integer(Int(j));
            // restrict to the n-digit part: cells are indexed by prefixes
            Int prefix = digit_integer_prefix(odometer_step(x), n);
            std::uint64_t k = prefix.convert_to<std::uint64_t>();
            CHECK_FALSE(hit[k]);
            hit[k] = true;
        }
    }
}

TEST_CASE("tower coordinates: examples") {
    SquarePoint p0{Dyadic(), Rat(0)};
    for (unsigned n : {1u, 3u, 7u}) {
        TowerCoords c = tower_coords(p0, n);
        CHECK(c.x_n.is_zero());
        CHECK(c.y_n == 0);
    }
    TowerCoords c1 = tower_coords(SquarePoint{dy(Rat(1, 2)), Rat(1, 3)}, 1);
    CHECK(c1.x_n.is_zero());
    CHECK(c1.y_n == Rat(4, 3));
    TowerCoords c2 = tower_coords(SquarePoint{dy(Rat(3, 4)), Rat(0)}, 2);
    CHECK(c2.x_n.is_zero());
    CHECK(c2.y_n == 3);
}

TEST_CASE("tower coordinates round-trip") {
    std::mt19937_64 rng(301);
    for (int rep = 0; rep < 10000; ++rep) {
        SquarePoint p{Dyadic(Int(rng() >> 40), 24), Rat(Int(rng() >> 44), pow2_int(20))};
        unsigned n = 1 + static_cast<unsigned>(rng() % 12);
        TowerCoords c = tower_coords(p, n);
        CHECK(c.x_n.to_rat() < pow2_rat(-static_cast<long>(n)));
        CHECK(c.y_n < pow2_rat(n));
        SquarePoint q = tower_uncoords(c);
        CHECK(q.x == p.x);
        CHECK(q.y == p.y);
    }
}

TEST_CASE("tower_roof_map is the induced return map") {
    CHECK(tower_roof_map(Dyadic(), 1).to_rat() == Rat(1, 4));
    CHECK(tower_roof_map(Dyadic(), 2).to_rat() == Rat(1, 8));
    // base interval is preserved
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 500; ++rep) {
        unsigned n = 1 + static_cast<unsigned>(rng() % 10);
        // x_n with first n digits zero
        Dyadic x = odometer_pow(Dyadic(), Int(rng() % 4096) << n);
        Dyadic y = tower_roof_map(x, n);
        CHECK(y.to_rat() < pow2_rat(-static_cast<long>(n)));
    }
}
