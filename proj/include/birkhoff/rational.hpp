#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>

#include "birkhoff/errors.hpp"

namespace birkhoff {

// Exact arbitrary-precision integers and rationals. cpp_rational keeps the
// canonical reduced form (positive denominator, gcd(num, den) = 1) after
// every operation, which is exactly the invariant the domain types need.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

// 2^k for k >= 0.
inline Int pow2_int(unsigned k) {
    Int one = 1;
    return one << k;
}

// 2^k as a rational, k may be negative.
inline Rat pow2_rat(long k) {
    if (k >= 0) return Rat(pow2_int(static_cast<unsigned>(k)));
    return Rat(1, pow2_int(static_cast<unsigned>(-k)));
}

inline Int floor_rat(const Rat& r) {
    Int q = rat_num(r) / rat_den(r);
    if (r < 0 && q * rat_den(r) != rat_num(r)) --q;
    return q;
}

inline Int ceil_rat(const Rat& r) { return -floor_rat(-r); }

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

// r mod m for m > 0, result in [0, m).
inline Rat mod_rat(const Rat& r, const Rat& m) {
    Rat out = r - Rat(floor_rat(r / m)) * m;
    if (out < 0) out += m; // guards against r/m rounding at the boundary
    if (out >= m) out -= m;
    return out;
}

inline Rat abs_rat(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline std::string rat_to_string(const Rat& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) {
        s += "/";
        s += rat_den(r).str();
    }
    return s;
}

// Parses "n", "n/d" or a plain integer string; throws ConfigInvalid on junk.
Rat rat_from_string(const std::string& s);

double rat_to_double(const Rat& r);

// Closed interval [lo, hi] with exact rational endpoints. Used wherever an
// irrational quantity (continued-fraction limits, roots) enters an exact
// computation.
struct RatInterval {
    Rat lo;
    Rat hi;

    RatInterval() = default;
    explicit RatInterval(const Rat& x) : lo(x), hi(x) {}
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {}

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }

    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    RatInterval operator+(const Rat& x) const { return {lo + x, hi + x}; }
    RatInterval operator-(const Rat& x) const { return {lo - x, hi - x}; }
    RatInterval operator*(const Rat& x) const {
        if (x >= 0) return {lo * x, hi * x};
        return {hi * x, lo * x};
    }
    RatInterval operator*(const RatInterval& o) const;
    // Division by an interval not containing zero.
    RatInterval operator/(const RatInterval& o) const;
    RatInterval operator/(const Rat& x) const;

    // Strict comparisons that are decidable from the enclosure.
    bool surely_lt(const Rat& x) const { return hi < x; }
    bool surely_gt(const Rat& x) const { return lo > x; }
    bool surely_lt(const RatInterval& o) const { return hi < o.lo; }
    bool surely_gt(const RatInterval& o) const { return lo > o.hi; }
};

RatInterval hull(const RatInterval& a, const RatInterval& b);

// Enclosure of t^(1/root) for t > 0, relative width <= 2^-prec_bits.
RatInterval nth_root_enclosure(const Rat& t, unsigned root, unsigned prec_bits = 64);

// Exact n-th root when t is a perfect n-th power of a rational, else nullopt
// semantics via the bool flag.
bool exact_nth_root(const Rat& t, unsigned root, Rat& out);

bool is_power_of_two(const Int& v, unsigned long& exp_out);

// Smallest k/2^bits >= x. Works on the raw integers, so it stays cheap even
// when x carries an astronomically large denominator.
Rat ceil_to_dyadic(const Rat& x, unsigned bits);

} // namespace birkhoff
