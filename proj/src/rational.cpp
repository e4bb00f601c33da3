#include "birkhoff/rational.hpp"

#include <cctype>

namespace birkhoff {

Rat rat_from_string(const std::string& s) {
    auto valid_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            if (!valid_int(s)) throw ConfigInvalid("bad rational: '" + s + "'");
            return Rat(Int(s));
        }
        std::string ns = s.substr(0, slash);
        std::string ds = s.substr(slash + 1);
        if (!valid_int(ns) || !valid_int(ds)) throw ConfigInvalid("bad rational: '" + s + "'");
        Int d(ds);
        if (d == 0) throw ConfigInvalid("zero denominator: '" + s + "'");
        return Rat(Int(ns), d);
    } catch (const std::exception& e) {
        throw ConfigInvalid(std::string("bad rational: '") + s + "': " + e.what());
    }
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

RatInterval RatInterval::operator*(const RatInterval& o) const {
    Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    Rat mn = a, mx = a;
    for (const Rat& x : {b, c, d}) {
        if (x < mn) mn = x;
        if (x > mx) mx = x;
    }
    return {mn, mx};
}

RatInterval RatInterval::operator/(const RatInterval& o) const {
    if (o.lo <= 0 && o.hi >= 0) throw Error("interval division by enclosure containing zero");
    return *this * RatInterval(Rat(1) / o.hi, Rat(1) / o.lo);
}

RatInterval RatInterval::operator/(const Rat& x) const {
    if (x == 0) throw Error("interval division by zero");
    return *this * Rat(Rat(1) / x);
}

RatInterval hull(const RatInterval& a, const RatInterval& b) {
    return {a.lo < b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi};
}

Rat ceil_to_dyadic(const Rat& x, unsigned bits) {
    Int num = rat_num(x) << bits;
    Int den = rat_den(x);
    Int q = num / den;
    if (q * den != num && num > 0) ++q;
    return Rat(q, pow2_int(bits));
}

bool is_power_of_two(const Int& v, unsigned long& exp_out) {
    if (v <= 0) return false;
    unsigned long m = boost::multiprecision::msb(v);
    if (boost::multiprecision::lsb(v) != m) return false;
    exp_out = m;
    return true;
}

bool exact_nth_root(const Rat& t, unsigned root, Rat& out) {
    if (t <= 0) return false;
    Int n = rat_num(t), d = rat_den(t);
    Int rn = 0, rd = 0;
    auto iroot_exact = [&](const Int& v, Int& r) {
        unsigned long e = 0;
        if (is_power_of_two(v, e)) {
            if (e % root != 0) return false;
            r = Int(1) << (e / root);
            return true;
        }
        // bisection from an msb-derived bracket
        unsigned long bits = boost::multiprecision::msb(v) + 1;
        Int lo = Int(1) << (bits > root ? (bits - 1) / root : 0);
        Int hi = (Int(1) << (bits / root + 1));
        while (lo < hi) {
            Int mid = (lo + hi) / 2;
            if (boost::multiprecision::pow(mid, root) < v)
                lo = mid + 1;
            else
                hi = mid;
        }
        r = lo;
        return boost::multiprecision::pow(lo, root) == v;
    };
    if (!iroot_exact(n, rn) || !iroot_exact(d, rd)) return false;
    out = Rat(rn, rd);
    return true;
}

RatInterval nth_root_enclosure(const Rat& t, unsigned root, unsigned prec_bits) {
    if (t <= 0) throw Error("nth_root_enclosure requires t > 0");
    Rat ex;
    if (exact_nth_root(t, root, ex)) return RatInterval(ex);
    // Scale so the integer root carries prec_bits of fraction: take the
    // integer root of t * 2^(root*prec_bits) and divide by 2^prec_bits.
    Int scaled_num = rat_num(t) << (root * prec_bits);
    Int whole = scaled_num / rat_den(t);
    unsigned long bits = boost::multiprecision::msb(whole) + 1;
    Int lo = Int(1) << ((bits - 1) / root);
    Int hi = (Int(1) << (bits / root + 1));
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        if (boost::multiprecision::pow(mid, root) <= whole)
            lo = mid;
        else
            hi = mid - 1;
    }
    Int denom = pow2_int(prec_bits);
    return {Rat(lo, denom), Rat(lo + 1, denom)};
}

} // namespace birkhoff
