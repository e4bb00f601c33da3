#include "birkhoff/phi.hpp"

namespace birkhoff {

Phi Phi::power(const Rat& exponent) {
    if (!(exponent < 0)) throw ConfigInvalid("phi power exponent must be negative");
    Phi p;
    p.kind_ = Kind::Power;
    p.exponent_ = exponent;
    return p;
}

Phi Phi::log_reciprocal(unsigned base) {
    if (base < 2) throw ConfigInvalid("phi log base must be >= 2");
    Phi p;
    p.kind_ = Kind::LogReciprocal;
    p.base_ = base;
    return p;
}

RatInterval log2_enclosure(const Rat& t, unsigned frac_bits) {
    if (t <= 0) throw Error("log2_enclosure: t must be positive");
    {
        // exact for powers of two
        unsigned long en = 0, ed = 0;
        if (is_power_of_two(rat_num(t), en) && is_power_of_two(rat_den(t), ed)) {
            Rat v(static_cast<long long>(en) - static_cast<long long>(ed));
            return RatInterval(v);
        }
    }
    // integer part from the bit lengths, then at most one correction step
    long ip = static_cast<long>(boost::multiprecision::msb(rat_num(t))) -
              static_cast<long>(boost::multiprecision::msb(rat_den(t)));
    Rat v = t * pow2_rat(-ip);
    while (v >= 2) {
        v /= 2;
        ++ip;
    }
    while (v < 1) {
        v *= 2;
        --ip;
    }
    // binary digits of the fractional part by repeated squaring; v in [1, 2)
    Rat frac_lo = 0, scale = Rat(1, 2);
    for (unsigned i = 0; i < frac_bits; ++i) {
        v = v * v;
        if (v >= 2) {
            frac_lo += scale;
            v /= 2;
        }
        scale /= 2;
        // cap the numerator growth; rounding down keeps the bracket valid
        if (rat_num(v).str().size() > 64) {
            Int den = pow2_int(128);
            v = Rat(floor_rat(v * Rat(den)), den);
            if (v < 1) v = 1;
        }
    }
    return {Rat(ip) + frac_lo, Rat(ip) + frac_lo + scale * 2};
}

RatInterval Phi::enclosure(const Rat& t) const {
    if (kind_ == Kind::Power) {
        // t^(-p/q) = 1 / (t^p)^(1/q)
        Int pnum = -rat_num(exponent_);
        Int pden = rat_den(exponent_);
        Rat tp = t;
        Rat powv = 1;
        Int e = pnum;
        // t^pnum by repeated squaring on rationals
        while (e > 0) {
            if (boost::multiprecision::bit_test(e, 0)) powv *= tp;
            tp *= tp;
            e >>= 1;
        }
        unsigned root = pden.convert_to<unsigned>();
        Rat exact;
        if (exact_nth_root(powv, root, exact)) return RatInterval(Rat(1) / exact);
        RatInterval r = nth_root_enclosure(powv, root);
        return {Rat(1) / r.hi, Rat(1) / r.lo};
    }
    // 1 / log_base(t) = log2(base) / log2(t) as an enclosure
    if (t <= 1) throw Error("phi log-reciprocal needs t > 1");
    RatInterval lt = log2_enclosure(t);
    if (base_ == 2) return {Rat(1) / lt.hi, Rat(1) / lt.lo};
    RatInterval lb = log2_enclosure(Rat(base_));
    return {lb.lo / lt.hi, lb.hi / lt.lo};
}

RatInterval Phi::enclosure(const RatInterval& t) const {
    // phi is decreasing in t
    RatInterval at_lo = enclosure(t.lo);
    RatInterval at_hi = enclosure(t.hi);
    return {at_hi.lo, at_lo.hi};
}

std::string Phi::describe() const {
    if (kind_ == Kind::Power) return "t^(" + rat_to_string(exponent_) + ")";
    return "1/log" + std::to_string(base_) + "(t)";
}

} // namespace birkhoff
