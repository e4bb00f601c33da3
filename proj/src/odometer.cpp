#include "birkhoff/odometer.hpp"

namespace birkhoff {
namespace odometer {

namespace {

// Reverse the low `bits` bits of v (v < 2^bits).
Int reverse_bits(const Int& v, unsigned bits) {
    Int out = 0;
    for (unsigned i = 0; i < bits; ++i)
        if (boost::multiprecision::bit_test(v, i))
            boost::multiprecision::bit_set(out, bits - 1 - i);
    return out;
}

} // namespace

Int digit_integer(const Dyadic& x) {
    if (x.is_zero()) return 0;
    if (x.num() < 0 || x.to_rat() >= 1)
        throw Error("odometer point must lie in [0, 1): " + x.to_string());
    return reverse_bits(x.num(), x.exp());
}

Dyadic from_digit_integer(const Int& j) {
    if (j < 0) throw NegativeOrbitUnderflow("digit integer " + j.str() + " < 0");
    if (j == 0) return Dyadic();
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(j)) + 1;
    return Dyadic(reverse_bits(j, bits), bits);
}

Int digit_integer_prefix(const Dyadic& x, unsigned n) {
    Int j = digit_integer(x);
    Int mask = pow2_int(n) - 1;
    return j & mask;
}

Dyadic odometer_step(const Dyadic& x) { return from_digit_integer(digit_integer(x) + 1); }

Dyadic odometer_pow(const Dyadic& x, const Int& k) {
    Int j = digit_integer(x) + k;
    if (j < 0)
        throw NegativeOrbitUnderflow("S^" + k.str() + " applied to " + x.to_string());
    return from_digit_integer(j);
}

TowerCoords tower_coords(const SquarePoint& p, unsigned n) {
    Int j = digit_integer_prefix(p.x, n);
    TowerCoords c;
    c.n = n;
    c.x_n = odometer_pow(p.x, -j);
    c.y_n = p.y + Rat(j);
    return c;
}

SquarePoint tower_uncoords(const TowerCoords& c) {
    Int j = floor_rat(c.y_n);
    SquarePoint p;
    p.x = odometer_pow(c.x_n, j);
    p.y = c.y_n - Rat(j);
    return p;
}

Dyadic tower_roof_map(const Dyadic& x_n, unsigned n) {
    return odometer_pow(x_n, pow2_int(n));
}

} // namespace odometer
} // namespace birkhoff
