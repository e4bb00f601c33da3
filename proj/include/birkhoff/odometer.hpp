#pragma once

#include "birkhoff/dyadic.hpp"
#include "birkhoff/rational.hpp"

namespace birkhoff {

// Point of the unit square carrying the suspension flow over the odometer.
struct SquarePoint {
    Dyadic x; // in [0, 1)
    Rat y;    // in [0, 1)
};

// Coordinates on the rectangle [0, 2^-n) x [0, 2^n) obtained by unrolling
// odometer orbits of length 2^n.
struct TowerCoords {
    unsigned n = 0;
    Dyadic x_n; // in [0, 2^-n)
    Rat y_n;    // in [0, 2^n)
};

namespace odometer {

// LSB-first integer encoded by the binary digits of x in [0, 1). The
// odometer is "+1 with carry" on this encoding, which is what makes
// odometer_pow a single big-integer addition.
Int digit_integer(const Dyadic& x);
Dyadic from_digit_integer(const Int& j);

// Integer encoded by the first n digits only (== digit_integer mod 2^n).
Int digit_integer_prefix(const Dyadic& x, unsigned n);

Dyadic odometer_step(const Dyadic& x);

// S^k; throws NegativeOrbitUnderflow when the backward orbit leaves the
// finite-expansion model (digit integer would go negative).
Dyadic odometer_pow(const Dyadic& x, const Int& k);

TowerCoords tower_coords(const SquarePoint& p, unsigned n);
SquarePoint tower_uncoords(const TowerCoords& c);

// Induced first-return map on the tower base [0, 2^-n): S^(2^n).
Dyadic tower_roof_map(const Dyadic& x_n, unsigned n);

} // namespace odometer
} // namespace birkhoff
