#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "birkhoff/dyadic.hpp"
#include "birkhoff/odometer.hpp"

namespace birkhoff {

// Seeded sampling over dyadic grids. mt19937_64 has a fully specified
// sequence, so identical seeds replay identical grids everywhere.
class DyadicSampler {
  public:
    explicit DyadicSampler(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t bits(unsigned n) {
        // n <= 64
        return n == 64 ? rng_() : (rng_() >> (64 - n));
    }

    // Uniform dyadic in [0, 1) with at most `depth` binary digits.
    Dyadic dyadic01(unsigned depth) {
        std::uint64_t v = bits(depth);
        return Dyadic(Int(v), depth);
    }

    // Uniform rational k/2^depth in [0, hi) for dyadic hi.
    Rat rat_below(const Rat& hi, unsigned depth) {
        Rat u = Rat(Int(bits(depth)), pow2_int(depth));
        return u * hi;
    }

    SquarePoint square_point(unsigned depth) {
        Dyadic x = dyadic01(depth);
        Rat y = Rat(Int(bits(depth)), pow2_int(depth));
        return SquarePoint{x, y};
    }

    std::vector<SquarePoint> square_points(std::size_t count, unsigned depth) {
        std::vector<SquarePoint> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(square_point(depth));
        return out;
    }

    std::mt19937_64& raw() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

} // namespace birkhoff
