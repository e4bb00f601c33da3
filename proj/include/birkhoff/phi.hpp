#pragma once

#include <string>

#include "birkhoff/rational.hpp"

namespace birkhoff {

// Prescribed decay rate phi(t) -> 0, evaluated as a certified enclosure on
// rational t (exact whenever t is an aligned power).
class Phi {
  public:
    enum class Kind { Power, LogReciprocal };

    static Phi power(const Rat& exponent);        // phi(t) = t^exponent, exponent < 0
    static Phi log_reciprocal(unsigned base = 2); // phi(t) = 1 / log_base(t), t > 1

    Kind kind() const { return kind_; }
    const Rat& exponent() const { return exponent_; }
    unsigned base() const { return base_; }

    RatInterval enclosure(const Rat& t) const;
    RatInterval enclosure(const RatInterval& t) const;

    std::string describe() const;

  private:
    Phi() = default;
    Kind kind_ = Kind::Power;
    Rat exponent_;
    unsigned base_ = 2;
};

// Enclosure of log2(t) for t > 0, with frac_bits binary digits.
RatInterval log2_enclosure(const Rat& t, unsigned frac_bits = 16);

} // namespace birkhoff
