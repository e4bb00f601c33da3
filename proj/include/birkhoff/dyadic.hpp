#pragma once

#include <string>

#include "birkhoff/rational.hpp"

namespace birkhoff {

// Binary rational num / 2^exp in canonical form: num odd, or num = 0 and
// exp = 0. Kept separate from Rat because the odometer works on the binary
// digit expansion directly.
class Dyadic {
  public:
    Dyadic() : num_(0), exp_(0) {}
    Dyadic(Int num, unsigned exp) : num_(std::move(num)), exp_(exp) { normalize(); }

    static Dyadic from_int(const Int& n) { return Dyadic(n, 0); }

    // Throws NonDyadicDenominator unless den(r) is a power of two.
    static Dyadic from_rat(const Rat& r);

    const Int& num() const { return num_; }
    unsigned exp() const { return exp_; }

    Rat to_rat() const { return Rat(num_, pow2_int(exp_)); }
    bool is_zero() const { return num_ == 0; }

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;
    Dyadic operator-() const { return Dyadic(-num_, exp_); }
    Dyadic operator*(const Dyadic& o) const { return Dyadic(num_ * o.num_, exp_ + o.exp_); }

    // x * 2^k, k may be negative.
    Dyadic times_pow2(long k) const;

    bool operator==(const Dyadic& o) const { return num_ == o.num_ && exp_ == o.exp_; }
    bool operator!=(const Dyadic& o) const { return !(*this == o); }
    bool operator<(const Dyadic& o) const { return to_rat() < o.to_rat(); }
    bool operator<=(const Dyadic& o) const { return to_rat() <= o.to_rat(); }

    // i-th binary digit of the fractional expansion x = sum x_i / 2^i, i >= 1.
    bool digit(unsigned i) const;

    // Serialized as "num/2^exp".
    std::string to_string() const;
    static Dyadic from_string(const std::string& s);

  private:
    void normalize();

    Int num_;
    unsigned exp_;
};

} // namespace birkhoff
