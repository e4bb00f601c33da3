#include "birkhoff/dyadic.hpp"

namespace birkhoff {

void Dyadic::normalize() {
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    while (exp_ > 0 && !boost::multiprecision::bit_test(abs(num_), 0)) {
        num_ >>= 1;
        --exp_;
    }
}

Dyadic Dyadic::from_rat(const Rat& r) {
    Int d = rat_den(r);
    unsigned e = 0;
    while (d > 1 && !boost::multiprecision::bit_test(d, 0)) {
        d >>= 1;
        ++e;
    }
    if (d != 1)
        throw NonDyadicDenominator("denominator " + rat_den(r).str() + " is not a power of two");
    return Dyadic(rat_num(r), e);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    unsigned e = std::max(exp_, o.exp_);
    Int a = num_ << (e - exp_);
    Int b = o.num_ << (e - o.exp_);
    return Dyadic(a + b, e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::times_pow2(long k) const {
    if (num_ == 0) return Dyadic();
    if (k >= 0) {
        long drop = std::min<long>(k, exp_);
        return Dyadic(num_ << (k - drop), exp_ - static_cast<unsigned>(drop));
    }
    return Dyadic(num_, exp_ + static_cast<unsigned>(-k));
}

bool Dyadic::digit(unsigned i) const {
    // x = num / 2^exp with 0 <= x < 1 assumed by callers; digit i is bit
    // exp - i of num.
    if (i == 0 || i > exp_) return false;
    return boost::multiprecision::bit_test(num_, exp_ - i);
}

std::string Dyadic::to_string() const {
    return num_.str() + "/2^" + std::to_string(exp_);
}

Dyadic Dyadic::from_string(const std::string& s) {
    auto pos = s.find("/2^");
    if (pos == std::string::npos) {
        // plain integer form
        return Dyadic(Int(s), 0);
    }
    Int n(s.substr(0, pos));
    unsigned long e = std::stoul(s.substr(pos + 3));
    return Dyadic(n, static_cast<unsigned>(e));
}

} // namespace birkhoff
