#include "birkhoff/cf.hpp"

namespace birkhoff {

CFNumber::CFNumber(std::vector<Int> quotients, ExtendRule rule)
    : quotients_(std::move(quotients)), rule_(std::move(rule)) {
    if (quotients_.empty()) throw Error("CFNumber: need at least one partial quotient");
    for (const Int& a : quotients_)
        if (a < 1) throw Error("CFNumber: partial quotients must be positive");
    convergents_.push_back({Int(0), Int(1)}); // k = 0
}

CFNumber CFNumber::pow10(std::size_t initial_count) {
    std::vector<Int> qs;
    Int v = 1;
    for (std::size_t k = 1; k <= initial_count; ++k) {
        v *= 10;
        qs.push_back(v);
    }
    return CFNumber(std::move(qs), [](std::size_t k) {
        Int v = 1;
        for (std::size_t i = 0; i < k; ++i) v *= 10;
        return v;
    });
}

void CFNumber::ensure(std::size_t k) const {
    while (quotients_.size() < k) {
        if (!rule_)
            throw PrecisionExhausted("continued fraction stores only " +
                                     std::to_string(quotients_.size()) +
                                     " quotients and has no extension rule");
        quotients_.push_back(rule_(quotients_.size() + 1));
        if (quotients_.back() < 1) throw Error("CFNumber: extension rule produced a_k < 1");
    }
}

Convergent CFNumber::convergent(std::size_t k) const {
    ensure(k);
    while (convergents_.size() <= k) {
        std::size_t i = convergents_.size(); // next index to fill
        const Int& a = quotients_[i - 1];
        Convergent prev1 = convergents_[i - 1];
        Convergent prev2 = i >= 2 ? convergents_[i - 2] : Convergent{Int(1), Int(0)};
        convergents_.push_back({a * prev1.p + prev2.p, a * prev1.q + prev2.q});
    }
    return convergents_[k];
}

RatInterval CFNumber::enclosure(std::size_t k) const {
    ensure(k + 1);
    Convergent ck = convergent(k);
    Convergent ck1 = convergent(k + 1);
    Rat a(ck.p, ck.q), b(ck1.p, ck1.q);
    // consecutive convergents bracket c
    return a < b ? RatInterval(a, b) : RatInterval(b, a);
}

RatInterval CFNumber::beta(std::size_t k) const {
    Convergent ck = convergent(k);
    std::size_t depth = k + 1; // needs a_{k+2}; a couple extra terms tighten it
    if (rule_)
        depth = k + 3;
    else if (stored() > depth + 1)
        depth = stored() - 1;
    RatInterval c = enclosure(depth);
    Rat approx(ck.p, ck.q);
    RatInterval diff = c - approx;
    return diff * Rat(ck.q * ck.q);
}

} // namespace birkhoff
