#pragma once

#include <functional>
#include <vector>

#include "birkhoff/rational.hpp"

namespace birkhoff {

struct Convergent {
    Int p;
    Int q;
};

// Irrational c in (0, 1) given by its continued fraction [0; a_1, a_2, ...].
// Only finitely many quotients are stored; an optional rule generates more on
// demand so enclosures of any requested accuracy stay certified.
class CFNumber {
  public:
    using ExtendRule = std::function<Int(std::size_t)>; // k -> a_k (1-based)

    explicit CFNumber(std::vector<Int> quotients, ExtendRule rule = nullptr);

    // a_{k+1} = 10^(k+1); the growth makes beta_k <= 1/a_{k+1} fall fast.
    static CFNumber pow10(std::size_t initial_count = 4);

    std::size_t stored() const { return quotients_.size(); }
    const std::vector<Int>& quotients() const { return quotients_; }

    // Ensure quotients a_1..a_k exist; throws PrecisionExhausted without rule.
    void ensure(std::size_t k) const;

    // p_k / q_k, k >= 0 (p_0/q_0 = 0/1).
    Convergent convergent(std::size_t k) const;

    // Enclosure of c from convergents of depth >= k+1.
    RatInterval enclosure(std::size_t k) const;

    // beta_k = q_k^2 (c - p_k/q_k), positive for even k (approximation from
    // below). Requires quotient a_{k+1}.
    RatInterval beta(std::size_t k) const;

  private:
    mutable std::vector<Int> quotients_;
    mutable std::vector<Convergent> convergents_; // index k, computed lazily
    ExtendRule rule_;
};

} // namespace birkhoff
