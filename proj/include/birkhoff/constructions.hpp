#pragma once

#include <optional>
#include <string>
#include <vector>

#include "birkhoff/flows.hpp"
#include "birkhoff/report.hpp"

namespace birkhoff {
namespace constructions {

enum class FamilyMode { Convergent, Divergent };

struct Thm2Entry {
    unsigned p; // tower height exponent
    Rat a;      // amplitude
    Rat d;      // plateau fraction, in (0, 1/2)
};

class Thm2Schedule {
  public:
    explicit Thm2Schedule(std::vector<Thm2Entry> entries);

    std::size_t size() const { return entries_.size(); }
    const std::vector<Thm2Entry>& entries() const { return entries_; }
    const Thm2Entry& entry(std::size_t n) const { return entries_.at(n - 1); } // 1-based

    Rat plateau_len(std::size_t n) const; // L_n = d_n 2^(p_n - 1)
    Rat t_n(std::size_t n) const;         // 2^(p_n - 2)
    // alpha_n = (sum_{m>n} a_m) / a_n over the stored prefix
    Rat alpha(std::size_t n) const;
    // eta_n: smallest recorded value with sum_{m>n} a_m <= eta_n * a_n * d_n
    Rat eta(std::size_t n) const;
    Rat tail_sum(std::size_t n) const; // sum_{m>n} a_m

  private:
    std::vector<Thm2Entry> entries_;
    std::vector<Rat> tail_; // tail_[n] = sum_{m>n} a_m, 0-based n in [0, size]
};

Thm2Schedule schedule_default(std::size_t N, FamilyMode mode);

struct ScheduleTrendRow {
    std::size_t n;
    Rat eta;
    Rat alpha;
    Rat divergence_term; // a_n d_n 2^(p_n)
    Rat increment;       // 2 a_n L_n = ||f_n||_{inf,1}
};

struct ScheduleCertificate {
    bool ok = true;
    std::vector<std::string> violations;
    std::vector<ScheduleTrendRow> trend; // finite-prefix ratios, for inspection
};

ScheduleCertificate schedule_validate(const Thm2Schedule& s, FamilyMode mode);

// f_n of the slow-convergence family: +a_n on [0, L_n), -a_n on
// [2^(p_n-1), 2^(p_n-1)+L_n), 0 elsewhere; constant in x_n.
flows::TowerFunction build_fn_thm2(const Thm2Schedule& s, std::size_t n);

flows::SeriesFunction build_series(const Thm2Schedule& s);

// Exact check that A(sum_{m<n} f_m, t_n, p) = 0 at every sample; returns the
// first failing point if any.
std::optional<SquarePoint> vanish_check_earlier_terms(const Thm2Schedule& s, std::size_t n,
                                                      const std::vector<SquarePoint>& points);

// Distribution of A_n = A(f_n, t_n, .) over the square, normalized measures.
struct Thm2Distribution {
    Rat value_max;   // 2 a_n d_n
    Rat measure_zero; // {A_n = 0}: 1/2 - d_n
    Rat measure_max;  // {A_n = +max}: 1/4 - d_n/2
    Rat measure_min;  // {A_n = -max}: same
    Rat measure_ramps;
};

Thm2Distribution thm2_distribution(const Thm2Schedule& s, std::size_t n);

// Uniform-rate sweep for the summable family: asserts every certified |A|
// below 2 * sum ||f_n||_{inf,1} / t.
RateReport thm1_uniform_bound_sweep(const flows::SeriesFunction& f, const std::vector<Rat>& ts,
                                    const std::vector<SquarePoint>& points);

// Slow-rate sweep at the times t_n: certified |A| against 2 a_n d_n plus the
// recorded tail.
RateReport thm2_rate_sweep(const Thm2Schedule& s, const flows::SeriesFunction& f,
                           std::size_t n_lo, std::size_t n_hi,
                           const std::vector<SquarePoint>& points);

} // namespace constructions
} // namespace birkhoff
