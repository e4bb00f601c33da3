#pragma once

#include <optional>
#include <vector>

#include "birkhoff/cf.hpp"
#include "birkhoff/piecewise.hpp"
#include "birkhoff/report.hpp"

namespace birkhoff {
namespace torus {

// Normalized stage profiles. The box is parameterized by xi = x_n * q in
// [0, 1] across the flow and eta = tau / q along it (tau is flow time within
// the column, the arc coordinate is y_n = tau * sqrt(1 + c^2)). g is a
// plateau bump with smoothstep ramps, h the antisymmetric four-quarter
// profile of the construction; both take values in [-1, 1].
class Profiles {
  public:
    Profiles(Rat x_margin, Rat y_ramp);

    const Rat& x_margin() const { return x_margin_; }
    const Rat& y_ramp() const { return y_ramp_; }

    Rat g(const Rat& xi) const;
    Rat h(const Rat& eta) const; // eta reduced mod 1 by the caller
    // Antiderivative of h with H(0) = 0; H(1) = 0 exactly (zero column
    // integral is structural), so the periodic extension is H(frac(eta)).
    Rat H(const Rat& eta) const;

    RatInterval g_int(const RatInterval& xi) const;
    RatInterval H_int(const RatInterval& eta) const; // |h| <= 1 gives the widening

    // float-path evaluations for the quadrature oracle
    double h_double(double eta) const;
    double g_double(double xi) const;

    // interior breakpoints of h on [0, 1], for quadrature splitting
    std::vector<Rat> h_breakpoints() const;

  private:
    Rat x_margin_;
    Rat y_ramp_;
};

struct Stage {
    std::size_t k; // convergent index, even (approximation from below)
    Int p, q;
    Int p_inv;   // p^{-1} mod q when q > 1
    Rat a;       // amplitude
    Rat delta;   // averaging time t_n = delta * q * sqrt(1 + c^2)
};

class TorusParams {
  public:
    TorusParams(CFNumber cf, Profiles prof, std::vector<std::pair<std::size_t, std::pair<Rat, Rat>>> stages,
                Rat beta_threshold = Rat(1, 8));

    // Stage set used by the slow-convergence experiment: convergent indices
    // 0, 2, 4 with amplitudes/window fractions solved so the certified
    // phi-ratio grows by more than 5x per stage for phi = t^(-1/4).
    static TorusParams default_experiment();

    const CFNumber& cf() const { return cf_; }
    const Profiles& profiles() const { return prof_; }
    const std::vector<Stage>& stages() const { return stages_; }
    const Stage& stage(std::size_t n) const { return stages_.at(n - 1); } // 1-based

    RatInterval c(unsigned extra_depth = 0) const;
    RatInterval sqrt1c2() const; // sqrt(1 + c^2)
    RatInterval beta(std::size_t n) const;
    RatInterval t_n(std::size_t n) const; // delta * q * sqrt(1 + c^2)
    Rat tail_sum(std::size_t n) const;    // sum_{m>n} a_m

    // Certified bound for |A(f_m, t_n, .)| with m < n: the head/tail
    // estimate 2 a_m q_m sqrt(1+c^2) / t_n plus the sliver-crossing
    // allowance (the winding's beta_m-defect interrupts full columns about
    // t_n beta_m / q_m times; each interruption costs at most a_m q_m / 2).
    Rat earlier_term_bound(std::size_t m, std::size_t n) const;

  private:
    CFNumber cf_;
    Profiles prof_;
    std::vector<Stage> stages_;
    Rat beta_threshold_;
    mutable std::size_t depth_ = 0; // enclosure depth in use
};

struct TorusPoint {
    Rat x;         // exact
    RatInterval y; // carries the c-enclosure uncertainty
};

struct StageCoords {
    RatInterval x_n; // in [0, 1/q)
    Rat tau;         // flow time within the column, in [0, q)
};

// Flow box chart: Phi(x_n, tau) = (tau mod 1, x_n + c tau mod 1).
TorusPoint torus_point(const TorusParams& par, std::size_t n, const Rat& x_n, const Rat& tau);
TorusPoint flow(const TorusParams& par, const TorusPoint& pt, const Rat& s);

// Chart inversion. nullopt = Outside (the beta_n sliver: no chart or an
// ambiguous overlap). Throws PrecisionExhausted if the enclosure cannot be
// refined enough to decide membership.
std::optional<StageCoords> torus_coords(const TorusParams& par, std::size_t n, const TorusPoint& pt);

// f_n evaluated through the chart (0 when Outside).
RatInterval f_eval(const TorusParams& par, std::size_t n, const TorusPoint& pt);

// A(f_n, T, .) for a window [tau0, tau0 + T] that stays inside one column of
// stage n: closed form from the antiderivative.
RatInterval avg_current_term(const TorusParams& par, std::size_t n, const RatInterval& g_xi,
                             const Rat& tau0, const RatInterval& T);

// Exact-enclosure A(f_m, T, pt) by walking the orbit column by column; full
// columns vanish via the antiderivative, interruptions are handled by
// re-inverting the chart at exact times. Cost O(T / q_m).
RatInterval measured_avg_term(const TorusParams& par, std::size_t m, const TorusPoint& pt,
                              const RatInterval& T);

struct Thm3Row {
    std::size_t n = 0;
    Int q;
    double t = 0;
    double current_abs = 0;    // |A(f_n, t_n, pt)|, certified midpoint
    RatInterval certified_abs; // |A(f, t_n, pt)| enclosure incl. earlier/tail bounds
    RatInterval phi;
    RatInterval ratio; // certified_abs / phi
    bool window_ok = false;
};

struct Thm3Report {
    std::vector<Thm3Row> rows; // one row per stage: worst sample
    bool windows_ok = true;
    bool growth_ok = true; // ratio grows by >= growth_factor between stages
};

// Plateau-point experiment: phi = t^(-1/4). The window [win_lo, win_hi]
// is checked on the extracted current term (earlier/tail contributions are
// certified bounds, reported inside certified_abs).
Thm3Report thm3_experiment(const TorusParams& par, std::size_t points_per_stage,
                           std::uint64_t seed, const Rat& win_lo, const Rat& win_hi,
                           const Rat& growth_factor);

std::string thm3_report_csv(const Thm3Report& rep);

Int mod_inverse(const Int& a, const Int& m);

} // namespace torus
} // namespace birkhoff
