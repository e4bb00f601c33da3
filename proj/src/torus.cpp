#include "birkhoff/torus.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

namespace birkhoff {
namespace torus {

namespace {

// smoothstep u^2 (3 - 2u) on [0, 1] and its integral u^3 - u^4/2
Rat smoothstep(const Rat& u) { return u * u * (Rat(3) - Rat(2) * u); }
Rat smoothstep_I(const Rat& u) { return u * u * u - u * u * u * u / 2; }

std::optional<RatInterval> reduce_mod1(const RatInterval& v) {
    Int m = floor_rat(v.lo);
    RatInterval w = v - Rat(m);
    if (w.hi < 1) return w;
    if (w.lo >= 1) return reduce_mod1(w - Rat(1));
    return std::nullopt; // straddles the seam
}

RatInterval abs_interval(const RatInterval& v) {
    if (v.lo >= 0) return v;
    if (v.hi <= 0) return {-v.hi, -v.lo};
    return {Rat(0), std::max(abs_rat(v.lo), v.hi)};
}

} // namespace

Int mod_inverse(const Int& a, const Int& m) {
    Int old_r = a % m, r = m;
    if (old_r < 0) old_r += m;
    Int old_s = 1, s = 0;
    while (r != 0) {
        Int qt = old_r / r;
        Int tmp = old_r - qt * r;
        old_r = r;
        r = tmp;
        tmp = old_s - qt * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw Error("mod_inverse: arguments not coprime");
    Int inv = old_s % m;
    if (inv < 0) inv += m;
    return inv;
}

Profiles::Profiles(Rat x_margin, Rat y_ramp)
    : x_margin_(std::move(x_margin)), y_ramp_(std::move(y_ramp)) {
    if (!(x_margin_ > 0 && x_margin_ < Rat(1, 2)))
        throw Error("Profiles: x_margin must lie in (0, 1/2)");
    if (!(y_ramp_ > 0 && y_ramp_ < Rat(1, 8)))
        throw Error("Profiles: y_ramp must lie in (0, 1/8)");
}

Rat Profiles::g(const Rat& xi) const {
    if (xi < 0 || xi > 1) throw Error("Profiles::g: xi outside [0, 1]");
    if (xi <= x_margin_) return smoothstep(xi / x_margin_);
    if (xi >= Rat(1) - x_margin_) return smoothstep((Rat(1) - xi) / x_margin_);
    return Rat(1);
}

Rat Profiles::h(const Rat& eta) const {
    if (eta < 0 || eta >= 1) throw Error("Profiles::h: eta outside [0, 1)");
    const Rat& r = y_ramp_;
    if (eta < Rat(1, 2)) {
        if (eta <= r) return smoothstep(eta / r);
        if (eta < Rat(1, 4) - r) return Rat(1);
        if (eta < Rat(1, 4)) return smoothstep((Rat(1, 4) - eta) / r);
        return Rat(0);
    }
    return -h(eta - Rat(1, 2)); // antisymmetric half
}

Rat Profiles::H(const Rat& eta) const {
    if (eta == 1) return Rat(0);
    if (eta < 0 || eta > 1) throw Error("Profiles::H: eta outside [0, 1]");
    const Rat& r = y_ramp_;
    auto Hhalf = [&](const Rat& e) -> Rat { // integral of the positive half shape on [0, 1/2]
        if (e <= r) return Rat(r * smoothstep_I(e / r));
        Rat acc = r / 2;
        if (e <= Rat(1, 4) - r) return Rat(acc + (e - r));
        acc += Rat(1, 4) - 2 * r;
        if (e <= Rat(1, 4)) {
            // integral of s((1/4 - eta)/r) from 1/4-r to e
            Rat u0 = Rat(1); // at eta = 1/4 - r
            Rat u1 = (Rat(1, 4) - e) / r;
            return Rat(acc + r * (smoothstep_I(u0) - smoothstep_I(u1)));
        }
        return Rat(acc + r / 2);
    };
    if (eta <= Rat(1, 2)) return Hhalf(eta);
    return Rat(Hhalf(Rat(1, 2)) - Hhalf(Rat(eta - Rat(1, 2))));
}

RatInterval Profiles::g_int(const RatInterval& xi) const {
    Rat a = g(xi.lo), b = g(xi.hi);
    Rat lip = Rat(3) / (2 * x_margin_);
    Rat w = xi.width() * lip;
    Rat lo = std::min(a, b) - w, hi = std::max(a, b) + w;
    if (lo < 0) lo = 0;
    if (hi > 1) hi = 1;
    return {lo, hi};
}

RatInterval Profiles::H_int(const RatInterval& eta) const {
    Rat a = H(eta.lo), b = H(eta.hi);
    Rat w = eta.width(); // |h| <= 1
    return {std::min(a, b) - w, std::max(a, b) + w};
}

double Profiles::h_double(double eta) const {
    if (eta >= 0.5) return -h_double(eta - 0.5);
    double r = rat_to_double(y_ramp_);
    auto s = [](double u) { return u * u * (3.0 - 2.0 * u); };
    if (eta <= r) return s(eta / r);
    if (eta < 0.25 - r) return 1.0;
    if (eta < 0.25) return s((0.25 - eta) / r);
    return 0.0;
}

double Profiles::g_double(double xi) const {
    double m = rat_to_double(x_margin_);
    auto s = [](double u) { return u * u * (3.0 - 2.0 * u); };
    if (xi <= m) return s(xi / m);
    if (xi >= 1.0 - m) return s((1.0 - xi) / m);
    return 1.0;
}

std::vector<Rat> Profiles::h_breakpoints() const {
    const Rat& r = y_ramp_;
    return {r,
            Rat(1, 4) - r,
            Rat(1, 4),
            Rat(1, 2),
            Rat(1, 2) + r,
            Rat(3, 4) - r,
            Rat(3, 4)};
}

TorusParams::TorusParams(CFNumber cf, Profiles prof,
                         std::vector<std::pair<std::size_t, std::pair<Rat, Rat>>> stages,
                         Rat beta_threshold)
    : cf_(std::move(cf)), prof_(std::move(prof)), beta_threshold_(std::move(beta_threshold)) {
    if (stages.empty()) throw Error("TorusParams: need at least one stage");
    std::size_t max_k = 0;
    for (auto& [k, ad] : stages) max_k = std::max(max_k, k);
    depth_ = max_k + 2;
    for (auto& [k, ad] : stages) {
        if (k % 2 != 0)
            throw Error("TorusParams: stages use convergents from below (even index)");
        Stage st;
        st.k = k;
        Convergent cv = cf_.convergent(k);
        st.p = cv.p;
        st.q = cv.q;
        st.p_inv = (st.q > 1) ? mod_inverse(st.p, st.q) : Int(0);
        st.a = ad.first;
        st.delta = ad.second;
        if (!(st.a > 0)) throw Error("TorusParams: amplitude must be positive");
        if (!(st.delta > 0 && st.delta < Rat(1, 4)))
            throw Error("TorusParams: delta must lie in (0, 1/4)");
        if (!stages_.empty() && !(stages_.back().q < st.q))
            throw Error("TorusParams: stage q_n must strictly increase");
        stages_.push_back(std::move(st));
        RatInterval b = cf_.beta(k);
        if (!b.surely_lt(beta_threshold_))
            throw Error("TorusParams: beta enclosure not below threshold at stage k=" +
                        std::to_string(k));
        // the averaging window must fit the plateau of one quarter-column
        RatInterval frac = sqrt1c2() * stages_.back().delta;
        if (!frac.surely_lt(Rat(1, 4) - 2 * prof_.y_ramp()))
            throw Error("TorusParams: window fraction delta*sqrt(1+c^2) does not fit the plateau");
    }
}

RatInterval TorusParams::c(unsigned extra_depth) const {
    return cf_.enclosure(depth_ + extra_depth);
}

RatInterval TorusParams::sqrt1c2() const {
    RatInterval cc = c();
    Rat lo2 = 1 + cc.lo * cc.lo, hi2 = 1 + cc.hi * cc.hi;
    return {nth_root_enclosure(lo2, 2).lo, nth_root_enclosure(hi2, 2).hi};
}

RatInterval TorusParams::beta(std::size_t n) const { return cf_.beta(stage(n).k); }

RatInterval TorusParams::t_n(std::size_t n) const {
    const Stage& st = stage(n);
    return sqrt1c2() * (st.delta * Rat(st.q));
}

Rat TorusParams::tail_sum(std::size_t n) const {
    Rat s = 0;
    for (std::size_t m = n + 1; m <= stages_.size(); ++m) s += stage(m).a;
    return s;
}

Rat TorusParams::earlier_term_bound(std::size_t m, std::size_t n) const {
    if (!(m < n)) throw Error("earlier_term_bound: need m < n");
    const Stage& sm = stage(m);
    RatInterval T = t_n(n);
    Rat head_tail = 2 * sm.a * Rat(sm.q) * sqrt1c2().hi;
    Rat bad = 0;
    if (sm.q > 1) {
        // sliver crossings interrupt full columns ~ T beta / q times; each
        // interrupted traversal integrates to at most a q max|H| < a q / 4,
        // doubled for the adjacent partial column
        RatInterval beta_m = beta(m);
        Int crossings = floor_rat(T.hi * beta_m.hi / Rat(sm.q)) + 2;
        bad = Rat(crossings) * sm.a * Rat(sm.q); // 2 * (a q / 2) per crossing, conservatively
    }
    return (head_tail + bad) / T.lo;
}

TorusParams TorusParams::default_experiment() {
    CFNumber cf = CFNumber::pow10(4);
    Profiles prof(Rat(1, 8), Rat(1, 256));
    std::vector<std::pair<std::size_t, std::pair<Rat, Rat>>> stages = {
        {0, {Rat(1), Rat(1, 65536)}},
        {2, {Rat(1, 8), Rat(15, 64)}},
        {4, {Rat(1, 64), Rat(15, 64)}},
    };
    return TorusParams(std::move(cf), std::move(prof), std::move(stages));
}

TorusPoint torus_point(const TorusParams& par, std::size_t n, const Rat& x_n, const Rat& tau) {
    const Stage& st = par.stage(n);
    if (x_n < 0 || x_n >= Rat(1, st.q)) throw Error("torus_point: x_n outside [0, 1/q)");
    if (tau < 0 || tau >= Rat(st.q)) throw Error("torus_point: tau outside [0, q)");
    RatInterval y = par.c() * tau + x_n;
    auto red = reduce_mod1(y);
    for (unsigned extra = 2; !red && extra <= 16; extra += 2)
        red = reduce_mod1(par.c(extra) * tau + x_n);
    if (!red) throw PrecisionExhausted("torus_point: y enclosure straddles the seam");
    return TorusPoint{mod_rat(tau, Rat(1)), *red};
}

TorusPoint flow(const TorusParams& par, const TorusPoint& pt, const Rat& s) {
    RatInterval y = pt.y + par.c() * s;
    auto red = reduce_mod1(y);
    for (unsigned extra = 2; !red && extra <= 16; extra += 2)
        red = reduce_mod1(pt.y + par.c(extra) * s);
    if (!red) throw PrecisionExhausted("flow: y enclosure straddles the seam");
    return TorusPoint{mod_rat(pt.x + s, Rat(1)), *red};
}

std::optional<StageCoords> torus_coords(const TorusParams& par, std::size_t n,
                                        const TorusPoint& pt) {
    const Stage& st = par.stage(n);
    Rat frac_x = pt.x; // already reduced
    Rat inv_q(1, st.q);
    for (unsigned extra = 0; extra <= 24; extra += 4) {
        RatInterval c = par.c(extra);
        auto u_red = reduce_mod1(pt.y - c * frac_x);
        if (!u_red) continue;
        RatInterval u = *u_red;
        if (st.q == 1) return StageCoords{u, frac_x};

        Int r0 = floor_rat(u.mid() * Rat(st.q));
        bool ambiguous = false;
        std::optional<StageCoords> found;
        int hits = 0;
        for (int dr = -1; dr <= 1; ++dr) {
            Int r = (r0 + dr) % st.q;
            if (r < 0) r += st.q;
            Int k = (r * st.p_inv) % st.q;
            auto x_red = reduce_mod1(u - c * Rat(k));
            if (!x_red) {
                ambiguous = true;
                continue;
            }
            if (x_red->hi < inv_q && x_red->lo >= 0) {
                ++hits;
                found = StageCoords{*x_red, frac_x + Rat(k)};
            } else if (!(x_red->lo >= inv_q || x_red->hi < 0)) {
                ambiguous = true; // undecided membership
            }
        }
        if (ambiguous) continue; // refine the enclosure
        if (hits == 1) return found;
        return std::nullopt; // gap (0 hits) or overlap sliver (2 hits)
    }
    throw PrecisionExhausted("torus_coords: membership undecidable at maximum enclosure depth");
}

RatInterval f_eval(const TorusParams& par, std::size_t n, const TorusPoint& pt) {
    auto co = torus_coords(par, n, pt);
    if (!co) return RatInterval(Rat(0));
    const Stage& st = par.stage(n);
    RatInterval xi = co->x_n * Rat(st.q);
    Rat eta = co->tau / Rat(st.q);
    return par.profiles().g_int(xi) * (par.profiles().h(eta) * st.a);
}

RatInterval avg_current_term(const TorusParams& par, std::size_t n, const RatInterval& g_xi,
                             const Rat& tau0, const RatInterval& T) {
    const Stage& st = par.stage(n);
    Rat q(st.q);
    if (tau0 < 0 || !(RatInterval(tau0) + T).surely_lt(q))
        throw Error("avg_current_term: window must stay inside one column");
    Rat eta0 = tau0 / q;
    RatInterval eta1 = (T + tau0) / q;
    RatInterval I = par.profiles().H_int(eta1) - RatInterval(par.profiles().H(eta0));
    return g_xi * I * Rat(st.a * q) / T;
}

RatInterval measured_avg_term(const TorusParams& par, std::size_t m, const TorusPoint& pt,
                              const RatInterval& T) {
    const Stage& st = par.stage(m);
    const Profiles& prof = par.profiles();
    Rat q(st.q);
    RatInterval c = par.c();
    RatInterval drift = c * q - Rat(st.p); // x-shift per full column, tiny and positive
    Rat guard = st.q > 1 ? Rat(4) * par.beta(m).hi / q : Rat(0);

    RatInterval acc(Rat(0));
    Rat s = 0;
    Rat outside_span = 0; // time covered only by |f| <= a (probed while Outside)
    const Rat Tlo = T.lo;
    const Rat probe = std::max(Rat(1), Rat(q / 8));
    auto co = torus_coords(par, m, pt);
    while (s < Tlo) {
        if (!co) {
            // no chart here; f vanishes on the true Outside set, and the
            // probed span is absorbed into the enclosure below
            Rat step = std::min(probe, Rat(Tlo - s));
            outside_span += step;
            s += step;
            if (s >= Tlo) break;
            co = torus_coords(par, m, flow(par, pt, s));
            continue;
        }
        RatInterval g_xi = prof.g_int(co->x_n * q);
        Rat room = q - co->tau;
        Rat rem = Tlo - s;
        if (rem <= room) {
            RatInterval I = prof.H_int(RatInterval((co->tau + rem) / q)) -
                            RatInterval(prof.H(co->tau / q));
            acc = acc + g_xi * I * Rat(st.a * q);
            s = Tlo;
            break;
        }
        // to the column top; H(1) = 0
        acc = acc + g_xi * (RatInterval(Rat(0)) - RatInterval(prof.H(co->tau / q))) * Rat(st.a * q);
        s += room;
        // fast path: clean base re-entry when the drifted base point is
        // decisively interior; otherwise re-invert at the exact time
        RatInterval xn = co->x_n + drift;
        if (st.q == 1) {
            auto red = reduce_mod1(xn);
            if (red)
                co = StageCoords{*red, Rat(0)};
            else
                co = torus_coords(par, m, flow(par, pt, s));
        } else if (xn.lo > guard && xn.hi < Rat(1, st.q) - guard) {
            co = StageCoords{xn, Rat(0)};
        } else {
            co = torus_coords(par, m, flow(par, pt, s));
        }
    }
    // probed spans and the unresolved sliver of the averaging time itself
    Rat slack = st.a * (T.width() + outside_span);
    acc = acc + RatInterval(-slack, slack);
    return acc / T;
}

Thm3Report thm3_experiment(const TorusParams& par, std::size_t points_per_stage,
                           std::uint64_t seed, const Rat& win_lo, const Rat& win_hi,
                           const Rat& growth_factor) {
    Thm3Report rep;
    std::mt19937_64 rng(seed);
    auto rand_rat = [&](unsigned depth) { // uniform dyadic in [0, 1)
        std::uint64_t v = rng() >> (64 - depth);
        return Rat(Int(v), pow2_int(depth));
    };

    const Profiles& prof = par.profiles();
    const Rat rho = prof.y_ramp();
    for (std::size_t n = 1; n <= par.stages().size(); ++n) {
        const Stage& st = par.stage(n);
        Rat q(st.q);
        RatInterval T = par.t_n(n);
        RatInterval dfrac = T / q; // window as a fraction of the column

        Rat span = (Rat(1, 4) - rho - dfrac.hi) - rho;
        if (!(span > 0)) throw Error("thm3_experiment: window does not fit the plateau");

        Rat E = 0;
        for (std::size_t m = 1; m < n; ++m) E += par.earlier_term_bound(m, n);
        Rat tail = par.tail_sum(n);

        Thm3Row row;
        row.n = n;
        row.q = st.q;
        row.t = rat_to_double(T.mid());
        bool first = true;
        for (std::size_t i = 0; i < points_per_stage; ++i) {
            // plateau placement in both coordinates
            Rat eta0 = rho + rand_rat(40) * span;
            Rat xi = prof.x_margin() + rand_rat(40) * (Rat(1) - 2 * prof.x_margin());
            RatInterval g_xi = prof.g_int(RatInterval(xi));
            RatInterval v = avg_current_term(par, n, g_xi, eta0 * q, T);
            RatInterval vab = abs_interval(v);
            bool ok = v.lo >= win_lo * st.a && v.hi <= win_hi * st.a;
            rep.windows_ok = rep.windows_ok && ok;
            RatInterval cert(vab.lo - E - tail, vab.hi + E + tail);
            if (cert.lo < 0) cert.lo = 0;
            row.certified_abs = first ? cert : hull(row.certified_abs, cert);
            row.window_ok = first ? ok : (row.window_ok && ok);
            row.current_abs = std::max(row.current_abs, rat_to_double(vab.hi));
            first = false;
        }
        // phi(t) = t^(-1/4) as an enclosure
        RatInterval root_lo = nth_root_enclosure(T.lo, 4);
        RatInterval root_hi = nth_root_enclosure(T.hi, 4);
        row.phi = RatInterval(Rat(1) / root_hi.hi, Rat(1) / root_lo.lo);
        row.ratio = row.certified_abs / row.phi;
        rep.rows.push_back(std::move(row));
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i].ratio.lo >= growth_factor * rep.rows[i - 1].ratio.hi))
            rep.growth_ok = false;
    return rep;
}

std::string thm3_report_csv(const Thm3Report& rep) {
    std::ostringstream os;
    os << "n,q_n,t_n,sup_abs,phi,ratio\n";
    char buf[256];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%zu,%s,%.17g,%.17g,%.17g,%.17g\n", r.n, r.q.str().c_str(),
                      r.t, rat_to_double(r.certified_abs.hi), rat_to_double(r.phi.mid()),
                      rat_to_double(r.ratio.hi));
        os << buf;
    }
    return os.str();
}

} // namespace torus
} // namespace birkhoff
