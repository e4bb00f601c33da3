#include "birkhoff/piecewise.hpp"

#include <algorithm>
#include <map>

namespace birkhoff {

PiecewiseConst::PiecewiseConst(Rat period, std::vector<Rat> breaks, std::vector<Rat> values)
    : period_(std::move(period)), breaks_(std::move(breaks)), values_(std::move(values)) {
    if (period_ <= 0) throw Error("PiecewiseConst: period must be positive");
    if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
        throw Error("PiecewiseConst: need k+1 breakpoints for k values");
    if (breaks_.front() != 0 || breaks_.back() != period_)
        throw Error("PiecewiseConst: breakpoints must span [0, period]");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw Error("PiecewiseConst: breakpoints must be strictly increasing");
}

PiecewiseConst PiecewiseConst::constant(const Rat& period, const Rat& value) {
    return PiecewiseConst(period, {Rat(0), period}, {value});
}

std::size_t PiecewiseConst::piece_index(const Rat& y) const {
    // largest i with breaks[i] <= y, y in [0, period)
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), y);
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

Rat PiecewiseConst::eval(const Rat& y) const {
    Rat r = mod_rat(y, period_);
    return values_[piece_index(r)];
}

Rat PiecewiseConst::integral_over_period() const {
    Rat s = 0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        s += values_[i] * (breaks_[i + 1] - breaks_[i]);
    return s;
}

Rat PiecewiseConst::integrate(const Rat& a, const Rat& b) const {
    if (a > b) throw Error("PiecewiseConst::integrate: a > b");
    // antiderivative F over [0, period], extended by F(x + P) = F(x) + I_P
    auto F0 = [&](const Rat& x) { // x in [0, period]
        if (x == period_) return integral_over_period();
        Rat s = 0;
        std::size_t i = piece_index(x);
        for (std::size_t j = 0; j < i; ++j)
            s += values_[j] * (breaks_[j + 1] - breaks_[j]);
        s += values_[i] * (x - breaks_[i]);
        return s;
    };
    auto F = [&](const Rat& x) {
        Int k = floor_rat(x / period_);
        Rat r = x - Rat(k) * period_;
        return Rat(k) * integral_over_period() + F0(r);
    };
    return F(b) - F(a);
}

Rat PiecewiseConst::l1_over_period() const {
    Rat s = 0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        s += abs_rat(values_[i]) * (breaks_[i + 1] - breaks_[i]);
    return s;
}

Rat PiecewiseConst::sup_abs() const {
    Rat m = 0;
    for (const Rat& v : values_) m = std::max(m, abs_rat(v));
    return m;
}

Rat PiecewiseConst::variation_per_period() const {
    Rat s = 0;
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
        s += abs_rat(values_[i + 1] - values_[i]);
    s += abs_rat(values_.front() - values_.back()); // wrap jump
    return s;
}

PiecewiseConst PiecewiseConst::abs() const {
    std::vector<Rat> vs;
    vs.reserve(values_.size());
    for (const Rat& v : values_) vs.push_back(abs_rat(v));
    return PiecewiseConst(period_, breaks_, vs);
}

PiecewiseLinear::PiecewiseLinear(Rat period, std::vector<std::pair<Rat, Rat>> nodes)
    : period_(std::move(period)), nodes_(std::move(nodes)) {
    if (period_ <= 0) throw Error("PiecewiseLinear: period must be positive");
    if (nodes_.size() < 2) throw Error("PiecewiseLinear: need at least two nodes");
    if (nodes_.front().first != 0 || nodes_.back().first != period_)
        throw Error("PiecewiseLinear: nodes must span [0, period]");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (!(nodes_[i].first < nodes_[i + 1].first))
            throw Error("PiecewiseLinear: node positions must be strictly increasing");
    if (nodes_.front().second != nodes_.back().second)
        throw Error("PiecewiseLinear: not continuous on the circle (g(0) != g(period))");
}

Rat PiecewiseLinear::eval(const Rat& y) const {
    Rat r = mod_rat(y, period_);
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r,
                               [](const Rat& a, const std::pair<Rat, Rat>& n) { return a < n.first; });
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const auto& [x0, v0] = nodes_[i];
    const auto& [x1, v1] = nodes_[i + 1];
    return v0 + (v1 - v0) * (r - x0) / (x1 - x0);
}

Rat PiecewiseLinear::max_value() const {
    Rat m = nodes_.front().second;
    for (const auto& n : nodes_) m = std::max(m, n.second);
    return m;
}

Rat PiecewiseLinear::min_value() const {
    Rat m = nodes_.front().second;
    for (const auto& n : nodes_) m = std::min(m, n.second);
    return m;
}

Rat PiecewiseLinear::max_abs() const { return std::max(abs_rat(max_value()), abs_rat(min_value())); }

PiecewiseLinear::LevelMeasures PiecewiseLinear::level_set_measures(const Rat& v) const {
    return level_set_measures_on(v, Rat(0), period_);
}

PiecewiseLinear::LevelMeasures PiecewiseLinear::level_set_measures_on(const Rat& v, const Rat& lo,
                                                                      const Rat& hi) const {
    if (lo > hi || lo < 0 || hi > period_)
        throw Error("level_set_measures_on: range must lie within one period");
    LevelMeasures out{Rat(0), Rat(0)};
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        Rat x0 = std::max(nodes_[i].first, lo);
        Rat x1 = std::min(nodes_[i + 1].first, hi);
        if (!(x0 < x1)) continue;
        const Rat& X0 = nodes_[i].first;
        const Rat& X1 = nodes_[i + 1].first;
        const Rat& V0 = nodes_[i].second;
        const Rat& V1 = nodes_[i + 1].second;
        if (V0 == V1) {
            if (V0 == v) out.eq += x1 - x0;
            if (V0 >= v) out.ge += x1 - x0;
            continue;
        }
        Rat slope = (V1 - V0) / (X1 - X0);
        auto value_at = [&](const Rat& x) { return V0 + slope * (x - X0); };
        Rat va = value_at(x0), vb = value_at(x1);
        // crossing point of the level v, clipped to [x0, x1]
        Rat xc = X0 + (v - V0) / slope;
        if (xc < x0) xc = x0;
        if (xc > x1) xc = x1;
        if (slope > 0) {
            if (vb >= v) out.ge += x1 - (va >= v ? x0 : xc);
        } else {
            if (va >= v) out.ge += (vb >= v ? x1 : xc) - x0;
        }
    }
    return out;
}

std::vector<std::pair<Rat, Rat>> PiecewiseLinear::plateau_measures() const {
    std::map<Rat, Rat> acc;
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (nodes_[i].second == nodes_[i + 1].second)
            acc[nodes_[i].second] += nodes_[i + 1].first - nodes_[i].first;
    return {acc.begin(), acc.end()};
}

Rat PiecewiseLinear::ramp_measure() const {
    Rat s = 0;
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (nodes_[i].second != nodes_[i + 1].second)
            s += nodes_[i + 1].first - nodes_[i].first;
    return s;
}

PiecewiseLinear window_average_profile(const PiecewiseConst& f, const Rat& w) {
    if (w <= 0) throw Error("window_average_profile: window length must be positive");
    const Rat& P = f.period();
    std::vector<Rat> xs;
    for (const Rat& b : f.breaks()) {
        xs.push_back(mod_rat(b, P));
        xs.push_back(mod_rat(b - w, P));
    }
    xs.push_back(Rat(0));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<std::pair<Rat, Rat>> nodes;
    nodes.reserve(xs.size() + 1);
    for (const Rat& x : xs)
        nodes.emplace_back(x, f.integrate(x, x + w) / w);
    nodes.emplace_back(P, nodes.front().second);
    return PiecewiseLinear(P, std::move(nodes));
}

} // namespace birkhoff
