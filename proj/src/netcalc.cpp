#include "gwave/netcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gwave {

namespace {

void validate_grid(const std::vector<double>& v, bool full_length) {
    if (full_length && v.size() < 8)
        throw Error(ErrorKind::GridInvalid, "grid needs at least 8 points");
    if (v.size() < 2) throw Error(ErrorKind::GridInvalid, "grid needs at least 2 points");
    for (double e : v)
        if (!(e > 0.0 && e < 1.0) || !std::isfinite(e))
            throw Error(ErrorKind::GridInvalid, "grid values must lie in (0,1)");
    for (size_t i = 1; i < v.size(); ++i) {
        double ratio = v[i] / v[i - 1];
        if (!(ratio < 1.0)) throw Error(ErrorKind::GridInvalid, "grid must be strictly decreasing");
        if (ratio > 0.97 || ratio < 0.02)
            throw Error(ErrorKind::GridInvalid, "grid ratio must stay away from 0 and 1");
    }
}

} // namespace

EpsilonGrid::EpsilonGrid(std::vector<double> values) : values_(std::move(values)) {
    validate_grid(values_, true);
}

GridPtr EpsilonGrid::subgrid(std::vector<double> values) {
    validate_grid(values, false);
    struct Sub : EpsilonGrid {
        explicit Sub(std::vector<double> v) : EpsilonGrid(std::move(v), SubgridTag{}) {}
    };
    return std::make_shared<const Sub>(std::move(values));
}

GridPtr EpsilonGrid::geometric(int k_min, int k_max, double base) {
    if (k_max - k_min + 1 < 2 || base <= 1.0)
        throw Error(ErrorKind::GridInvalid, "geometric grid needs k_max > k_min, base > 1");
    std::vector<double> v;
    for (int k = k_min; k <= k_max; ++k) v.push_back(std::pow(base, -static_cast<double>(k)));
    return std::make_shared<const EpsilonGrid>(std::move(v));
}

GridPtr EpsilonGrid::truncated(double eps_floor) const {
    std::vector<double> v;
    for (double e : values_)
        if (e >= eps_floor) v.push_back(e);
    if (v.size() < 2) throw Error(ErrorKind::ResolutionExceeded, "grid entirely below the resolution floor");
    return subgrid(std::move(v));
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    if (a == b) return true;
    return a && b && *a == *b;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (!same_grid(a, b)) throw Error(ErrorKind::MixedGrid, "nets live on different epsilon grids");
}

ScalarNet::ScalarNet(GridPtr grid, std::vector<cxd> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
    if (!grid_ || samples_.size() != grid_->size())
        throw Error(ErrorKind::MixedGrid, "sample count must match the grid");
    for (cxd s : samples_)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw Error(ErrorKind::DomainError, "net samples must be finite");
}

ScalarNet ScalarNet::map(const GridPtr& grid, const std::function<cxd(double)>& f) {
    std::vector<cxd> s;
    s.reserve(grid->size());
    for (double e : grid->values()) s.push_back(f(e));
    return ScalarNet(grid, std::move(s));
}

ScalarNet ScalarNet::abs() const {
    std::vector<cxd> s(samples_.size());
    for (size_t i = 0; i < s.size(); ++i) s[i] = std::abs(samples_[i]);
    return ScalarNet(grid_, std::move(s));
}

ScalarNet ScalarNet::pow(double p) const {
    std::vector<cxd> s(samples_.size());
    for (size_t i = 0; i < s.size(); ++i) s[i] = std::pow(std::abs(samples_[i]), p);
    return ScalarNet(grid_, std::move(s));
}

#define GWAVE_NET_BINOP(op)                                                     \
    ScalarNet operator op(const ScalarNet& a, const ScalarNet& b) {             \
        require_same_grid(a.grid_, b.grid_);                                    \
        std::vector<cxd> s(a.samples_.size());                                  \
        for (size_t i = 0; i < s.size(); ++i) s[i] = a.samples_[i] op b.samples_[i]; \
        return ScalarNet(a.grid_, std::move(s));                                \
    }

GWAVE_NET_BINOP(+)
GWAVE_NET_BINOP(-)
GWAVE_NET_BINOP(*)

ScalarNet operator/(const ScalarNet& a, const ScalarNet& b) {
    require_same_grid(a.grid_, b.grid_);
    std::vector<cxd> s(a.samples_.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (b.samples_[i] == cxd(0.0, 0.0))
            throw Error(ErrorKind::DomainError, "division by a zero net sample", static_cast<long>(i));
        s[i] = a.samples_[i] / b.samples_[i];
    }
    return ScalarNet(a.grid_, std::move(s));
}

VectorNet::VectorNet(std::vector<ScalarNet> coords) : coords_(std::move(coords)) {
    if (coords_.empty() || coords_.size() > 2)
        throw Error(ErrorKind::DimensionMismatch, "vector nets support dimension 1 or 2");
    for (size_t i = 1; i < coords_.size(); ++i)
        require_same_grid(coords_[0].grid(), coords_[i].grid());
}

VectorNet VectorNet::map(const GridPtr& grid, int dim,
                         const std::function<std::array<double, 2>(double)>& f) {
    std::vector<std::vector<cxd>> cs(static_cast<size_t>(dim));
    for (double e : grid->values()) {
        auto v = f(e);
        for (int d = 0; d < dim; ++d) cs[static_cast<size_t>(d)].push_back(v[static_cast<size_t>(d)]);
    }
    std::vector<ScalarNet> coords;
    for (int d = 0; d < dim; ++d) coords.emplace_back(grid, std::move(cs[static_cast<size_t>(d)]));
    return VectorNet(std::move(coords));
}

std::array<double, 2> VectorNet::at(size_t i) const {
    std::array<double, 2> v{0.0, 0.0};
    for (int d = 0; d < dimension(); ++d) v[static_cast<size_t>(d)] = coords_[static_cast<size_t>(d)][i].real();
    return v;
}

ScalarNet VectorNet::norm() const {
    std::vector<cxd> s(size());
    for (size_t i = 0; i < s.size(); ++i) {
        double q = 0.0;
        for (const ScalarNet& c : coords_) q += std::norm(c[i]);
        s[i] = std::sqrt(q);
    }
    return ScalarNet(grid(), std::move(s));
}

VectorNet operator-(const VectorNet& a, const VectorNet& b) {
    if (a.dimension() != b.dimension())
        throw Error(ErrorKind::DimensionMismatch, "vector nets have different dimensions");
    std::vector<ScalarNet> coords;
    for (int d = 0; d < a.dimension(); ++d) coords.push_back(a.coord(d) - b.coord(d));
    return VectorNet(std::move(coords));
}

const char* scale_kind_name(ScaleKind k) {
    switch (k) {
        case ScaleKind::FastScale: return "FastScale";
        case ScaleKind::SlowScale: return "SlowScale";
        case ScaleKind::FastInfinitesimal: return "FastInfinitesimal";
        case ScaleKind::SlowInfinitesimal: return "SlowInfinitesimal";
        case ScaleKind::Negligible: return "Negligible";
        case ScaleKind::Moderate: return "Moderate";
        case ScaleKind::Indeterminate: return "Indeterminate";
    }
    return "Unknown";
}

namespace {

struct Tail {
    std::vector<double> eps;
    std::vector<double> mag;  // |sample|, zeros kept
    size_t trailing_zeros = 0;
    bool all_zero = false;
};

Tail take_tail(const ScalarNet& net, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw Error(ErrorKind::DomainError, "tail_fraction must lie in (0,1]");
    size_t n = net.size();
    size_t m = static_cast<size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
    m = std::max<size_t>(m, 2);
    Tail t;
    for (size_t i = n - m; i < n; ++i) {
        t.eps.push_back((*net.grid())[i]);
        t.mag.push_back(std::abs(net[i]));
    }
    t.all_zero = true;
    for (double v : t.mag)
        if (v != 0.0) t.all_zero = false;
    for (size_t i = t.mag.size(); i-- > 0;) {
        if (t.mag[i] == 0.0)
            ++t.trailing_zeros;
        else
            break;
    }
    return t;
}

SlopeFit fit_tail(const Tail& t) {
    std::vector<double> x, y;
    for (size_t i = 0; i < t.mag.size(); ++i) {
        if (t.mag[i] == 0.0) continue;
        x.push_back(std::log(1.0 / t.eps[i]));
        y.push_back(std::log(t.mag[i]));
    }
    if (x.size() < 4)
        throw Error(ErrorKind::AllZeroTail, "not enough nonzero tail samples for a slope fit");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    SlopeFit f;
    f.exponent = (n * sxy - sx * sy) / denom;
    double icept = (sy - f.exponent * sx) / n;
    double rss = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (f.exponent * x[i] + icept);
        rss += r * r;
    }
    f.residual = std::sqrt(rss / n);
    f.points_used = static_cast<int>(x.size());
    return f;
}

// trend over the nonzero magnitudes of the tail
struct Trend {
    bool increasing_unbounded = false;
    bool decreasing_to_zero = false;
};

Trend tail_trend(const Tail& t) {
    std::vector<double> v;
    for (double m : t.mag)
        if (m != 0.0) v.push_back(m);
    Trend tr;
    if (v.size() < 3) return tr;
    int up = 0, down = 0;
    for (size_t i = 1; i < v.size(); ++i) (v[i] > v[i - 1] ? up : down)++;
    double total = static_cast<double>(up + down);
    double ratio = v.back() / v.front();
    tr.increasing_unbounded = up >= 0.7 * total && ratio >= 1.2;
    tr.decreasing_to_zero = down >= 0.7 * total && ratio <= 0.67;
    return tr;
}

constexpr double kZeroNetExponent = -std::numeric_limits<double>::infinity();

} // namespace

SlopeFit fit_scale_exponent(const ScalarNet& net, double tail_fraction) {
    Tail t = take_tail(net, tail_fraction);
    if (t.all_zero) throw Error(ErrorKind::AllZeroTail, "net is identically zero on the tail");
    return fit_tail(t);
}

ScaleVerdict classify_scale(const ScalarNet& net, const ClassifyParams& params) {
    Tail t = take_tail(net, params.tail_fraction);
    ScaleVerdict v;
    size_t zero_need = std::max<size_t>(3, (t.mag.size() + 1) / 2);
    if (t.all_zero || t.trailing_zeros >= zero_need) {
        v.kind = ScaleKind::FastInfinitesimal;
        v.fit_exponent = kZeroNetExponent;  // zero for small eps: beyond any order
        return v;
    }
    SlopeFit f;
    try {
        f = fit_tail(t);
    } catch (const Error&) {
        v.kind = ScaleKind::Indeterminate;
        v.fit_exponent = std::numeric_limits<double>::quiet_NaN();
        return v;
    }
    v.fit_exponent = f.exponent;
    v.residual = f.residual;
    if (f.residual > params.residual_tol) {
        v.kind = ScaleKind::Indeterminate;
        return v;
    }
    if (f.exponent >= params.fast_threshold) {
        v.kind = ScaleKind::FastScale;
        return v;
    }
    if (f.exponent <= -params.fast_threshold) {
        v.kind = ScaleKind::FastInfinitesimal;
        return v;
    }
    Trend tr = tail_trend(t);
    v.kind = tr.decreasing_to_zero ? ScaleKind::SlowInfinitesimal : ScaleKind::SlowScale;
    return v;
}

ScaleVerdict is_negligible(const ScalarNet& net, int m_max, const ClassifyParams& params) {
    if (m_max < 1) throw Error(ErrorKind::DomainError, "m_max must be >= 1");
    Tail t = take_tail(net, params.tail_fraction);
    ScaleVerdict v;
    size_t need = std::max<size_t>(3, (t.mag.size() + 1) / 2);
    if (t.all_zero || t.trailing_zeros >= need) {
        // zero for small eps: negligible at every tested order
        v.kind = ScaleKind::Negligible;
        v.order = m_max;
        v.fit_exponent = kZeroNetExponent;
        return v;
    }
    SlopeFit f;
    try {
        f = fit_tail(t);
    } catch (const Error&) {
        v.kind = ScaleKind::Indeterminate;
        v.fit_exponent = std::numeric_limits<double>::quiet_NaN();
        return v;
    }
    v.fit_exponent = f.exponent;
    v.residual = f.residual;
    double decay = -f.exponent;
    int best = 0;
    for (int m = 1; m <= m_max; ++m)
        if (decay >= m - 0.25) best = m;
    if (best >= 1) {
        v.kind = ScaleKind::Negligible;
        v.order = best;
    } else {
        v.kind = ScaleKind::Indeterminate;
    }
    return v;
}

ScaleVerdict is_moderate(const ScalarNet& net, int n_max, const ClassifyParams& params) {
    if (n_max < 0) throw Error(ErrorKind::DomainError, "n_max must be >= 0");
    Tail t = take_tail(net, params.tail_fraction);
    ScaleVerdict v;
    size_t zero_need = std::max<size_t>(3, (t.mag.size() + 1) / 2);
    if (t.all_zero || t.trailing_zeros >= zero_need) {
        v.kind = ScaleKind::Moderate;
        v.order = 0;
        v.fit_exponent = kZeroNetExponent;
        return v;
    }
    SlopeFit f;
    try {
        f = fit_tail(t);
    } catch (const Error&) {
        v.kind = ScaleKind::Indeterminate;
        v.fit_exponent = std::numeric_limits<double>::quiet_NaN();
        return v;
    }
    v.fit_exponent = f.exponent;
    v.residual = f.residual;
    Trend tr = tail_trend(t);
    for (int n = 0; n <= n_max; ++n) {
        if (f.exponent > n + 0.25) continue;
        if (n == 0 && tr.increasing_unbounded) continue;  // N=0 means bounded
        v.kind = ScaleKind::Moderate;
        v.order = n;
        return v;
    }
    v.kind = ScaleKind::Indeterminate;
    return v;
}

ScaleVerdict relate_points(const VectorNet& x, const VectorNet& y, const ClassifyParams& params) {
    if (x.dimension() != y.dimension())
        throw Error(ErrorKind::DimensionMismatch, "points have different dimensions");
    require_same_grid(x.grid(), y.grid());
    return classify_scale((x - y).norm(), params);
}

int negligible_order(const ScalarNet& net, int m_max, const ClassifyParams& params) {
    ScaleVerdict v = is_negligible(net, m_max, params);
    return v.kind == ScaleKind::Negligible ? v.order : 0;
}

} // namespace gwave
