#include "gwave/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gwave {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Regular: return "Regular";
        case Verdict::Singular: return "Singular";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

namespace {

bool net_is_constant(const VectorNet& n) {
    for (int d = 0; d < n.dimension(); ++d) {
        double v0 = n.coord(d)[0].real();
        for (size_t i = 1; i < n.size(); ++i)
            if (std::abs(n.coord(d)[i].real() - v0) > 1e-12) return false;
    }
    return true;
}

RowReport scan_row(const SliceSet& slices, const FrequencyRegion& region, int m, int m_max,
                   const ClassifyParams& classify) {
    RowReport row;
    row.m = m;
    try {
        ScanResult r = region_decay_scan(slices, region, m);
        row.empty_cells = r.empty_cells;
        row.dropped_cells = r.dropped_cells;
        auto [g, vals] = r.sup_samples();
        for (size_t i = 0; i < vals.size(); ++i) {
            row.eps.push_back((*g)[i]);
            row.sup.push_back(vals[i]);
        }
        std::vector<cxd> cv(vals.begin(), vals.end());
        ScalarNet net(g, std::move(cv));
        row.verdict = is_negligible(net, std::max(m_max, m), classify);
        row.pass = row.verdict.kind == ScaleKind::Negligible && row.verdict.order >= m;
        if (!row.pass) {
            double decay = -row.verdict.fit_exponent;
            row.hard_fail = std::isfinite(decay) && decay <= static_cast<double>(m) - 0.75;
            // an unfittable tail is inconclusive, not a failure
            if (!std::isfinite(decay) || vals.size() < 4) {
                row.hard_fail = false;
                row.inconclusive = true;
            }
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyRegion) throw;
        row.inconclusive = true;
    }
    return row;
}

WeightedReport weighted_route(const SliceSet& slices, const FrequencyRegion& region, int m_max,
                              int n_max, const ClassifyParams& classify) {
    WeightedReport w;
    int max_n = 0;
    std::vector<int> fit_vals;
    for (int m = 1; m <= m_max; ++m) {
        w.orders.push_back(m);
        int n = -1;
        try {
            ScaleVerdict v = weighted_moderate_scan(slices, region, m, n_max, classify);
            if (v.kind == ScaleKind::Moderate) n = v.order;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::EmptyRegion) throw;
        }
        w.n_values.push_back(n);
        if (n < 0)
            w.all_moderate = false;
        else {
            max_n = std::max(max_n, n);
            fit_vals.push_back(n);
        }
    }
    if (fit_vals.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < fit_vals.size(); ++i) {
            double x = static_cast<double>(i), y = fit_vals[i];
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double n = static_cast<double>(fit_vals.size());
        w.growth = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    w.pass = w.all_moderate && max_n <= n_max && w.growth <= 0.4;
    w.decisive_fail = !w.all_moderate || w.growth >= 0.8;
    return w;
}

Verdict decay_verdict_of(const std::vector<RowReport>& rows) {
    if (rows.empty()) return Verdict::Inconclusive;
    bool all_pass = true;
    for (const RowReport& r : rows) {
        if (r.hard_fail) return Verdict::Singular;
        if (!r.pass) all_pass = false;
    }
    return all_pass ? Verdict::Regular : Verdict::Inconclusive;
}

Verdict weighted_verdict_of(const WeightedReport& w) {
    if (w.pass) return Verdict::Regular;
    if (w.decisive_fail) return Verdict::Singular;
    return Verdict::Inconclusive;
}

RegularityReport run_report(const SliceSet& slices, const std::string& family,
                            const std::string& point, const std::string& direction,
                            const FrequencyRegion& region, const std::string& mode,
                            const std::string& schedule_desc, const TestParams& params) {
    RegularityReport rep;
    rep.family = family;
    rep.point = point;
    rep.direction = direction;
    rep.mode = mode;
    rep.m_requested = params.m_max;
    rep.schedule_desc = schedule_desc;
    rep.parseval_max = slices.max_parseval_err();

    int m_eff = 0;
    for (int m = 1; m <= params.m_max; ++m) {
        if (!order_resolvable(slices, m, params.classify)) break;
        m_eff = m;
    }
    rep.m_effective = m_eff;
    if (m_eff == 0) {
        rep.note = "no spectral order resolvable under this window/grid budget";
        rep.verdict = Verdict::Inconclusive;
        return rep;
    }
    for (int m = 1; m <= m_eff; ++m) {
        RowReport row = scan_row(slices, region, m, params.m_max, params.classify);
        rep.empty_cells += row.empty_cells;
        rep.dropped_cells += row.dropped_cells;
        rep.rows.push_back(std::move(row));
    }
    rep.weighted = weighted_route(slices, region, params.m_max, params.n_max, params.classify);
    rep.decay_verdict = decay_verdict_of(rep.rows);
    rep.weighted_verdict = weighted_verdict_of(rep.weighted);
    rep.routes_agree = !((rep.decay_verdict == Verdict::Regular && rep.weighted_verdict == Verdict::Singular) ||
                         (rep.decay_verdict == Verdict::Singular && rep.weighted_verdict == Verdict::Regular));
    if (mode == "classical") {
        rep.verdict = rep.decay_verdict == rep.weighted_verdict ? rep.decay_verdict
                                                                : Verdict::Inconclusive;
    } else {
        rep.verdict = rep.decay_verdict;
    }
    return rep;
}

std::string default_schedule_desc(const TestParams& params) {
    if (params.schedule) return "scenario-supplied order schedule";
    std::ostringstream os;
    os << "k_eps = max(" << 2 * params.m_max << ", floor(loglog(1/eps)) + " << 2 * params.m_max << ")";
    return os.str();
}

} // namespace

RegularityReport refined_regularity_with_slices(const SliceSet& slices, const std::string& family,
                                                const std::string& point,
                                                const GeneralizedDirection& xi0,
                                                const TestParams& params) {
    FrequencyRegion region = FrequencyRegion::fast_tube(xi0, 1);
    return run_report(slices, family, point, xi0.name(), region, "refined",
                      default_schedule_desc(params), params);
}

RegularityReport refined_regularity_test(const RepFamily& u, const GeneralizedPoint& x0,
                                         const GeneralizedDirection& xi0, const TestParams& params) {
    auto sched = [&params](double eps) { return params.order_at(eps); };
    WindowSpec window = scaled_cutoff(x0, sched);
    SliceSet slices(u, window, x0.net().grid(), params.budget, params.threads);
    RegularityReport rep = refined_regularity_with_slices(slices, u.provenance(), x0.name(), xi0, params);
    return rep;
}

RegularityReport classical_regularity_test(const RepFamily& u, Vec2 x0, Vec2 xi0, const GridPtr& grid,
                                           const TestParams& params) {
    GeneralizedPoint p = GeneralizedPoint::constant(grid, x0, u.dimension(), "standard");
    WindowSpec window = fixed_window(p, params.window_radius);
    SliceSet slices(u, window, grid, params.budget, params.threads);
    FrequencyRegion region = FrequencyRegion::standard_cone(xi0, params.window_radius, 1);
    std::ostringstream desc;
    desc << "fixed window r=" << params.window_radius;
    return run_report(slices, u.provenance(), "standard", "standard", region, "classical", desc.str(),
                      params);
}

WavefrontTable wavefront_scan(const RepFamily& u, const std::vector<GeneralizedPoint>& points,
                              const std::vector<GeneralizedDirection>& directions,
                              const std::string& mode, const TestParams& params) {
    if (points.empty() || directions.empty())
        throw Error(ErrorKind::EmptyInput, "wavefront scans need points and directions");
    if (mode != "refined" && mode != "classical")
        throw Error(ErrorKind::ValidationError, "mode must be 'refined' or 'classical'");

    WavefrontTable table;
    table.family = u.provenance();
    table.mode = mode;
    for (const GeneralizedPoint& p : points) {
        if (mode == "classical") {
            if (!net_is_constant(p.net()))
                throw Error(ErrorKind::ValidationError,
                            "classical scans need constant (standard) points");
            for (const GeneralizedDirection& d : directions) {
                if (!net_is_constant(d.net()))
                    throw Error(ErrorKind::ValidationError,
                                "classical scans need constant (standard) directions");
                RegularityReport rep =
                    classical_regularity_test(u, p.net().at(0), d.net().at(0), p.net().grid(), params);
                rep.point = p.name();
                rep.direction = d.name();
                table.rows.push_back(WavefrontRow{p.name(), d.name(), std::move(rep)});
            }
            continue;
        }
        auto sched = [&params](double eps) { return params.order_at(eps); };
        WindowSpec window = scaled_cutoff(p, sched);
        SliceSet slices(u, window, p.net().grid(), params.budget, params.threads);
        for (const GeneralizedDirection& d : directions) {
            RegularityReport rep =
                refined_regularity_with_slices(slices, u.provenance(), p.name(), d, params);
            table.rows.push_back(WavefrontRow{p.name(), d.name(), std::move(rep)});
        }
    }
    return table;
}

SingularSupportReport singular_support_scan(const RepFamily& u,
                                            const std::vector<GeneralizedPoint>& points,
                                            const std::vector<GeneralizedDirection>& extra_directions,
                                            const TestParams& params) {
    if (points.empty()) throw Error(ErrorKind::EmptyInput, "singular support scans need points");
    SingularSupportReport rep;
    rep.family = u.provenance();
    for (const GeneralizedPoint& p : points) {
        SingularSupportRow row;
        row.point = p.name();
        row.derivative = derivative_bound_test_params(u, p, params.n_max, params.m_max, params.a_max,
                                                      Quantifier::Uniform, params.classify);

        std::vector<GeneralizedDirection> dirs;
        const GridPtr& g = p.net().grid();
        if (u.dimension() == 1) {
            dirs.push_back(GeneralizedDirection::constant(g, {1.0, 0.0}, 1, "plus"));
            dirs.push_back(GeneralizedDirection::constant(g, {-1.0, 0.0}, 1, "minus"));
        } else {
            for (int k = 0; k < 16; ++k) {
                double a = 2.0 * M_PI * k / 16.0;
                std::ostringstream nm;
                nm << "dir" << k;
                dirs.push_back(
                    GeneralizedDirection::constant(g, {std::cos(a), std::sin(a)}, 2, nm.str()));
            }
        }
        for (const GeneralizedDirection& d : extra_directions)
            if (d.dimension() == u.dimension() && same_grid(d.net().grid(), g)) dirs.push_back(d);

        auto sched = [&params](double eps) { return params.order_at(eps); };
        WindowSpec window = scaled_cutoff(p, sched);
        SliceSet slices(u, window, g, params.budget, params.threads);
        bool any_singular = false, all_regular = true;
        for (const GeneralizedDirection& d : dirs) {
            RegularityReport r = refined_regularity_with_slices(slices, u.provenance(), p.name(), d,
                                                                params);
            row.per_direction.emplace_back(d.name(), r.verdict);
            if (r.verdict == Verdict::Singular) any_singular = true;
            if (r.verdict != Verdict::Regular) all_regular = false;
        }
        row.directional = any_singular ? Verdict::Singular
                                       : (all_regular ? Verdict::Regular : Verdict::Inconclusive);
        row.agree = (row.derivative.pass && row.directional == Verdict::Regular) ||
                    (!row.derivative.pass && row.directional == Verdict::Singular);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

ConsistencyReport consistency_check(const RepFamily& u, Vec2 x0, Vec2 xi0, double r, int samples,
                                    const GridPtr& grid,
                                    const std::vector<GeneralizedDirection>& extra_directions,
                                    const TestParams& params) {
    if (samples < 4) throw Error(ErrorKind::ValidationError, "consistency checks need samples >= 4");
    if (!(r > 0.0)) throw Error(ErrorKind::ValidationError, "radius must be positive");
    int dim = u.dimension();

    ConsistencyReport rep;
    rep.classical = classical_regularity_test(u, x0, xi0, grid, params);

    // sampled generalized points: the pair itself, eps-dependent offsets, constants
    struct PointSample {
        std::string name;
        std::function<Vec2(double)> at;
    };
    std::vector<PointSample> pts;
    pts.push_back({"x0", [x0](double) { return x0; }});
    pts.push_back({"x0+sqrt(eps)r", [x0, r](double e) {
                       return Vec2{x0[0] + std::sqrt(e) * r, x0[1]};
                   }});
    pts.push_back({"x0+r/log(1/eps)", [x0, r](double e) {
                       return Vec2{x0[0] + r / std::log(1.0 / e), x0[1]};
                   }});
    for (double c : {0.5, 1.0, -0.5, -1.0}) {
        std::ostringstream nm;
        nm << "x0" << (c > 0 ? "+" : "-") << std::abs(c) << "r";
        pts.push_back({nm.str(), [x0, r, c](double) { return Vec2{x0[0] + c * r, x0[1]}; }});
    }
    if (dim == 2)
        for (double c : {0.5, 1.0}) {
            std::ostringstream nm;
            nm << "x0+" << c << "r.e2";
            pts.push_back({nm.str(), [x0, r, c](double) { return Vec2{x0[0], x0[1] + c * r}; }});
        }
    if (static_cast<int>(pts.size()) > samples)
        pts.resize(static_cast<size_t>(std::max(samples, 4)));

    std::vector<GeneralizedDirection> dirs;
    dirs.push_back(GeneralizedDirection::constant(grid, xi0, dim, "xi0"));
    for (const GeneralizedDirection& d : extra_directions) {
        if (d.dimension() != dim || !same_grid(d.net().grid(), grid)) continue;
        // in-ball check on the tail: |xi_eps - xi0| <= r for small eps
        size_t n = d.net().size(), start = n - (n + 1) / 2;
        bool inside = true;
        for (size_t i = start; i < n; ++i) {
            Vec2 v = d.net().at(i);
            if (std::hypot(v[0] - xi0[0], v[1] - xi0[1]) > r) inside = false;
        }
        if (inside) dirs.push_back(d);
    }

    for (const PointSample& ps : pts) {
        GeneralizedPoint p(VectorNet::map(grid, dim, ps.at), ps.name);
        auto sched = [&params](double eps) { return params.order_at(eps); };
        WindowSpec window = scaled_cutoff(p, sched);
        SliceSet slices(u, window, grid, params.budget, params.threads);
        for (const GeneralizedDirection& d : dirs) {
            RegularityReport rr = refined_regularity_with_slices(slices, u.provenance(), ps.name, d,
                                                                 params);
            rep.refined.push_back(ConsistencySample{ps.name, d.name(), rr.verdict});
            if (rr.verdict == Verdict::Inconclusive) rep.any_inconclusive = true;
        }
    }

    bool any_singular = false, all_regular = true;
    for (const ConsistencySample& s : rep.refined) {
        if (s.verdict == Verdict::Singular) any_singular = true;
        if (s.verdict != Verdict::Regular) all_regular = false;
    }
    if (rep.classical.verdict == Verdict::Regular)
        rep.consistent = all_regular;
    else if (rep.classical.verdict == Verdict::Singular)
        rep.consistent = any_singular;
    else {
        rep.consistent = false;
        rep.any_inconclusive = true;
    }
    return rep;
}

} // namespace gwave
