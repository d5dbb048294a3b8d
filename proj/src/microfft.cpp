#include "gwave/microfft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <atomic>
#include <mutex>
#include <thread>

namespace gwave {

namespace {

std::mutex g_fftw_mutex;  // plan creation/destruction is not thread-safe

long next_pow2(long n) {
    long p = 1;
    while (p < n) p <<= 1;
    return p;
}

uint64_t bits_of(double e) {
    uint64_t k;
    std::memcpy(&k, &e, sizeof(k));
    return k;
}

void run_fft(int dim, long n0, long n1, std::vector<cxd>& data) {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        plan = dim == 1 ? fftw_plan_dft_1d(static_cast<int>(n0), p, p, FFTW_FORWARD, FFTW_ESTIMATE)
                        : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), p, p,
                                           FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(plan);
    }
}

/// sample, transform and normalize one slice over the given box
SpectrumSlice build_slice(const std::function<cxd(Vec2)>& f, int dim, double eps, const Box& box,
                          double cap, double oversample, long max_axis_points) {
    SpectrumSlice s;
    s.eps = eps;
    s.dim = dim;
    s.freq_cap = cap;

    double h_target = M_PI / (cap * oversample);
    for (int d = 0; d < dim; ++d) {
        double len = box.hi[static_cast<size_t>(d)] - box.lo[static_cast<size_t>(d)];
        long n = next_pow2(static_cast<long>(std::ceil(len / h_target)));
        if (n < 8) n = 8;
        if (n > max_axis_points)
            throw Error(ErrorKind::ResolutionExceeded,
                        "lattice of " + std::to_string(n) + " points exceeds the budget at eps=" +
                            std::to_string(eps));
        s.n[static_cast<size_t>(d)] = n;
        s.dx[static_cast<size_t>(d)] = len / static_cast<double>(n);
        s.x_lo[static_cast<size_t>(d)] = box.lo[static_cast<size_t>(d)];
        s.dxi[static_cast<size_t>(d)] = 2.0 * M_PI / len;
    }

    long n0 = s.n[0], n1 = dim == 2 ? s.n[1] : 1;
    std::vector<cxd> v(static_cast<size_t>(n0 * n1));
    double hvol = s.dx[0] * (dim == 2 ? s.dx[1] : 1.0);
    double l1 = 0.0, l2 = 0.0, edge_max = 0.0, all_max = 0.0;
    for (long i = 0; i < n0; ++i) {
        double x0 = s.x_lo[0] + static_cast<double>(i) * s.dx[0];
        for (long j = 0; j < n1; ++j) {
            double x1 = dim == 2 ? s.x_lo[1] + static_cast<double>(j) * s.dx[1] : 0.0;
            cxd val = f({x0, x1});
            v[static_cast<size_t>(i * n1 + j)] = val;
            double a = std::abs(val);
            l1 += a;
            l2 += a * a;
            all_max = std::max(all_max, a);
            bool edge = i == 0 || i == n0 - 1 || (dim == 2 && (j == 0 || j == n1 - 1));
            if (edge) edge_max = std::max(edge_max, a);
        }
    }
    l1 *= hvol;
    l2 *= hvol;
    if (all_max > 0.0 && edge_max > 1e-10 * all_max)
        throw Error(ErrorKind::SupportClipped, "windowed samples do not vanish at the lattice edge");
    s.l1_mass = l1;

    run_fft(dim, n0, n1, v);

    s.values.assign(static_cast<size_t>(n0 * n1), cxd(0, 0));
    double freq_l2 = 0.0;
    double twopi_d = dim == 1 ? 2.0 * M_PI : 4.0 * M_PI * M_PI;
    double dxivol = s.dxi[0] * (dim == 2 ? s.dxi[1] : 1.0);
    for (long ic = 0; ic < n0; ++ic) {
        long ki = ic - n0 / 2;
        long si = ((ki % n0) + n0) % n0;
        double xi0 = static_cast<double>(ki) * s.dxi[0];
        for (long jc = 0; jc < n1; ++jc) {
            long kj = jc - n1 / 2;
            long sj = ((kj % n1) + n1) % n1;
            double xi1 = dim == 2 ? static_cast<double>(kj) * s.dxi[1] : 0.0;
            double phase = -(s.x_lo[0] * xi0 + (dim == 2 ? s.x_lo[1] * xi1 : 0.0));
            cxd val = hvol * std::exp(cxd(0.0, phase)) * v[static_cast<size_t>(si * n1 + sj)];
            s.values[static_cast<size_t>(ic * n1 + jc)] = val;
            freq_l2 += std::norm(val);
        }
    }
    freq_l2 *= dxivol / twopi_d;
    s.parseval_rel_err = l2 > 0.0 ? std::abs(freq_l2 - l2) / l2 : 0.0;
    return s;
}

} // namespace

int default_cutoff_order(double eps, int m_max) {
    double ll = std::log(std::log(1.0 / eps));
    int k = 2 * m_max;
    if (std::isfinite(ll)) k = std::max(2 * m_max, static_cast<int>(std::floor(ll)) + 2 * m_max);
    return k;
}

WindowSpec scaled_cutoff(const GeneralizedPoint& x0, const std::function<int(double)>& schedule) {
    WindowSpec w{x0.net(), {}, {}};
    const GridPtr& g = x0.net().grid();
    for (size_t i = 0; i < g->size(); ++i) {
        double eps = (*g)[i];
        int k = schedule(eps);
        if (k < 2) throw Error(ErrorKind::ValidationError, "cutoff orders must be >= 2");
        w.order.push_back(k);
        w.width.push_back(std::pow(eps, 1.0 / k));
    }
    return w;
}

WindowSpec fixed_window(const GeneralizedPoint& x0, double radius) {
    if (!(radius > 0.0)) throw Error(ErrorKind::ValidationError, "window radius must be positive");
    WindowSpec w{x0.net(), {}, {}};
    w.order.assign(x0.net().size(), 0);
    w.width.assign(x0.net().size(), radius);
    return w;
}

FrequencyRegion FrequencyRegion::standard_cone(Vec2 axis, double half_width, int floor_order) {
    double n = std::hypot(axis[0], axis[1]);
    if (!(n > 0.0)) throw Error(ErrorKind::ValidationError, "cone axis must be nonzero");
    FrequencyRegion r;
    r.kind = Kind::StandardCone;
    r.axis = {axis[0] / n, axis[1] / n};
    r.half_width = half_width;
    r.floor_order = floor_order;
    return r;
}

FrequencyRegion FrequencyRegion::fast_tube(const GeneralizedDirection& xi0, int m) {
    FrequencyRegion r;
    r.kind = Kind::FastTube;
    r.axis_net = xi0.net();
    r.floor_order = m;
    return r;
}

FrequencyRegion FrequencyRegion::with_order(int m) const {
    FrequencyRegion r = *this;
    r.floor_order = m;
    return r;
}

Vec2 FrequencyRegion::axis_at(double eps) const {
    if (kind == Kind::StandardCone || !axis_net) return axis;
    const GridPtr& g = axis_net->grid();
    for (size_t i = 0; i < g->size(); ++i)
        if (bits_of((*g)[i]) == bits_of(eps)) return axis_net->at(i);
    throw Error(ErrorKind::OutOfDomain, "direction net has no sample at this eps");
}

bool region_membership(Vec2 xi, double eps, const FrequencyRegion& region) {
    double nrm = std::hypot(xi[0], xi[1]);
    if (!(nrm > 0.0)) return false;
    Vec2 ax = region.axis_at(eps);
    double dx = xi[0] / nrm - ax[0], dy = xi[1] / nrm - ax[1];
    double chord = std::sqrt(dx * dx + dy * dy);
    double m = static_cast<double>(region.floor_order);
    double floor = std::pow(eps, -1.0 / m);
    double ang = region.kind == FrequencyRegion::Kind::FastTube ? std::pow(eps, 1.0 / m)
                                                                : region.half_width;
    return chord <= ang && nrm >= floor;
}

ConeCheckResult cone_enlargement_check(const GeneralizedDirection& xi0, const ScalarNet& r,
                                       const VectorNet& zeta, const VectorNet& eta) {
    require_same_grid(xi0.net().grid(), r.grid());
    require_same_grid(xi0.net().grid(), zeta.grid());
    require_same_grid(xi0.net().grid(), eta.grid());
    if (zeta.dimension() != xi0.dimension() || eta.dimension() != xi0.dimension())
        throw Error(ErrorKind::DimensionMismatch, "cone check nets have mixed dimensions");

    ConeCheckResult res;
    for (size_t i = 0; i < r.size(); ++i) {
        double rv = r[i].real();
        if (!(rv > 0.0) || rv > 0.5)
            throw Error(ErrorKind::PreconditionViolated, "radius must satisfy 0 < r <= 1/2",
                        static_cast<long>(i));
        Vec2 ax = xi0.net().at(i);
        Vec2 z = zeta.at(i), e = eta.at(i);
        double zn = std::hypot(z[0], z[1]);
        if (!(zn > 0.0))
            throw Error(ErrorKind::PreconditionViolated, "zeta must be invertible", static_cast<long>(i));
        double chord_z = std::hypot(z[0] / zn - ax[0], z[1] / zn - ax[1]);
        if (chord_z > rv * (1.0 + 1e-12))
            throw Error(ErrorKind::PreconditionViolated, "zeta lies outside the inner cone",
                        static_cast<long>(i));
        double dist = std::hypot(z[0] - e[0], z[1] - e[1]);
        if (dist > rv * zn * (1.0 + 1e-12))
            throw Error(ErrorKind::PreconditionViolated, "|zeta - eta| exceeds r|zeta|",
                        static_cast<long>(i));
        double en = std::hypot(e[0], e[1]);
        bool ok = en > 0.0;
        if (ok) {
            double chord_e = std::hypot(e[0] / en - ax[0], e[1] / en - ax[1]);
            ok = chord_e <= 3.0 * rv * (1.0 + 1e-12);
        }
        if (!ok) {
            res.ok = false;
            res.first_violation = static_cast<long>(i);
            return res;
        }
    }
    return res;
}

SpectrumSlice windowed_spectrum(const RepFamily& u, const WindowSpec& window, size_t grid_index,
                                double eps, const ResolutionBudget& budget) {
    int dim = u.dimension();
    double w = window.width_at(grid_index);
    Vec2 c = window.center.at(grid_index);
    double cap = budget.cap_multiplier / eps;
    double margin = 4.0 * M_PI / (cap * budget.oversample);
    Box box;
    for (int d = 0; d < dim; ++d) {
        box.lo[static_cast<size_t>(d)] = c[static_cast<size_t>(d)] - w - margin;
        box.hi[static_cast<size_t>(d)] = c[static_cast<size_t>(d)] + w + margin;
    }
    const BumpProfile& prof = BumpProfile::plateau();
    RepFamily uc = u;
    auto f = [&](Vec2 x) -> cxd {
        double q = 0.0;
        for (int d = 0; d < dim; ++d) {
            double t = (x[static_cast<size_t>(d)] - c[static_cast<size_t>(d)]) / w;
            q += t * t;
        }
        if (q >= 1.0) return cxd(0, 0);
        double win = prof.value(std::sqrt(q));
        return win == 0.0 ? cxd(0, 0) : win * uc.value(eps, x);
    };
    SpectrumSlice s = build_slice(f, dim, eps, box, cap, budget.oversample, budget.max_axis_points(dim));
    double n_total = static_cast<double>(s.n[0]) * static_cast<double>(s.n[1]);
    s.noise_floor = budget.noise_floor_rel * std::sqrt(n_total) * s.l1_mass;
    return s;
}

SpectrumSlice plain_spectrum(const RepFamily& u, double eps, const Box& box, double cap,
                             double oversample, long max_points) {
    RepFamily uc = u;
    auto f = [&](Vec2 x) { return uc.value(eps, x); };
    SpectrumSlice s = build_slice(f, u.dimension(), eps, box, cap, oversample, max_points);
    double n_total = static_cast<double>(s.n[0]) * static_cast<double>(s.n[1]);
    s.noise_floor = 1e-13 * std::sqrt(n_total) * s.l1_mass;
    return s;
}

SliceSet::SliceSet(const RepFamily& u, const WindowSpec& window, const GridPtr& grid,
                   const ResolutionBudget& budget, int threads)
    : window_(window), dim_(u.dimension()), budget_(budget) {
    grid_ = grid->truncated(budget.eps_floor(dim_));
    // map truncated indices back to the window's construction grid
    std::vector<size_t> orig(grid_->size());
    const GridPtr& wg = window.center.grid();
    for (size_t i = 0; i < grid_->size(); ++i) {
        bool found = false;
        for (size_t j = 0; j < wg->size(); ++j)
            if (bits_of((*wg)[j]) == bits_of((*grid_)[i])) {
                orig[i] = j;
                found = true;
                break;
            }
        if (!found)
            throw Error(ErrorKind::MixedGrid, "window net does not cover the scan grid");
    }
    slices_.resize(grid_->size());
    std::mutex merge;
    auto work = [&](size_t i) {
        double eps = (*grid_)[i];
        try {
            SpectrumSlice s = windowed_spectrum(u, window_, orig[i], eps, budget_);
            std::lock_guard<std::mutex> lock(merge);
            max_parseval_ = std::max(max_parseval_, s.parseval_rel_err);
            slices_[i] = std::move(s);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ResolutionExceeded) throw;
            std::lock_guard<std::mutex> lock(merge);
            ++dropped_;
        }
    };
    if (threads <= 1) {
        for (size_t i = 0; i < grid_->size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&]() {
                for (size_t i = next++; i < grid_->size(); i = next++) work(i);
            });
        for (auto& t : pool) t.join();
    }
}

ScanResult region_decay_scan(const SliceSet& ss, const FrequencyRegion& region, int m) {
    if (m < 1) throw Error(ErrorKind::DomainError, "scan order must be >= 1");
    ScanResult res;
    res.m = m;
    FrequencyRegion rm = region.with_order(m);
    const double md = static_cast<double>(m);

    for (size_t idx = 0; idx < ss.grid()->size(); ++idx) {
        double eps = (*ss.grid())[idx];
        ScanCell cell;
        cell.eps = eps;
        const auto& maybe = ss.slices()[idx];
        if (!maybe) {
            cell.dropped = true;
            ++res.dropped_cells;
            res.cells.push_back(cell);
            continue;
        }
        const SpectrumSlice& s = *maybe;
        Vec2 ax = rm.axis_at(eps);
        double floor = std::pow(eps, -1.0 / md);
        double ang = rm.kind == FrequencyRegion::Kind::FastTube ? std::pow(eps, 1.0 / md)
                                                                : rm.half_width;
        if (rm.kind == FrequencyRegion::Kind::FastTube) {
            // the lattice cannot resolve tubes thinner than one frequency step
            // at the floor radius; widen to the resolvable chord (superset)
            double resolvable = s.dxi[0] / floor;
            cell.widened = resolvable > ang;
            ang = std::max(ang, resolvable);
        }
        double ang2 = ang * ang;
        double cap = s.freq_cap;
        double xi_min = 0.5 * s.dxi[0];

        long n0 = s.n[0], n1 = s.dim == 2 ? s.n[1] : 1;
        for (long i = 0; i < n0; ++i) {
            for (long j = 0; j < n1; ++j) {
                Vec2 xi = s.xi_at(i, j);
                double r2 = xi[0] * xi[0] + xi[1] * xi[1];
                if (r2 > cap * cap || r2 < xi_min * xi_min) continue;
                double nrm = std::sqrt(r2);
                double dot = (xi[0] * ax[0] + xi[1] * ax[1]) / nrm;
                double chord2 = 2.0 - 2.0 * dot;
                if (chord2 > ang2) continue;
                double v = s.clamped_abs(i, j);
                cell.weighted_sup = std::max(cell.weighted_sup, std::pow(1.0 + r2, 0.5 * md) * v);
                if (nrm >= floor) {
                    ++cell.points;
                    cell.sup = std::max(cell.sup, v);
                }
            }
        }
        if (cell.points == 0) {
            cell.empty = true;
            ++res.empty_cells;
        }
        res.cells.push_back(cell);
    }
    if (res.empty_cells + res.dropped_cells == static_cast<int>(res.cells.size()))
        throw Error(ErrorKind::EmptyRegion, "no lattice point qualifies in the region at any eps");
    return res;
}

namespace {

std::pair<GridPtr, std::vector<double>> collect_cells(const std::vector<ScanCell>& cells,
                                                      bool weighted) {
    std::vector<double> eps, vals;
    for (const ScanCell& c : cells) {
        if (c.dropped || (!weighted && c.empty)) continue;
        eps.push_back(c.eps);
        vals.push_back(weighted ? c.weighted_sup : c.sup);
    }
    if (eps.size() < 2) throw Error(ErrorKind::EmptyRegion, "too few usable scan cells");
    return {EpsilonGrid::subgrid(eps), vals};
}

} // namespace

std::pair<GridPtr, std::vector<double>> ScanResult::sup_samples() const {
    return collect_cells(cells, false);
}
std::pair<GridPtr, std::vector<double>> ScanResult::weighted_samples() const {
    return collect_cells(cells, true);
}

ScaleVerdict weighted_moderate_scan(const SliceSet& ss, const FrequencyRegion& region, int m,
                                    int n_max, const ClassifyParams& params) {
    ScanResult r = region_decay_scan(ss, region, m);
    auto [g, vals] = r.weighted_samples();
    std::vector<cxd> cv(vals.begin(), vals.end());
    return is_moderate(ScalarNet(g, std::move(cv)), n_max, params);
}

ScalarNet window_baseline_net(const SliceSet& ss, int m) {
    const BumpProfile& prof = BumpProfile::plateau();
    double env0 = prof.fourier_envelope(ss.dimension(), 0.0);
    std::vector<cxd> vals;
    std::vector<double> eps_list;
    const GridPtr& wg = ss.window().center.grid();
    for (size_t i = 0; i < ss.grid()->size(); ++i) {
        double eps = (*ss.grid())[i];
        // width index on the window's own grid
        size_t wi = 0;
        for (size_t j = 0; j < wg->size(); ++j)
            if (bits_of((*wg)[j]) == bits_of(eps)) {
                wi = j;
                break;
            }
        double w = ss.window().width_at(wi);
        double floor = std::pow(eps, -1.0 / static_cast<double>(m));
        double b = prof.fourier_envelope(ss.dimension(), w * floor) / env0;
        if (b <= ss.budget().noise_floor_rel) b = 0.0;
        vals.emplace_back(b, 0.0);
        eps_list.push_back(eps);
    }
    return ScalarNet(EpsilonGrid::subgrid(eps_list), std::move(vals));
}

bool order_resolvable(const SliceSet& ss, int m, const ClassifyParams& params) {
    ScalarNet b = window_baseline_net(ss, m);
    ScaleVerdict v = is_negligible(b, std::max(m, 1), params);
    return v.kind == ScaleKind::Negligible && v.order >= m;
}

} // namespace gwave
