#include "gwave/bump.hpp"
#include "gwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace gwave {

namespace {

double glue_g(double s) {
    // e^{-1/s}, flat-zero continuation at s <= 0
    if (s <= 1e-12) return 0.0;
    return std::exp(-1.0 / s);
}

RTaylor jet_glue_g(const RTaylor& s) {
    if (s.constant_term() <= 1e-12) return RTaylor{};  // identically 0 jet
    return jet_exp(-jet_recip(s));
}

} // namespace

const BumpProfile& BumpProfile::plateau() {
    static const BumpProfile p(Kind::Plateau);
    return p;
}

const BumpProfile& BumpProfile::classic() {
    static const BumpProfile p(Kind::Classic);
    return p;
}

double BumpProfile::value(double t) const {
    t = std::abs(t);
    if (t >= 1.0) return 0.0;
    if (kind_ == Kind::Plateau) {
        if (t <= 0.5) return 1.0;
        double s = 2.0 * (t - 0.5);
        double g0 = glue_g(s), g1 = glue_g(1.0 - s);
        return g1 / (g0 + g1);
    }
    double q = 1.0 - t * t;
    return std::exp(-1.0 / q);
}

RTaylor BumpProfile::jet(double t) const {
    t = std::abs(t);
    if (t >= 1.0) return RTaylor{};
    if (kind_ == Kind::Plateau) {
        if (t <= 0.5) return RTaylor::constant(1.0);
        RTaylor tv = RTaylor::variable(t);
        RTaylor s = 2.0 * (tv - RTaylor::constant(0.5));
        RTaylor g0 = jet_glue_g(s);
        RTaylor g1 = jet_glue_g(RTaylor::constant(1.0) - s);
        return jet_div(g1, g0 + g1);
    }
    RTaylor tv = RTaylor::variable(t);
    RTaylor q = RTaylor::constant(1.0) - tv * tv;
    return jet_exp(-jet_recip(q));
}

double BumpProfile::derivative(int n, double t) const {
    if (n == 0) return value(t);
    return jet(t).derivative(n);
}

double BumpProfile::mass(int d) const { return d == 1 ? mass1_ : mass2_; }

BumpProfile::BumpProfile(Kind kind) : kind_(kind) { build_tables(); }

void BumpProfile::build_tables() {
    auto f = [this](double t) { return value(t); };

    mass1_ = 2.0 * integrate_gl(f, 0.0, 1.0, 128);
    mass2_ = 2.0 * M_PI * integrate_gl([&](double t) { return value(t) * t; }, 0.0, 1.0, 128);

    const int nt = static_cast<int>(std::lround(s_max_ / ds_)) + 1;
    ft1_.resize(nt);
    ft2_.resize(nt);
    for (int i = 0; i < nt; ++i) {
        double s = i * ds_;
        ft1_[i] = 2.0 * integrate_gl([&](double t) { return value(t) * std::cos(s * t); }, 0.0, 1.0, 192);
        ft2_[i] = 2.0 * M_PI *
                  integrate_gl([&](double t) { return value(t) * std::cyl_bessel_j(0.0, s * t) * t; }, 0.0, 1.0, 192);
    }

    auto build_env = [&](const std::vector<double>& ft, std::vector<double>& env, double& a, double& c) {
        env.resize(ft.size());
        double running = 0.0;
        for (int i = static_cast<int>(ft.size()) - 1; i >= 0; --i) {
            running = std::max(running, std::abs(ft[i]));
            env[i] = running;
        }
        // tail model ln env = a - c sqrt(s) for extrapolation
        int i0 = static_cast<int>(ft.size()) * 3 / 4, i1 = static_cast<int>(ft.size()) - 1;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int i = i0; i <= i1; ++i) {
            double x = std::sqrt(i * ds_), y = std::log(std::max(env[i], 1e-300));
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n;
        }
        c = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
        a = (sy + c * sx) / n;
    };
    build_env(ft1_, env1_, env_a1_, env_c1_);
    build_env(ft2_, env2_, env_a2_, env_c2_);

    // unit-mass antiderivative on [-1, 1]
    const int na = 2048;
    anti_h_ = 2.0 / na;
    anti_.resize(na + 1);
    anti_[0] = 0.0;
    for (int i = 1; i <= na; ++i) {
        double a = -1.0 + (i - 1) * anti_h_, b = -1.0 + i * anti_h_;
        anti_[i] = anti_[i - 1] + integrate_gl([&](double t) { return value(t); }, a, b, 16) / mass1_;
    }
}

double BumpProfile::fourier(int d, double s) const {
    s = std::abs(s);
    const std::vector<double>& ft = (d == 1) ? ft1_ : ft2_;
    if (s > s_max_) return 0.0;
    double u = s / ds_;
    int i = std::clamp(static_cast<int>(u) - 1, 0, static_cast<int>(ft.size()) - 4);
    double x = u - i;  // in [1,2] for interior points
    // 4-point Lagrange at offsets 0,1,2,3
    double c0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
    double c1 = x * (x - 2) * (x - 3) / 2.0;
    double c2 = -x * (x - 1) * (x - 3) / 2.0;
    double c3 = x * (x - 1) * (x - 2) / 6.0;
    return c0 * ft[i] + c1 * ft[i + 1] + c2 * ft[i + 2] + c3 * ft[i + 3];
}

double BumpProfile::fourier_envelope(int d, double s) const {
    s = std::abs(s);
    const std::vector<double>& env = (d == 1) ? env1_ : env2_;
    double a = (d == 1) ? env_a1_ : env_a2_, c = (d == 1) ? env_c1_ : env_c2_;
    if (s > s_max_) return std::exp(a - c * std::sqrt(s));
    double u = s / ds_;
    int i = std::min(static_cast<int>(u), static_cast<int>(env.size()) - 2);
    return std::max(env[i], env[i + 1]);  // stay a majorant between nodes
}

double BumpProfile::antiderivative(double t) const {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double u = (t + 1.0) / anti_h_;
    int i = std::clamp(static_cast<int>(u), 0, static_cast<int>(anti_.size()) - 2);
    double x = (t - (-1.0 + i * anti_h_)) / anti_h_;
    double f0 = anti_[i], f1 = anti_[i + 1];
    double d0 = value(-1.0 + i * anti_h_) / mass1_ * anti_h_;
    double d1 = value(-1.0 + (i + 1) * anti_h_) / mass1_ * anti_h_;
    // cubic Hermite with exact endpoint slopes
    double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
    double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
    return h00 * f0 + h10 * d0 + h01 * f1 + h11 * d1;
}

} // namespace gwave
