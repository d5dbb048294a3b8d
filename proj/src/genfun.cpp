#include "gwave/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <unordered_map>

namespace gwave {

namespace {

uint64_t key_bits(double e) {
    uint64_t k;
    std::memcpy(&k, &e, sizeof(k));
    return k;
}

/// per-eps memo for expression parameters evaluated inside sampling loops
template <class T>
class EpsMemo {
public:
    T get(double eps, const std::function<T(double)>& fn) const {
        uint64_t k = key_bits(eps);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = map_.find(k);
            if (it != map_.end()) return it->second;
        }
        T v = fn(eps);
        std::lock_guard<std::mutex> lock(mutex_);
        map_.emplace(k, v);
        return v;
    }

private:
    mutable std::mutex mutex_;
    mutable std::unordered_map<uint64_t, T> map_;
};

/// Derivative table of G(q) = profile(sqrt(q)) at q0; radial bumps are smooth
/// in q, which sidesteps |x| at the origin.
std::array<double, 8> radial_q_table(const BumpProfile& p, double q0) {
    std::array<double, 8> d{};
    if (q0 >= 1.0) return d;
    if (p.kind() == BumpProfile::Kind::Classic) {
        RTaylor q = RTaylor::variable(q0);
        RTaylor g = jet_exp(-jet_recip(RTaylor::constant(1.0) - q));
        for (int k = 0; k <= 7; ++k) d[static_cast<size_t>(k)] = g.derivative(k);
        return d;
    }
    if (q0 <= 0.25) {
        d[0] = 1.0;
        return d;
    }
    double t0 = std::sqrt(q0);
    RTaylor outer = p.jet(t0);
    RTaylor inner = jet_sqrt(RTaylor::variable(q0));
    std::array<double, 8> ders{};
    for (int k = 0; k <= 7; ++k) ders[static_cast<size_t>(k)] = outer.derivative(k);
    RTaylor comp = apply_analytic(inner, ders);
    for (int k = 0; k <= 7; ++k) d[static_cast<size_t>(k)] = comp.derivative(k);
    return d;
}

template <class Jet>
Jet radial_bump_jet(const BumpProfile& p, const Jet& q_jet) {
    double q0 = q_jet.constant_term().real();
    std::array<double, 8> tab = radial_q_table(p, q0);
    std::array<cxd, Jet::order + 1> ders;
    for (int k = 0; k <= Jet::order; ++k) ders[static_cast<size_t>(k)] = cxd(tab[static_cast<size_t>(k)], 0.0);
    return apply_analytic(q_jet, ders);
}

/// full jet of the even profile psi at any t0 (sign handled by the q = t^2 chain)
RTaylor psi_jet_at(const BumpProfile& p, double t0) {
    RTaylor tv = RTaylor::variable(t0);
    RTaylor q = tv * tv;
    std::array<double, 8> tab = radial_q_table(p, q.constant_term());
    return apply_analytic(q, tab);
}

} // namespace

struct RepFamily::Impl {
    int dim = 1;
    std::string provenance;
    SupportSpec support;
    int max_order = 6;
    std::function<std::optional<Box>(double)> support_box;
    std::function<cxd(double, Vec2)> value;
    std::function<CTaylor(double, double)> jet1;
    std::function<CJet2(double, Vec2)> jet2;
    std::function<cxd(double, Vec2)> oracle;
};

int RepFamily::dimension() const { return impl_->dim; }
const std::string& RepFamily::provenance() const { return impl_->provenance; }
const SupportSpec& RepFamily::support() const { return impl_->support; }

std::optional<Box> RepFamily::support_box(double eps) const {
    if (impl_->support_box) return impl_->support_box(eps);
    if (impl_->support.kind == SupportKind::CompactBox) return impl_->support.hull;
    return std::nullopt;
}

cxd RepFamily::value(double eps, Vec2 x) const { return impl_->value(eps, x); }

CTaylor RepFamily::jet1(double eps, double x1) const {
    if (impl_->dim != 1) throw Error(ErrorKind::DimensionMismatch, "jet1 needs a 1D family");
    return impl_->jet1(eps, x1);
}

CJet2 RepFamily::jet2(double eps, Vec2 x) const {
    if (impl_->dim != 2) throw Error(ErrorKind::DimensionMismatch, "jet2 needs a 2D family");
    return impl_->jet2(eps, x);
}

cxd RepFamily::derivative(double eps, Vec2 x, MultiIndex alpha) const {
    int total = alpha[0] + alpha[1];
    if (alpha[0] < 0 || alpha[1] < 0 || total > max_derivative_order() ||
        (impl_->dim == 1 && alpha[1] != 0))
        throw Error(ErrorKind::OutOfDomain, "derivative order outside the family's jet range");
    if (impl_->dim == 1) return impl_->jet1(eps, x[0]).derivative(alpha[0]);
    return impl_->jet2(eps, x).derivative(alpha[0], alpha[1]);
}

int RepFamily::max_derivative_order() const { return impl_->max_order; }

bool RepFamily::has_fourier_oracle() const { return static_cast<bool>(impl_->oracle); }

cxd RepFamily::fourier_oracle(double eps, Vec2 xi) const {
    if (!impl_->oracle) throw Error(ErrorKind::OutOfDomain, "family has no Fourier oracle");
    return impl_->oracle(eps, xi);
}

const void* RepFamily::id() const { return impl_.get(); }

// ---- constructors --------------------------------------------------------

RepFamily embed_smooth(const ExprAst& f) {
    if (f.uses_eps())
        throw Error(ErrorKind::DomainError, "embedded smooth functions must not depend on eps");
    auto impl = std::make_shared<RepFamily::Impl>();
    impl->dim = f.dimension();
    impl->max_order = impl->dim == 1 ? 6 : 4;
    impl->provenance = "embed_smooth(" + f.source() + ")";
    impl->support.kind = SupportKind::Unbounded;
    impl->value = [f](double eps, Vec2 x) { return eval(f, eps, x); };
    impl->jet1 = [f](double eps, double x1) { return eval_jet1(f, eps, x1); };
    impl->jet2 = [f](double eps, Vec2 x) { return eval_jet2(f, eps, x); };
    return RepFamily(impl);
}

RepFamily bump_family(int dim, Vec2 center, double radius, BumpProfile::Kind kind) {
    if (dim != 1 && dim != 2) throw Error(ErrorKind::DimensionMismatch, "dimension must be 1 or 2");
    if (!(radius > 0.0)) throw Error(ErrorKind::DomainError, "bump radius must be positive");
    const BumpProfile& prof =
        kind == BumpProfile::Kind::Classic ? BumpProfile::classic() : BumpProfile::plateau();
    auto impl = std::make_shared<RepFamily::Impl>();
    impl->dim = dim;
    impl->max_order = dim == 1 ? 6 : 4;
    impl->provenance = "bump_family";
    impl->support.kind = SupportKind::CompactBox;
    impl->support.hull = Box{{center[0] - radius, center[1] - radius},
                             {center[0] + radius, center[1] + radius}};
    impl->value = [&prof, center, radius, dim](double, Vec2 x) {
        double q = 0.0;
        for (int d = 0; d < dim; ++d) {
            double t = (x[static_cast<size_t>(d)] - center[static_cast<size_t>(d)]) / radius;
            q += t * t;
        }
        return cxd(prof.value(std::sqrt(q)), 0.0);
    };
    impl->jet1 = [&prof, center, radius](double, double x1) {
        CTaylor xv = CTaylor::variable(cxd(x1, 0.0));
        CTaylor t = cxd(1.0 / radius, 0.0) * (xv - CTaylor::constant(cxd(center[0], 0.0)));
        return radial_bump_jet(prof, t * t);
    };
    impl->jet2 = [&prof, center, radius](double, Vec2 x) {
        CJet2 x1 = CJet2::variable(0, cxd(x[0], 0.0));
        CJet2 x2 = CJet2::variable(1, cxd(x[1], 0.0));
        CJet2 t1 = cxd(1.0 / radius, 0.0) * (x1 - CJet2::constant(cxd(center[0], 0.0)));
        CJet2 t2 = cxd(1.0 / radius, 0.0) * (x2 - CJet2::constant(cxd(center[1], 0.0)));
        return radial_bump_jet(prof, t1 * t1 + t2 * t2);
    };
    double scale = dim == 1 ? radius : radius * radius;
    impl->oracle = [&prof, center, radius, dim, scale](double, Vec2 xi) {
        double r = std::hypot(xi[0], dim == 2 ? xi[1] : 0.0);
        double phase = -(xi[0] * center[0] + (dim == 2 ? xi[1] * center[1] : 0.0));
        return scale * prof.fourier(dim, radius * r) * std::exp(cxd(0.0, phase));
    };
    return RepFamily(impl);
}

RepFamily mollified_distribution(MollifiedKind kind, const ExprAst& center, const BumpSpec& mollifier,
                                 const GridPtr& reference_grid) {
    if (center.uses_coords())
        throw Error(ErrorKind::NonScalar, "mollifier centers are eps-expressions");
    if (std::abs(mollifier.mass_scale - 1.0) > 1e-10)
        throw Error(ErrorKind::BadMollifier, "mollifier integral differs from 1");
    const BumpProfile& prof = mollifier.profile == BumpProfile::Kind::Classic ? BumpProfile::classic()
                                                                              : BumpProfile::plateau();
    double mass = prof.mass(1);

    auto impl = std::make_shared<RepFamily::Impl>();
    impl->dim = 1;
    impl->max_order = 6;

    auto memo = std::make_shared<EpsMemo<double>>();
    auto center_at = [memo, center](double eps) {
        return memo->get(eps, [&center](double e) { return eval_scalar(center, e).real(); });
    };

    double cmin = 0, cmax = 0;
    bool first = true;
    for (double e : reference_grid->values()) {
        double c = center_at(e);
        cmin = first ? c : std::min(cmin, c);
        cmax = first ? c : std::max(cmax, c);
        first = false;
    }
    double eps_max = reference_grid->values().front();

    switch (kind) {
        case MollifiedKind::Delta: {
            impl->provenance = "delta(center=" + center.source() + ")";
            impl->support.kind = SupportKind::CompactBox;
            impl->support.hull = Box{{cmin - eps_max, 0.0}, {cmax + eps_max, 0.0}};
            impl->support_box = [center_at](double eps) -> std::optional<Box> {
                double c = center_at(eps);
                return Box{{c - eps, 0.0}, {c + eps, 0.0}};
            };
            impl->value = [&prof, mass, center_at](double eps, Vec2 x) {
                double t = (x[0] - center_at(eps)) / eps;
                return cxd(prof.value(std::abs(t)) / (mass * eps), 0.0);
            };
            impl->jet1 = [&prof, mass, center_at](double eps, double x1) {
                CTaylor xv = CTaylor::variable(cxd(x1, 0.0));
                CTaylor t = cxd(1.0 / eps, 0.0) * (xv - CTaylor::constant(cxd(center_at(eps), 0.0)));
                CTaylor q = t * t;
                return cxd(1.0 / (mass * eps), 0.0) * radial_bump_jet(prof, q);
            };
            impl->oracle = [&prof, mass, center_at](double eps, Vec2 xi) {
                double c = center_at(eps);
                return std::exp(cxd(0.0, -xi[0] * c)) * (prof.fourier(1, eps * xi[0]) / mass);
            };
            break;
        }
        case MollifiedKind::DiracDerivative: {
            impl->provenance = "dirac_derivative(center=" + center.source() + ")";
            impl->support.kind = SupportKind::CompactBox;
            impl->support.hull = Box{{cmin - eps_max, 0.0}, {cmax + eps_max, 0.0}};
            impl->support_box = [center_at](double eps) -> std::optional<Box> {
                double c = center_at(eps);
                return Box{{c - eps, 0.0}, {c + eps, 0.0}};
            };
            auto jet = [&prof, mass, center_at](double eps, double x1) {
                // u_eps = eps^{-2} psi'((x-c)/eps): profile jet shifted one order up
                double t0 = (x1 - center_at(eps)) / eps;
                RTaylor pj = psi_jet_at(prof, t0);
                CTaylor out;
                double scale = 1.0 / (mass * eps * eps);
                double fact = 1.0;
                for (int k = 0; k <= CTaylor::order; ++k) {
                    if (k >= 2) fact *= k;
                    out.c[static_cast<size_t>(k)] =
                        cxd(scale * pj.derivative(k + 1) * std::pow(1.0 / eps, k) / fact, 0.0);
                }
                return out;
            };
            impl->jet1 = jet;
            impl->value = [jet](double eps, Vec2 x) { return jet(eps, x[0]).constant_term(); };
            impl->oracle = [&prof, mass, center_at](double eps, Vec2 xi) {
                double c = center_at(eps);
                return cxd(0.0, xi[0]) * std::exp(cxd(0.0, -xi[0] * c)) *
                       (prof.fourier(1, eps * xi[0]) / mass);
            };
            break;
        }
        case MollifiedKind::Heaviside: {
            impl->provenance = "heaviside(center=" + center.source() + ")";
            impl->support.kind = SupportKind::Unbounded;
            impl->value = [&prof, center_at](double eps, Vec2 x) {
                double t = (x[0] - center_at(eps)) / eps;
                return cxd(prof.antiderivative(t), 0.0);
            };
            impl->jet1 = [&prof, mass, center_at](double eps, double x1) {
                double t0 = (x1 - center_at(eps)) / eps;
                CTaylor out;
                out.c[0] = cxd(prof.antiderivative(t0), 0.0);
                RTaylor pj = psi_jet_at(prof, t0);
                double fact = 1.0;
                for (int k = 1; k <= CTaylor::order; ++k) {
                    fact *= k;
                    out.c[static_cast<size_t>(k)] =
                        cxd(pj.derivative(k - 1) / mass * std::pow(1.0 / eps, k) / fact, 0.0);
                }
                return out;
            };
            break;
        }
    }
    return RepFamily(impl);
}

RepFamily plane_wave(const ExprAst& amplitude, const ExprAst& frequency,
                     const std::vector<ExprAst>& direction, const BumpSpec& envelope) {
    int dim = static_cast<int>(direction.size());
    if (dim != 1 && dim != 2)
        throw Error(ErrorKind::DimensionMismatch, "plane waves support dimension 1 or 2");
    for (const ExprAst& d : direction)
        if (d.uses_coords()) throw Error(ErrorKind::NonScalar, "directions are eps-expressions");
    const BumpProfile& prof = envelope.profile == BumpProfile::Kind::Classic ? BumpProfile::classic()
                                                                             : BumpProfile::plateau();
    Vec2 c = envelope.center;
    double w = envelope.radius;
    if (!(w > 0.0)) throw Error(ErrorKind::DomainError, "envelope radius must be positive");

    struct Params {
        cxd amp;
        double lambda;
        Vec2 theta;
    };
    auto memo = std::make_shared<EpsMemo<Params>>();
    auto params_at = [memo, amplitude, frequency, direction, dim](double eps) {
        return memo->get(eps, [&](double e) {
            Params p;
            p.amp = eval_scalar(amplitude, e);
            p.lambda = eval_scalar(frequency, e).real();
            if (!(p.lambda > 0.0))
                throw Error(ErrorKind::DomainError, "plane-wave frequency must be positive");
            double n = 0.0;
            for (int d = 0; d < dim; ++d) {
                p.theta[static_cast<size_t>(d)] = eval_scalar(direction[static_cast<size_t>(d)], e).real();
                n += p.theta[static_cast<size_t>(d)] * p.theta[static_cast<size_t>(d)];
            }
            n = std::sqrt(n);
            if (!(n > 0.0)) throw Error(ErrorKind::DomainError, "plane-wave direction must be nonzero");
            for (int d = 0; d < dim; ++d) p.theta[static_cast<size_t>(d)] /= n;
            return p;
        });
    };

    auto impl = std::make_shared<RepFamily::Impl>();
    impl->dim = dim;
    impl->max_order = dim == 1 ? 6 : 4;
    impl->provenance = "plane_wave(a=" + amplitude.source() + ", lambda=" + frequency.source() + ")";
    impl->support.kind = SupportKind::CompactBox;
    impl->support.hull = Box{{c[0] - w, c[1] - w}, {c[0] + w, c[1] + w}};

    impl->value = [&prof, params_at, c, w, dim](double eps, Vec2 x) {
        Params p = params_at(eps);
        double q = 0.0;
        for (int d = 0; d < dim; ++d) {
            double t = (x[static_cast<size_t>(d)] - c[static_cast<size_t>(d)]) / w;
            q += t * t;
        }
        double env = prof.value(std::sqrt(q));
        if (env == 0.0) return cxd(0.0, 0.0);
        double phase = 0.0;
        for (int d = 0; d < dim; ++d) phase += x[static_cast<size_t>(d)] * p.theta[static_cast<size_t>(d)];
        return p.amp * env * std::exp(cxd(0.0, p.lambda * phase));
    };
    impl->jet1 = [&prof, params_at, c, w](double eps, double x1) {
        Params p = params_at(eps);
        CTaylor xv = CTaylor::variable(cxd(x1, 0.0));
        CTaylor t = cxd(1.0 / w, 0.0) * (xv - CTaylor::constant(cxd(c[0], 0.0)));
        CTaylor env = radial_bump_jet(prof, t * t);
        CTaylor phase = cxd(0.0, p.lambda * p.theta[0]) * xv;
        return p.amp * (env * jet_exp(phase));
    };
    impl->jet2 = [&prof, params_at, c, w](double eps, Vec2 x) {
        Params p = params_at(eps);
        CJet2 x1 = CJet2::variable(0, cxd(x[0], 0.0));
        CJet2 x2 = CJet2::variable(1, cxd(x[1], 0.0));
        CJet2 t1 = cxd(1.0 / w, 0.0) * (x1 - CJet2::constant(cxd(c[0], 0.0)));
        CJet2 t2 = cxd(1.0 / w, 0.0) * (x2 - CJet2::constant(cxd(c[1], 0.0)));
        CJet2 env = radial_bump_jet(prof, t1 * t1 + t2 * t2);
        CJet2 phase = cxd(0.0, p.lambda * p.theta[0]) * x1 + cxd(0.0, p.lambda * p.theta[1]) * x2;
        return p.amp * (env * jet_exp(phase));
    };
    impl->oracle = [&prof, params_at, c, w, dim](double eps, Vec2 xi) {
        Params p = params_at(eps);
        double phase = 0.0, r2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            double z = xi[static_cast<size_t>(d)] - p.lambda * p.theta[static_cast<size_t>(d)];
            phase -= z * c[static_cast<size_t>(d)];
            r2 += z * z;
        }
        double scale = dim == 1 ? w : w * w;
        return p.amp * scale * prof.fourier(dim, w * std::sqrt(r2)) * std::exp(cxd(0.0, phase));
    };
    return RepFamily(impl);
}

RepFamily product(const RepFamily& u, const RepFamily& v) {
    if (u.dimension() != v.dimension())
        throw Error(ErrorKind::DimensionMismatch, "product factors have different dimensions");
    auto impl = std::make_shared<RepFamily::Impl>();
    impl->dim = u.dimension();
    impl->max_order = std::min(u.max_derivative_order(), v.max_derivative_order());
    impl->provenance = "product(" + u.provenance() + ", " + v.provenance() + ")";

    SupportKind ku = u.support().kind, kv = v.support().kind;
    if (ku == SupportKind::CompactBox || kv == SupportKind::CompactBox) {
        impl->support.kind = SupportKind::CompactBox;
        if (ku == SupportKind::CompactBox && kv == SupportKind::CompactBox) {
            Box a = u.support().hull, b = v.support().hull;
            for (int d = 0; d < 2; ++d) {
                impl->support.hull.lo[static_cast<size_t>(d)] =
                    std::max(a.lo[static_cast<size_t>(d)], b.lo[static_cast<size_t>(d)]);
                impl->support.hull.hi[static_cast<size_t>(d)] =
                    std::min(a.hi[static_cast<size_t>(d)], b.hi[static_cast<size_t>(d)]);
            }
        } else {
            impl->support.hull = ku == SupportKind::CompactBox ? u.support().hull : v.support().hull;
        }
        RepFamily uc = u, vc = v;
        impl->support_box = [uc, vc](double eps) -> std::optional<Box> {
            auto a = uc.support_box(eps), b = vc.support_box(eps);
            if (a && b) {
                Box r;
                for (int d = 0; d < 2; ++d) {
                    r.lo[static_cast<size_t>(d)] =
                        std::max(a->lo[static_cast<size_t>(d)], b->lo[static_cast<size_t>(d)]);
                    r.hi[static_cast<size_t>(d)] =
                        std::min(a->hi[static_cast<size_t>(d)], b->hi[static_cast<size_t>(d)]);
                }
                return r;
            }
            return a ? a : b;
        };
    } else if (ku == SupportKind::SchwartzDecay || kv == SupportKind::SchwartzDecay) {
        impl->support.kind = SupportKind::SchwartzDecay;
    }

    RepFamily uc = u, vc = v;
    impl->value = [uc, vc](double eps, Vec2 x) { return uc.value(eps, x) * vc.value(eps, x); };
    impl->jet1 = [uc, vc](double eps, double x1) { return uc.jet1(eps, x1) * vc.jet1(eps, x1); };
    impl->jet2 = [uc, vc](double eps, Vec2 x) { return uc.jet2(eps, x) * vc.jet2(eps, x); };
    return RepFamily(impl);
}

RepFamily scale(const RepFamily& u, const ExprAst& c) {
    if (c.uses_coords()) throw Error(ErrorKind::NonScalar, "scale factors are eps-expressions");
    auto impl = std::make_shared<RepFamily::Impl>();
    impl->dim = u.dimension();
    impl->max_order = u.max_derivative_order();
    impl->provenance = "scale(" + u.provenance() + ", " + c.source() + ")";
    impl->support = u.support();
    RepFamily uc = u;
    impl->support_box = [uc](double eps) { return uc.support_box(eps); };
    auto memo = std::make_shared<EpsMemo<cxd>>();
    auto factor = [memo, c](double eps) {
        return memo->get(eps, [&c](double e) { return eval_scalar(c, e); });
    };
    impl->value = [uc, factor](double eps, Vec2 x) { return factor(eps) * uc.value(eps, x); };
    impl->jet1 = [uc, factor](double eps, double x1) { return factor(eps) * uc.jet1(eps, x1); };
    impl->jet2 = [uc, factor](double eps, Vec2 x) { return factor(eps) * uc.jet2(eps, x); };
    if (u.has_fourier_oracle()) {
        impl->oracle = [uc, factor](double eps, Vec2 xi) {
            return factor(eps) * uc.fourier_oracle(eps, xi);
        };
    }
    return RepFamily(impl);
}

RepFamily translate(const RepFamily& u, const VectorNet& y) {
    if (y.dimension() != u.dimension())
        throw Error(ErrorKind::DimensionMismatch, "translation vector has the wrong dimension");
    auto shifts = std::make_shared<std::unordered_map<uint64_t, Vec2>>();
    double ymax[2] = {0.0, 0.0}, ymin[2] = {0.0, 0.0};
    for (size_t i = 0; i < y.size(); ++i) {
        Vec2 v = y.at(i);
        shifts->emplace(key_bits((*y.grid())[i]), v);
        for (int d = 0; d < 2; ++d) {
            ymin[d] = std::min(ymin[d], v[static_cast<size_t>(d)]);
            ymax[d] = std::max(ymax[d], v[static_cast<size_t>(d)]);
        }
    }
    auto shift_at = [shifts](double eps) {
        auto it = shifts->find(key_bits(eps));
        if (it == shifts->end())
            throw Error(ErrorKind::OutOfDomain, "translation net has no sample at this eps");
        return it->second;
    };

    auto impl = std::make_shared<RepFamily::Impl>();
    impl->dim = u.dimension();
    impl->max_order = u.max_derivative_order();
    impl->provenance = "translate(" + u.provenance() + ")";
    impl->support = u.support();
    if (impl->support.kind == SupportKind::CompactBox) {
        for (int d = 0; d < 2; ++d) {
            impl->support.hull.lo[static_cast<size_t>(d)] += ymin[d];
            impl->support.hull.hi[static_cast<size_t>(d)] += ymax[d];
        }
    }
    RepFamily uc = u;
    impl->support_box = [uc, shift_at](double eps) -> std::optional<Box> {
        auto b = uc.support_box(eps);
        if (!b) return b;
        Vec2 s = shift_at(eps);
        Box r = *b;
        for (int d = 0; d < 2; ++d) {
            r.lo[static_cast<size_t>(d)] += s[static_cast<size_t>(d)];
            r.hi[static_cast<size_t>(d)] += s[static_cast<size_t>(d)];
        }
        return r;
    };
    impl->value = [uc, shift_at](double eps, Vec2 x) {
        Vec2 s = shift_at(eps);
        return uc.value(eps, {x[0] - s[0], x[1] - s[1]});
    };
    impl->jet1 = [uc, shift_at](double eps, double x1) {
        return uc.jet1(eps, x1 - shift_at(eps)[0]);
    };
    impl->jet2 = [uc, shift_at](double eps, Vec2 x) {
        Vec2 s = shift_at(eps);
        return uc.jet2(eps, {x[0] - s[0], x[1] - s[1]});
    };
    if (u.has_fourier_oracle()) {
        impl->oracle = [uc, shift_at](double eps, Vec2 xi) {
            Vec2 s = shift_at(eps);
            return std::exp(cxd(0.0, -(xi[0] * s[0] + xi[1] * s[1]))) * uc.fourier_oracle(eps, xi);
        };
    }
    return RepFamily(impl);
}

// ---- generalized points and directions -----------------------------------

GeneralizedPoint::GeneralizedPoint(VectorNet net, std::string name)
    : net_(std::move(net)), name_(std::move(name)) {
    for (int d = 0; d < net_.dimension(); ++d) {
        double lo = 0, hi = 0;
        for (size_t i = 0; i < net_.size(); ++i) {
            double v = net_.coord(d)[i].real();
            if (!std::isfinite(v))
                throw Error(ErrorKind::ValidationError, "point net has non-finite samples");
            lo = i == 0 ? v : std::min(lo, v);
            hi = i == 0 ? v : std::max(hi, v);
        }
        box_.lo[static_cast<size_t>(d)] = lo;
        box_.hi[static_cast<size_t>(d)] = hi;
    }
}

GeneralizedPoint GeneralizedPoint::constant(const GridPtr& grid, Vec2 x, int dim, std::string name) {
    return GeneralizedPoint(VectorNet::map(grid, dim, [x](double) { return x; }), std::move(name));
}

GeneralizedDirection::GeneralizedDirection(VectorNet net, std::string name, bool)
    : net_(std::move(net)), name_(std::move(name)) {}

GeneralizedDirection::GeneralizedDirection(const VectorNet& raw, std::string name)
    : GeneralizedDirection(
          [&raw]() {
              std::vector<std::vector<cxd>> cs(static_cast<size_t>(raw.dimension()));
              for (size_t i = 0; i < raw.size(); ++i) {
                  double n = 0.0;
                  for (int d = 0; d < raw.dimension(); ++d) n += std::norm(raw.coord(d)[i]);
                  n = std::sqrt(n);
                  if (!(n > 0.0) || !std::isfinite(n))
                      throw Error(ErrorKind::ValidationError,
                                  "direction net has a zero or non-finite sample",
                                  static_cast<long>(i));
                  for (int d = 0; d < raw.dimension(); ++d)
                      cs[static_cast<size_t>(d)].push_back(raw.coord(d)[i].real() / n);
              }
              std::vector<ScalarNet> coords;
              for (auto& c : cs) coords.emplace_back(raw.grid(), std::move(c));
              return VectorNet(std::move(coords));
          }(),
          std::move(name), true) {}

GeneralizedDirection GeneralizedDirection::constant(const GridPtr& grid, Vec2 xi, int dim,
                                                    std::string name) {
    return GeneralizedDirection(VectorNet::map(grid, dim, [xi](double) { return xi; }),
                                std::move(name));
}

// ---- pointwise operations -------------------------------------------------

ScalarNet eval_at_point(const RepFamily& u, const GeneralizedPoint& x0) {
    if (u.dimension() != x0.dimension())
        throw Error(ErrorKind::DimensionMismatch, "point dimension differs from the family");
    const GridPtr& grid = x0.net().grid();
    std::vector<cxd> s;
    s.reserve(grid->size());
    for (size_t i = 0; i < grid->size(); ++i) {
        try {
            s.push_back(u.value((*grid)[i], x0.net().at(i)));
        } catch (const Error& e) {
            throw Error(ErrorKind::OutOfDomain,
                        std::string("evaluation failed at grid index ") + std::to_string(i) + ": " +
                            e.what(),
                        static_cast<long>(i));
        }
    }
    return ScalarNet(grid, std::move(s));
}

std::vector<MultiIndex> multi_indices(int dim, int a_max) {
    std::vector<MultiIndex> out;
    if (dim == 1) {
        for (int a = 0; a <= a_max; ++a) out.push_back({a, 0});
    } else {
        for (int total = 0; total <= a_max; ++total)
            for (int j = 0; j <= total; ++j) out.push_back({total - j, j});
    }
    return out;
}

namespace {

constexpr int kBallSamplesPerAxis = 64;
constexpr int kSupportSamplesPerAxis = 16;

/// visit sample points of the closed ball |x - c| <= r: center, boundary
/// extremes, uniform fill, plus a refinement inside ball ∩ support (narrow
/// supports would otherwise slip between uniform samples)
template <class F>
void for_ball_samples(int dim, Vec2 c, double r, const std::optional<Box>& support, F&& visit) {
    visit(c);
    if (r <= 0.0) return;
    auto in_ball = [&](Vec2 p) {
        double dx = p[0] - c[0], dy = dim == 2 ? p[1] - c[1] : 0.0;
        return dx * dx + dy * dy <= r * r * (1.0 + 1e-12);
    };
    if (dim == 1) {
        visit(Vec2{c[0] - r, 0.0});
        visit(Vec2{c[0] + r, 0.0});
        for (int i = 0; i < kBallSamplesPerAxis; ++i) {
            double t = -1.0 + 2.0 * (i + 0.5) / kBallSamplesPerAxis;
            visit(Vec2{c[0] + t * r, 0.0});
        }
        if (support) {
            double lo = std::max(c[0] - r, support->lo[0]);
            double hi = std::min(c[0] + r, support->hi[0]);
            if (lo <= hi)
                for (int i = 0; i <= kSupportSamplesPerAxis; ++i)
                    visit(Vec2{lo + (hi - lo) * i / kSupportSamplesPerAxis, 0.0});
        }
        return;
    }
    for (int d = 0; d < 2; ++d)
        for (double s : {-1.0, 1.0}) {
            Vec2 p = c;
            p[static_cast<size_t>(d)] += s * r;
            visit(p);
        }
    for (int i = 0; i < kBallSamplesPerAxis; ++i)
        for (int j = 0; j < kBallSamplesPerAxis; ++j) {
            double tx = -1.0 + 2.0 * (i + 0.5) / kBallSamplesPerAxis;
            double ty = -1.0 + 2.0 * (j + 0.5) / kBallSamplesPerAxis;
            if (tx * tx + ty * ty > 1.0) continue;
            visit(Vec2{c[0] + tx * r, c[1] + ty * r});
        }
    if (support) {
        double lo0 = std::max(c[0] - r, support->lo[0]), hi0 = std::min(c[0] + r, support->hi[0]);
        double lo1 = std::max(c[1] - r, support->lo[1]), hi1 = std::min(c[1] + r, support->hi[1]);
        if (lo0 <= hi0 && lo1 <= hi1)
            for (int i = 0; i <= kSupportSamplesPerAxis; ++i)
                for (int j = 0; j <= kSupportSamplesPerAxis; ++j) {
                    Vec2 p{lo0 + (hi0 - lo0) * i / kSupportSamplesPerAxis,
                           lo1 + (hi1 - lo1) * j / kSupportSamplesPerAxis};
                    if (in_ball(p)) visit(p);
                }
    }
}

double fit_int_slope(const std::vector<int>& ys) {
    size_t n = ys.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double x = static_cast<double>(i), y = static_cast<double>(ys[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

LocalEqualityReport local_equality_test(const RepFamily& u, const RepFamily& v,
                                        const GeneralizedPoint& x0, int m_max) {
    if (u.dimension() != v.dimension())
        throw Error(ErrorKind::DimensionMismatch, "families have different dimensions");
    const GridPtr& grid = x0.net().grid();
    LocalEqualityReport rep;
    rep.equal = true;
    for (int m = 1; m <= m_max; ++m) {
        std::vector<cxd> sup(grid->size());
        for (size_t i = 0; i < grid->size(); ++i) {
            double eps = (*grid)[i];
            double r = std::pow(eps, 1.0 / m);
            Vec2 c = x0.net().at(i);
            double s = 0.0;
            auto probe = [&](Vec2 p) {
                s = std::max(s, std::abs(u.value(eps, p) - v.value(eps, p)));
            };
            for_ball_samples(u.dimension(), c, r, u.support_box(eps), probe);
            if (auto vb = v.support_box(eps))
                for_ball_samples(u.dimension(), c, r, vb, probe);
        }
        ScalarNet net(grid, std::move(sup));
        PerOrderRow row;
        row.m = m;
        row.verdict = is_negligible(net, m_max);
        row.pass = row.verdict.kind == ScaleKind::Negligible && row.verdict.order >= m;
        row.sup_first = std::abs(net[0]);
        row.sup_last = std::abs(net[net.size() - 1]);
        rep.rows.push_back(row);
        if (!row.pass) rep.equal = false;
    }
    return rep;
}

namespace {

DerivativeBoundReport derivative_bound_impl(const RepFamily& u, const GeneralizedPoint& x0, int n_max,
                                            int m_max, int a_max, Quantifier q, bool pointwise,
                                            const ClassifyParams& params) {
    if (a_max > u.max_derivative_order())
        throw Error(ErrorKind::OutOfDomain, "a_max exceeds the family's derivative range");
    const GridPtr& grid = x0.net().grid();
    auto alphas = multi_indices(u.dimension(), a_max);
    int orders = pointwise ? 1 : m_max;

    DerivativeBoundReport rep;
    rep.n_by_alpha_order.assign(static_cast<size_t>(a_max) + 1, 0);
    rep.n_by_m.assign(static_cast<size_t>(orders), 0);
    int global_n = 0;

    for (int m = 1; m <= orders; ++m) {
        std::vector<std::vector<cxd>> sup(alphas.size(), std::vector<cxd>(grid->size()));
        for (size_t i = 0; i < grid->size(); ++i) {
            double eps = (*grid)[i];
            double r = pointwise ? 0.0 : std::pow(eps, 1.0 / m);
            Vec2 c = x0.net().at(i);
            std::vector<double> mx(alphas.size(), 0.0);
            for_ball_samples(u.dimension(), c, r, u.support_box(eps), [&](Vec2 p) {
                if (u.dimension() == 1) {
                    CTaylor j = u.jet1(eps, p[0]);
                    for (size_t a = 0; a < alphas.size(); ++a)
                        mx[a] = std::max(mx[a], std::abs(j.derivative(alphas[a][0])));
                } else {
                    CJet2 j = u.jet2(eps, p);
                    for (size_t a = 0; a < alphas.size(); ++a)
                        mx[a] = std::max(mx[a], std::abs(j.derivative(alphas[a][0], alphas[a][1])));
                }
            });
            for (size_t a = 0; a < alphas.size(); ++a) sup[a][i] = mx[a];
        }
        for (size_t a = 0; a < alphas.size(); ++a) {
            ScaleVerdict v = is_moderate(ScalarNet(grid, std::move(sup[a])), n_max, params);
            int order_a = alphas[a][0] + alphas[a][1];
            if (v.kind != ScaleKind::Moderate) {
                rep.all_moderate = false;
                rep.n_by_alpha_order[static_cast<size_t>(order_a)] = -1;
                rep.n_by_m[static_cast<size_t>(m - 1)] = -1;
                continue;
            }
            auto bump = [&](int& slot) {
                if (slot >= 0) slot = std::max(slot, v.order);
            };
            bump(rep.n_by_alpha_order[static_cast<size_t>(order_a)]);
            bump(rep.n_by_m[static_cast<size_t>(m - 1)]);
            global_n = std::max(global_n, v.order);
        }
    }

    bool alpha_ok = true, m_ok = true;
    {
        std::vector<int> ys;
        for (int v : rep.n_by_alpha_order) {
            if (v < 0) alpha_ok = false;
            ys.push_back(std::max(v, 0));
        }
        rep.alpha_growth = fit_int_slope(ys);
        if (rep.alpha_growth > 0.4) alpha_ok = false;
    }
    {
        std::vector<int> ys;
        for (int v : rep.n_by_m) {
            if (v < 0) m_ok = false;
            ys.push_back(std::max(v, 0));
        }
        rep.m_growth = fit_int_slope(ys);
        if (rep.m_growth > 0.4) m_ok = false;
    }

    if (q == Quantifier::Uniform) {
        rep.pass = rep.all_moderate && alpha_ok && m_ok && global_n <= n_max;
    } else {
        rep.pass = rep.all_moderate && alpha_ok;
        for (int v : rep.n_by_m)
            if (v < 0 || v > n_max) rep.pass = false;
    }
    if (rep.pass) rep.n_star = global_n;
    return rep;
}

} // namespace

DerivativeBoundReport derivative_bound_test(const RepFamily& u, const GeneralizedPoint& x0, int n_max,
                                            int m_max, int a_max, Quantifier quantifier) {
    return derivative_bound_impl(u, x0, n_max, m_max, a_max, quantifier, false, ClassifyParams{});
}

DerivativeBoundReport derivative_bound_test_params(const RepFamily& u, const GeneralizedPoint& x0,
                                                   int n_max, int m_max, int a_max, Quantifier q,
                                                   const ClassifyParams& params) {
    return derivative_bound_impl(u, x0, n_max, m_max, a_max, q, false, params);
}

PointwiseReport pointwise_ginf_test(const RepFamily& u, const GeneralizedPoint& x, int n_max,
                                    int a_max) {
    DerivativeBoundReport d =
        derivative_bound_impl(u, x, n_max, 1, a_max, Quantifier::Uniform, true, ClassifyParams{});
    PointwiseReport rep;
    rep.pass = d.pass;
    rep.n_star = d.n_star;
    rep.alpha_growth = d.alpha_growth;
    rep.all_moderate = d.all_moderate;
    rep.n_by_alpha_order = d.n_by_alpha_order;
    return rep;
}

} // namespace gwave
