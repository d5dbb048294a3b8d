#ifndef GWAVE_GENFUN_HPP
#define GWAVE_GENFUN_HPP

#include "gwave/bump.hpp"
#include "gwave/netcalc.hpp"
#include "gwave/netexpr.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace gwave {

using Vec2 = std::array<double, 2>;
using MultiIndex = std::array<int, 2>;

struct Box {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{0.0, 0.0};
};

enum class SupportKind { CompactBox, SchwartzDecay, Unbounded };

struct SupportSpec {
    SupportKind kind = SupportKind::Unbounded;
    Box hull;  // meaningful for CompactBox: contains supp(u_eps) for every grid eps
};

/// Mollifier / envelope shape. `mass_scale` detunes the unit-integral
/// normalization (values != 1 are rejected by mollified_distribution).
struct BumpSpec {
    BumpProfile::Kind profile = BumpProfile::Kind::Classic;
    double mass_scale = 1.0;
    Vec2 center{0.0, 0.0};  // envelope placement
    double radius = 1.0;    // envelope radius
};

enum class MollifiedKind { Delta, DiracDerivative, Heaviside };

/// A representative (u_eps)_eps: smooth in x for each eps, with analytic
/// derivative jets, an eps-wise support box, and an optional closed-form
/// Fourier oracle.
class RepFamily {
public:
    int dimension() const;
    const std::string& provenance() const;
    const SupportSpec& support() const;
    /// support box of the single slice u_eps (nullopt when unbounded)
    std::optional<Box> support_box(double eps) const;

    cxd value(double eps, Vec2 x) const;
    /// all x-derivatives at once; order 6 in 1D, total order 4 in 2D
    CTaylor jet1(double eps, double x1) const;
    CJet2 jet2(double eps, Vec2 x) const;
    cxd derivative(double eps, Vec2 x, MultiIndex alpha) const;
    int max_derivative_order() const;

    bool has_fourier_oracle() const;
    cxd fourier_oracle(double eps, Vec2 xi) const;

    const void* id() const;  // stable identity for caching

    struct Impl;
    explicit RepFamily(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
};

RepFamily embed_smooth(const ExprAst& f);
/// eps-independent radial bump (plateau by default): smooth compactly
/// supported multiplier families for cutoff-invariance checks
RepFamily bump_family(int dim, Vec2 center, double radius,
                      BumpProfile::Kind kind = BumpProfile::Kind::Plateau);
RepFamily mollified_distribution(MollifiedKind kind, const ExprAst& center, const BumpSpec& mollifier,
                                 const GridPtr& reference_grid);
RepFamily plane_wave(const ExprAst& amplitude, const ExprAst& frequency,
                     const std::vector<ExprAst>& direction, const BumpSpec& envelope);
RepFamily product(const RepFamily& u, const RepFamily& v);
RepFamily scale(const RepFamily& u, const ExprAst& c);
RepFamily translate(const RepFamily& u, const VectorNet& y);

class GeneralizedPoint {
public:
    explicit GeneralizedPoint(VectorNet net, std::string name = "");
    static GeneralizedPoint constant(const GridPtr& grid, Vec2 x, int dim, std::string name = "");

    const VectorNet& net() const { return net_; }
    const Box& bounding_box() const { return box_; }
    int dimension() const { return net_.dimension(); }
    const std::string& name() const { return name_; }

private:
    VectorNet net_;
    Box box_;
    std::string name_;
};

class GeneralizedDirection {
public:
    /// normalizes per eps; rejects zero vectors and non-finite samples
    explicit GeneralizedDirection(const VectorNet& raw, std::string name = "");
    static GeneralizedDirection constant(const GridPtr& grid, Vec2 xi, int dim, std::string name = "");

    const VectorNet& net() const { return net_; }
    int dimension() const { return net_.dimension(); }
    const std::string& name() const { return name_; }

private:
    explicit GeneralizedDirection(VectorNet net, std::string name, bool);
    VectorNet net_;
    std::string name_;
};

ScalarNet eval_at_point(const RepFamily& u, const GeneralizedPoint& x0);

struct PerOrderRow {
    int m = 0;
    bool pass = false;
    ScaleVerdict verdict;
    double sup_first = 0.0, sup_last = 0.0;
};

struct LocalEqualityReport {
    bool equal = false;
    std::vector<PerOrderRow> rows;
};

/// sup_{|x-x0_eps| <= eps^(1/m)} |u_eps - v_eps| <= eps^m for each m
LocalEqualityReport local_equality_test(const RepFamily& u, const RepFamily& v,
                                        const GeneralizedPoint& x0, int m_max = 6);

enum class Quantifier { Uniform, PerM };

struct DerivativeBoundReport {
    bool pass = false;
    int n_star = -1;                      // witness N when pass
    double alpha_growth = 0.0;            // fitted slope of N_req over |alpha|
    double m_growth = 0.0;                // fitted slope of N_req over m
    bool all_moderate = true;
    std::vector<int> n_by_alpha_order;    // max N_req at |alpha| = a (-1: unbounded)
    std::vector<int> n_by_m;              // max N_req at order m
};

DerivativeBoundReport derivative_bound_test(const RepFamily& u, const GeneralizedPoint& x0,
                                            int n_max = 10, int m_max = 6, int a_max = 4,
                                            Quantifier quantifier = Quantifier::Uniform);

struct PointwiseReport {
    bool pass = false;
    int n_star = -1;
    double alpha_growth = 0.0;
    bool all_moderate = true;
    std::vector<int> n_by_alpha_order;
};

DerivativeBoundReport derivative_bound_test_params(const RepFamily& u, const GeneralizedPoint& x0,
                                                   int n_max, int m_max, int a_max, Quantifier q,
                                                   const ClassifyParams& params);

/// ball radius 0: |∂^α u(x)| <= eps^{-N} with one N for all |alpha| <= a_max
PointwiseReport pointwise_ginf_test(const RepFamily& u, const GeneralizedPoint& x, int n_max = 10,
                                    int a_max = 4);

/// enumerate multi-indices with |alpha| <= a_max for the given dimension
std::vector<MultiIndex> multi_indices(int dim, int a_max);

} // namespace gwave

#endif
