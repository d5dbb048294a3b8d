#ifndef GWAVE_NETCALC_HPP
#define GWAVE_NETCALC_HPP

#include "gwave/errors.hpp"
#include "gwave/taylor.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace gwave {

/// Strictly decreasing epsilon values in (0,1); the discretized parameter of
/// every representative net. Shared immutably between nets.
class EpsilonGrid {
public:
    explicit EpsilonGrid(std::vector<double> values);
    static std::shared_ptr<const EpsilonGrid> geometric(int k_min = 6, int k_max = 20, double base = 2.0);
    /// derived sub-grid (scan tails, truncations); skips the >=8 length rule
    static std::shared_ptr<const EpsilonGrid> subgrid(std::vector<double> values);

    size_t size() const { return values_.size(); }
    double operator[](size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    /// sub-grid with eps >= floor (same order); empty result is an error
    std::shared_ptr<const EpsilonGrid> truncated(double eps_floor) const;

    friend bool operator==(const EpsilonGrid& a, const EpsilonGrid& b) { return a.values_ == b.values_; }

protected:
    struct SubgridTag {};
    EpsilonGrid(std::vector<double> values, SubgridTag) : values_(std::move(values)) {}

private:
    std::vector<double> values_;
};

using GridPtr = std::shared_ptr<const EpsilonGrid>;

bool same_grid(const GridPtr& a, const GridPtr& b);
void require_same_grid(const GridPtr& a, const GridPtr& b);

/// One complex sample per grid epsilon.
class ScalarNet {
public:
    ScalarNet(GridPtr grid, std::vector<cxd> samples);
    static ScalarNet map(const GridPtr& grid, const std::function<cxd(double)>& f);

    const GridPtr& grid() const { return grid_; }
    size_t size() const { return samples_.size(); }
    cxd operator[](size_t i) const { return samples_[i]; }
    const std::vector<cxd>& samples() const { return samples_; }

    ScalarNet abs() const;
    ScalarNet pow(double p) const;  // |.|^p of the modulus for fractional p

    friend ScalarNet operator+(const ScalarNet& a, const ScalarNet& b);
    friend ScalarNet operator-(const ScalarNet& a, const ScalarNet& b);
    friend ScalarNet operator*(const ScalarNet& a, const ScalarNet& b);
    friend ScalarNet operator/(const ScalarNet& a, const ScalarNet& b);

private:
    GridPtr grid_;
    std::vector<cxd> samples_;
};

class VectorNet {
public:
    explicit VectorNet(std::vector<ScalarNet> coords);
    static VectorNet map(const GridPtr& grid, int dim,
                         const std::function<std::array<double, 2>(double)>& f);

    int dimension() const { return static_cast<int>(coords_.size()); }
    const GridPtr& grid() const { return coords_.front().grid(); }
    const ScalarNet& coord(int i) const { return coords_[static_cast<size_t>(i)]; }
    size_t size() const { return coords_.front().size(); }

    /// per-index Euclidean coordinates (real parts)
    std::array<double, 2> at(size_t i) const;
    ScalarNet norm() const;

    friend VectorNet operator-(const VectorNet& a, const VectorNet& b);

private:
    std::vector<ScalarNet> coords_;
};

enum class ScaleKind {
    FastScale,
    SlowScale,
    FastInfinitesimal,
    SlowInfinitesimal,
    Negligible,
    Moderate,
    Indeterminate,
};

const char* scale_kind_name(ScaleKind k);

struct ScaleVerdict {
    ScaleKind kind = ScaleKind::Indeterminate;
    int order = 0;           // Negligible(maxOrderVerified) / Moderate(N)
    double fit_exponent = 0; // slope a in |x_eps| ~ eps^{-a}
    double residual = 0;     // RMS of the log-log regression
};

struct ClassifyParams {
    double fast_threshold = 0.25;
    double residual_tol = 0.1;
    double tail_fraction = 0.5;
};

struct SlopeFit {
    double exponent = 0;  // a, with |x| ~ eps^{-a}
    double residual = 0;
    int points_used = 0;
};

/// Least-squares slope of log|x| against log(1/eps) over the tail.
/// Zero samples are excluded; fewer than 4 usable points -> AllZeroTail.
SlopeFit fit_scale_exponent(const ScalarNet& net, double tail_fraction = 0.5);

ScaleVerdict classify_scale(const ScalarNet& net, const ClassifyParams& params = {});
ScaleVerdict is_negligible(const ScalarNet& net, int m_max = 6, const ClassifyParams& params = {});
ScaleVerdict is_moderate(const ScalarNet& net, int n_max = 10, const ClassifyParams& params = {});
ScaleVerdict relate_points(const VectorNet& x, const VectorNet& y, const ClassifyParams& params = {});

/// Largest order m <= m_max certified negligible, or 0.
int negligible_order(const ScalarNet& net, int m_max, const ClassifyParams& params = {});

} // namespace gwave

#endif
