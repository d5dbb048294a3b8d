#ifndef GWAVE_BUMP_HPP
#define GWAVE_BUMP_HPP

#include "gwave/taylor.hpp"

#include <vector>

namespace gwave {

/// Radial bump profiles on [0,1].
///
/// Plateau: 1 on [0,1/2], glue h(s)=g(1-s)/(g(s)+g(1-s)) with g(s)=e^{-1/s}
/// on the transition, 0 outside B(0,1). Used for every spectral window.
/// Classic: e^{-1/(1-t^2)}, the standard mollifier shape (non-flat at 0).
///
/// Fourier reference values are computed by Gauss-Legendre quadrature of the
/// radial transform, independent of the FFT pipeline, and serve as oracles.
class BumpProfile {
public:
    enum class Kind { Plateau, Classic };

    static const BumpProfile& plateau();
    static const BumpProfile& classic();

    Kind kind() const { return kind_; }

    /// profile value at radius t (0 for t >= 1)
    double value(double t) const;
    /// Taylor jet (order 7) of the radial profile at t >= 0
    RTaylor jet(double t) const;
    /// n-th radial derivative, n <= 7
    double derivative(int n, double t) const;

    /// ∫_{R^d} profile(|x|) dx, d = 1 or 2
    double mass(int d) const;

    /// radial Fourier transform \int profile(|x|) e^{-i xi.x} dx at |xi| = s
    /// (real, even; 0 beyond the tabulated range — callers band-limit)
    double fourier(int d, double s) const;
    /// monotone majorant of |fourier(d, .)| on [s, inf), tail-extrapolated
    double fourier_envelope(int d, double s) const;
    double fourier_table_max() const { return s_max_; }

    /// ∫_{-1}^{t} profile(|y|)/mass(1) dy  (unit-mass antiderivative, 1D)
    double antiderivative(double t) const;

private:
    explicit BumpProfile(Kind kind);
    void build_tables();

    Kind kind_;
    double mass1_ = 0.0, mass2_ = 0.0;
    double s_max_ = 160.0, ds_ = 1.0 / 32.0;
    std::vector<double> ft1_, ft2_;    // transform tables on s = i*ds
    std::vector<double> env1_, env2_;  // monotone envelopes
    double env_c1_ = 1.0, env_a1_ = 0.0, env_c2_ = 1.0, env_a2_ = 0.0;
    std::vector<double> anti_;  // antiderivative nodes on [-1,1]
    double anti_h_ = 0.0;
};

} // namespace gwave

#endif
