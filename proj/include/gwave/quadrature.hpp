#ifndef GWAVE_QUADRATURE_HPP
#define GWAVE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace gwave {

/// Gauss-Legendre rule on [-1, 1]; nodes/weights cached per n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int n);

/// ∫_a^b f dx with an n-point rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

} // namespace gwave

#endif
