#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cuspresp/mesh.hpp"

namespace cuspresp {

/// Norm and quadrature parameters shared across modules.
struct NormConfig {
    double p = 1.5;            ///< Lebesgue exponent (> 1)
    int quadrature_order = 8;  ///< Gauss points per panel (>= 4)
    int subdivision_depth = 12;///< dyadic refinement levels next to the cusp

    void validate() const;
};

/// Nodes and weights of the order-point Gauss-Legendre rule on [-1,1].
/// Computed once per order by Newton iteration on the Legendre polynomial.
const std::vector<std::pair<double, double>>& gauss_legendre(int order);

/** Composite Gauss-Legendre scheme over a fixed breakpoint set.

    Panels adjacent to the singular point receive `subdivision_depth`
    geometrically shrinking sub-panels, so integrable power-law blow-ups at
    the cusp are resolved; no quadrature node ever coincides with the
    singular point itself. The point list is immutable after construction
    and summation order is fixed left to right, which keeps every integral
    byte-reproducible. */
class QuadratureScheme {
public:
    QuadratureScheme(std::vector<double> breakpoints, double singular_point,
                     const NormConfig& cfg);

    /// Scheme over the panels of a mesh (singular point = mesh cusp).
    static QuadratureScheme for_mesh(const GradedMesh& mesh, const NormConfig& cfg);

    /// Scheme over the union of two node sets plus mandatory extra points.
    static QuadratureScheme for_union(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      double singular_point, const NormConfig& cfg);

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return points_.size(); }

    double integrate(const std::function<double(double)>& f) const;

    /// Sum of w_i * values[i], left to right.
    double sum(const std::vector<double>& values) const;

private:
    std::vector<double> points_;
    std::vector<double> weights_;
};

}  // namespace cuspresp
