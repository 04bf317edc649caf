#pragma once

#include <functional>

#include "cuspresp/quadrature.hpp"
#include "cuspresp/spline.hpp"

namespace cuspresp {

/// (sum w_i |values_i|^exponent)^(1/exponent); aborts on non-finite samples.
double lp_norm_values(const QuadratureScheme& scheme, const std::vector<double>& values,
                      double exponent);

/// L^exponent norm of a callable over a prebuilt scheme.
double lp_norm(const std::function<double(double)>& f, const QuadratureScheme& scheme,
               double exponent);

/// L^exponent norm of a spline; the scheme splits at the mesh cusp and peak.
double lp_norm(const SplineFunction& f, const NormConfig& cfg, double exponent);

/// (sum_{i<=order} ||f^(i)||_p^p)^(1/p) with p taken from cfg.
/// order 2 requires at least a C1 spline.
double sobolev_norm(const SplineFunction& f, const NormConfig& cfg, int order);

/// Sobolev norm of (value, derivative[, second]) callables over a scheme.
double sobolev_norm(const std::vector<std::function<double(double)>>& derivatives,
                    const QuadratureScheme& scheme, double p);

/// Combines per-derivative-order L^p norms into the Sobolev norm.
double sobolev_combine(const std::vector<double>& lp_norms, double p);

}  // namespace cuspresp
