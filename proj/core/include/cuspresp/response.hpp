#pragma once

#include <memory>
#include <vector>

#include "cuspresp/spectral.hpp"

namespace cuspresp {

/** Perturbation coefficients of the response kernel,

        A = -(d_eps T) / T',
        B = (d_eps T) T'' / (T')^2 - (d_eps T') / T',

    formed from the model's eps-derivatives; both are singular at the cusp
    and evaluated only away from it (the operator weight tames the blow-up
    at the preimages). */
struct ResponseCoefficients {
    std::shared_ptr<const MapModel> model;

    double A(double x) const;
    double B(double x) const;
};

ResponseCoefficients coefficients(std::shared_ptr<const MapModel> model);

/// Response kernel by the operator route: q = P[A h0' + B h0] pointwise at
/// the mesh nodes (zero at and beyond the peak), reinterpolated as a C2
/// spline. h0 must be at least C1.
SplineFunction kernel_q(const OperatorContext& ctx0, const SplineFunction& h0,
                        const ResponseCoefficients& coeff);

/// Response kernel by the squeeze-family route: q = h0 + x h0', exact
/// panel-wise (valid because P h0 = h0 for the invariant density).
SplineFunction kernel_q_family(const SplineFunction& h0);

/// Predicted derivative of the invariant density: u = (I - P)^(-1) q via
/// the Neumann series; the result is mean-zero.
SplineFunction predicted_derivative(const OperatorContext& ctx0, const SplineFunction& q,
                                    double tol, int max_terms = 10000);

struct SweepEntry {
    double eps;
    double h_residual;        ///< ||P h_eps - h_eps||_p
    double fd_error_lp;       ///< ||(h_eps - h0)/eps - u||_p
    double kernel_route_gap;  ///< ||q_theorem - q_family||_p (eps-independent)
    double stat_distance;     ///< ||h_eps - h0||_p
    int density_iterations;
    bool converged;
};

struct ResponseReport {
    SplineFunction h0;
    SplineFunction q_theorem;
    SplineFunction q_family;
    SplineFunction u;
    double route_gap;
    std::vector<SweepEntry> sweep;
    double fitted_rate;  ///< log-log slope over the three smallest converged eps
    bool all_converged;
};

struct ResponseSettings {
    int k = 4;
    double p = 1.5;
    std::vector<double> eps_list;  ///< strictly decreasing, inside (0, 1/10)
    int mesh_panels = 4096;
    double grading = 2.0;
    int quadrature_order = 8;
    int subdivision_depth = 12;
    double tol_density = 1e-9;
    double tol_neumann = 1e-10;
    int max_iter = 500;
};

/// Full first-order response validation: base density, both kernel routes,
/// the predicted derivative, and finite-difference comparisons per eps.
ResponseReport response_sweep(const ResponseSettings& settings);

/// Least-squares slope of log(e) against log(eps).
double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& err);

}  // namespace cuspresp
