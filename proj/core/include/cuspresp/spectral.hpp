#pragma once

#include <complex>
#include <vector>

#include "cuspresp/transfer_operator.hpp"

namespace cuspresp {

/// Invariant density of the analytic operator together with convergence
/// evidence. converged is false when max_iter ran out before the L^p
/// residual dropped below the requested tolerance.
struct InvariantDensity {
    SplineFunction h;
    double residual;  ///< ||P h - h||_{L^p} measured by quadrature
    int iterations;
    bool converged;
};

/// Power iteration h <- P h / mass(P h) from the given start until the L^p
/// residual falls below tol. The returned density has unit mass exactly.
InvariantDensity invariant_density_from(const OperatorContext& ctx, SplineFunction start,
                                        double tol, int max_iter);

/// Same, started from the constant density 1.
InvariantDensity invariant_density(const OperatorContext& ctx, double tol, int max_iter);

/// Leading Ulam spectrum data. resolvent_bound_proxy is filled by the
/// caller when measured; it defaults to 0.
struct SpectrumReport {
    std::complex<double> leading;
    double second_modulus;
    double gap;
    double resolvent_bound_proxy = 0.0;
    std::vector<std::complex<double>> eigenvalues;
};

/// Largest-modulus eigenvalues of the Ulam matrix via an Arnoldi sweep
/// (dense eigensolve of the projected Hessenberg matrix). count >= 2.
SpectrumReport ulam_spectrum(const UlamOperator& op, int count, int krylov_dim = 80);

/// Fixed probability vector of the column-stochastic Ulam matrix (masses
/// per cell, summing to 1), by power iteration.
std::vector<double> ulam_fixed_masses(const UlamOperator& op, double tol = 1e-13,
                                      int max_iter = 20000);

/// L1 distance between a spline density and the piecewise-constant density
/// induced by per-cell masses.
double ulam_l1_distance(const UlamOperator& op, const std::vector<double>& masses,
                        const SplineFunction& h);

/// Truncated Neumann series u = sum_n P^n q on the mean-zero subspace;
/// stops when the W^{1,p} norm of the current term drops below tol.
/// Throws std::invalid_argument when q is not mean-zero (|integral| > 1e-8)
/// and ConvergenceError when the series fails to decay within max_terms.
SplineFunction resolvent_apply(const OperatorContext& ctx, const SplineFunction& q,
                               double tol, int max_terms = 10000,
                               int* terms_used = nullptr);

/// Mean-zero-constrained solve (I - M) x = rhs on Ulam cell masses, with a
/// Lagrange multiplier enforcing sum(x) = 0. Cross-check oracle for the
/// Neumann route.
std::vector<double> ulam_resolvent_masses(const UlamOperator& op,
                                          const std::vector<double>& rhs_masses);

/// Max over a seeded mean-zero corpus of ||(I-P)^-1 f||_{W^{1,p}} relative
/// to ||f||_{W^{1,p}}; empirical stand-in for the uniform resolvent bound.
double resolvent_bound_proxy(const OperatorContext& ctx, int corpus_size, unsigned seed,
                             double tol);

}  // namespace cuspresp
