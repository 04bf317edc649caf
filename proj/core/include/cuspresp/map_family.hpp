#pragma once

#include <memory>
#include <vector>

#include "cuspresp/quadrature.hpp"

namespace cuspresp {

enum class Branch { left, right };

/// One preimage y of a point x under a branch, together with the map
/// derivatives at y. inv_abs_d1 = 1/|T'(y)| is supplied separately because
/// concrete models can evaluate it without cancellation even where T' blows
/// up at the cusp.
struct Preimage {
    double y;
    double d1;           ///< T'(y), signed
    double d2;           ///< T''(y)
    double d3;           ///< T'''(y)
    double inv_abs_d1;   ///< 1/|T'(y)|; exactly 0 when y is the cusp itself
};

/** Two-branch interval map with a cusp: strictly monotone branches on
    [0,c) and (c,1], both endpoints mapped to 0, one-sided limits at the
    cusp equal to the peak value a, and |T'| -> infinity at the cusp with a
    power-law exponent beta in (-1,-1/2).

    Models are immutable after construction and safe to share across
    threads. */
class MapModel {
public:
    virtual ~MapModel() = default;

    virtual double cusp() const = 0;
    virtual double peak() const = 0;   ///< common one-sided limit a at the cusp
    virtual double beta() const = 0;   ///< singularity exponent of T'
    virtual double eps() const = 0;    ///< perturbation parameter

    /// Map value; x = cusp returns the peak (the common one-sided limit).
    /// Throws std::domain_error outside [0,1].
    double evaluate(double x) const;

    /// T^(order)(x) for order 1..3. Throws std::domain_error at the cusp
    /// (the derivative is singular there) and outside [0,1].
    virtual double derivative(double x, int order) const = 0;

    /// d/d_eps of the map value at fixed x.
    virtual double eps_derivative_value(double x) const = 0;
    /// d/d_eps of T'(x); singular at the cusp like T' itself.
    virtual double eps_derivative_slope(double x) const = 0;

    /// Sign of T' on the branch (+1 left, -1 right for tent-like maps).
    virtual double branch_sign(Branch b) const = 0;

    /// Solves T|_branch(y) = target. Bracketed bisection to width 1e-13
    /// followed by two guarded Newton polish steps; concrete families may
    /// override with an exact substitution. Throws std::out_of_range when
    /// target lies outside [0, peak].
    virtual double branch_inverse(Branch b, double target) const;

    /// Preimage of x under the branch plus derivatives at that point.
    virtual Preimage preimage(Branch b, double x) const;

protected:
    /// Raw branch formula, defined on [0,1] away from the cusp.
    virtual double eval_raw(double x) const = 0;
};

/** The cusp tent family

        T_eps(x) = (1-eps) * ( (3/4) * 2x    + (1 - (1-2x)^(1/k)) / 4 ),  x < 1/2,
        T_eps(x) = (1-eps) * ( (3/4) * (2-2x) + (1 - (2x-1)^(1/k)) / 4 ),  x > 1/2,

    with integer root order k >= 3 and eps in [0, 1/10). The cusp sits at
    c = 1/2, the peak value is a = 1-eps, and beta = (1-k)/k. The whole
    family is the eps = 0 map post-composed with the linear squeeze
    x -> (1-eps) x, which is what makes its response analysis explicit.

    The Lebesgue exponent p used by the surrounding norms is stored here so
    that the admissibility constraint k > 2p is checked once, up front. */
class CuspTentFamily final : public MapModel {
public:
    CuspTentFamily(int k, double eps, double p);

    int k() const { return k_; }
    double p() const { return p_; }
    double cusp() const override { return 0.5; }
    double peak() const override { return 1.0 - eps_; }
    double beta() const override { return beta_; }
    double eps() const override { return eps_; }

    double derivative(double x, int order) const override;
    double eps_derivative_value(double x) const override;
    double eps_derivative_slope(double x) const override;
    double branch_sign(Branch b) const override;
    double branch_inverse(Branch b, double target) const override;
    Preimage preimage(Branch b, double x) const override;

protected:
    double eval_raw(double x) const override;

private:
    /// Solves 3 v^k + v = rhs for v in [0,1] (the substituted inverse).
    double solve_v(double rhs) const;
    Preimage preimage_from_v(Branch b, double v) const;

    int k_;
    double eps_;
    double p_;
    double beta_;
};

std::shared_ptr<const MapModel> make_cusp_tent_family(int k, double eps, double p);

/** Measured constants and per-assumption verdicts for a map model.

    All quantities are sampled or extrapolated numerically; failures are
    verdicts, never exceptions. The mixing verdict is heuristic (covering
    sweep of dyadic intervals, plus the Ulam second eigenvalue when the
    caller supplies one). */
struct AssumptionAudit {
    double theta_hat = 0.0;    ///< measured inf |T'|
    double lambda_hat = 0.0;   ///< 1/theta_hat
    double big_m_hat = 0.0;    ///< ||T''/(T')^2||_{2p}
    double sup_unit_image = 0.0;  ///< sup_x of sum over preimages of 1/|T'|
    double c1_left = 0.0, c1_right = 0.0;   ///< |T'| ~ C1 |x-c|^beta
    double c2_left = 0.0, c2_right = 0.0;   ///< |T''| ~ C2 |x-c|^(beta-1)
    double c3_left = 0.0, c3_right = 0.0;   ///< |T'''| ~ C3 |x-c|^(beta-2)
    double envelope_sup = 0.0;  ///< sup over i<=2 of |T^(i+1)|/|x-c|^(beta-i)
    double envelope_inf = 0.0;  ///< inf |T'|/|x-c|^beta
    double ulam_second_modulus = 0.0;  ///< NaN when not supplied by caller
    int cover_iterations = -1;  ///< sweeps needed to cover [0, a-1e-3]; -1 = failed

    bool monotone_branches = false;
    bool endpoint_anchors = false;
    bool smooth_away_from_cusp = false;
    bool uniform_expansion = false;
    bool mixing = false;
    bool slope_exponent = false;
    bool higher_exponents = false;
    bool derivative_envelope = false;

    bool all_pass() const;
};

/// Runs the full numerical audit. grid_size >= 1000 sample points per
/// branch; p is the Lebesgue exponent for the 2p-norm constant; pass the
/// Ulam second eigenvalue modulus when available (NaN otherwise, in which
/// case the mixing verdict rests on the covering sweep alone).
AssumptionAudit audit_assumptions(const MapModel& model, int grid_size, double p,
                                  double ulam_second_modulus);

/// Iterated Richardson extrapolation of a sequence r_j sampled along a
/// geometric approach; returns the estimated limit.
double richardson_limit(const std::vector<double>& r);

}  // namespace cuspresp
