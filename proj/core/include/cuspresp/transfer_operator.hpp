#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <memory>
#include <vector>

#include "cuspresp/map_family.hpp"
#include "cuspresp/norms.hpp"
#include "cuspresp/spline.hpp"

namespace cuspresp {

/// Both preimages of one point x in [0, peak); beyond_peak marks points in
/// (peak, 1] (and the peak itself), where every operator image vanishes.
struct PreimagePair {
    Preimage left;
    Preimage right;
    bool beyond_peak;
};

/// Preimage pairs for an arbitrary point set, in point order.
std::vector<PreimagePair> preimage_table(const MapModel& model,
                                         const std::vector<double>& points);

/** Bundles a map model, a graded mesh and the norm configuration, plus the
    preimage tables for the mesh nodes and for the quadrature points of the
    mesh scheme. Tables are built once at construction; all operator
    applications afterwards are table lookups plus spline evaluations, so
    repeated application (power iteration, Neumann series) is cheap. */
class OperatorContext {
public:
    OperatorContext(std::shared_ptr<const MapModel> model,
                    std::shared_ptr<const GradedMesh> mesh, NormConfig cfg);

    const MapModel& model() const { return *model_; }
    const std::shared_ptr<const MapModel>& model_ptr() const { return model_; }
    const GradedMesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const GradedMesh>& mesh_ptr() const { return mesh_; }
    const NormConfig& cfg() const { return cfg_; }
    const QuadratureScheme& scheme() const { return scheme_; }
    const std::vector<PreimagePair>& node_table() const { return node_table_; }
    const std::vector<PreimagePair>& quad_table() const { return quad_table_; }

private:
    std::shared_ptr<const MapModel> model_;
    std::shared_ptr<const GradedMesh> mesh_;
    NormConfig cfg_;
    QuadratureScheme scheme_;
    std::vector<PreimagePair> node_table_;
    std::vector<PreimagePair> quad_table_;
};

/// P f and its first/second derivative sampled at the points of a table.
/// Orders above `order` are left empty.
struct OperatorImage {
    std::vector<double> value;
    std::vector<double> first;
    std::vector<double> second;
};

/// Evaluates (P f)^(i), i <= order, at every table point. order 2 uses the
/// chain-rule decomposition of the second derivative, with coefficient
/// functions formed from the model derivatives at each preimage.
OperatorImage apply_table(const MapModel& model, const std::vector<PreimagePair>& table,
                          const SplineFunction& f, int order);

/// P applied to a raw evaluator (values only).
std::vector<double> apply_evaluator(const std::vector<PreimagePair>& table,
                                    const std::function<double(double)>& f);

/// One-off pointwise application (no table); order as in apply_table.
double apply_point(const MapModel& model, const SplineFunction& f, double x, int order);

/// P f as a C1 spline on the context mesh: nodal values and slopes are the
/// exact pointwise image and its derivative; identically 0 on [peak, 1].
SplineFunction apply(const OperatorContext& ctx, const SplineFunction& f);

/// (P f)' as a C1 spline (values = image slope, slopes = image curvature).
SplineFunction apply_derivative(const OperatorContext& ctx, const SplineFunction& f);

/// (P f)'' as a C2 interpolant of its nodal values (f must be C1 or better).
SplineFunction apply_second(const OperatorContext& ctx, const SplineFunction& f);

/// Transfer operator of the linear squeeze x -> (1-eps) x: exact panel-wise
/// rescaling-with-cutoff (1-eps)^-1 g(x/(1-eps)) on [0,1-eps], 0 beyond.
SplineFunction apply_squeeze(const SplineFunction& g, double eps);

/** Ulam discretization: column-stochastic matrix on the mesh panels with
    entry(i -> j) = m(A_i intersect T^-1 A_j) / m(A_i), assembled exactly
    from branch inverses of the panel endpoints. */
struct UlamOperator {
    Eigen::SparseMatrix<double> matrix;  ///< column i = mass leaving cell i
    std::shared_ptr<const GradedMesh> mesh;

    void to_triplet_csv(std::ostream& os) const;
};

UlamOperator ulam_matrix(const OperatorContext& ctx);

/// Lower estimate of sup over the W^{1,p} unit ball of the L^{2p} distance
/// between the two transfer operators, by maximizing over a seeded corpus.
double operator_gap_norm(const OperatorContext& ctx0, const OperatorContext& ctx_eps,
                         int trial_count, unsigned seed);

/// Measured operator-level constants used by the second-order inequality
/// audit. lp_bound = (sup P1)^(1-1/p) dominates ||P||_{L^p -> L^p}.
struct OperatorConstants {
    double sup_unit_image;
    double lp_bound;
    double k1_sup;   ///< sup |3 T'' / (T')^3|
    double k2_norm;  ///< || P |T'''/(T')^3 - 3 (T'')^2/(T')^4| ||_p
};

OperatorConstants operator_constants(const OperatorContext& ctx);

/// Writes an operator application trace (node, value) for fixtures.
void trace_csv(const OperatorContext& ctx, const SplineFunction& image, std::ostream& os);

}  // namespace cuspresp
