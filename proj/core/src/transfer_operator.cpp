#include "cuspresp/transfer_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "cuspresp/corpus.hpp"
#include "cuspresp/parallel.hpp"

namespace cuspresp {

namespace {

// Contribution of one preimage to (P f)(x) and its first two derivatives.
// All coefficient ratios are formed from the model derivatives at the
// preimage; a zero weight marks the cusp itself, where everything vanishes.
template <class FV, class FD, class FS>
inline void accumulate(const Preimage& pre, FV&& fval, FD&& fder, FS&& fsec, int order,
                       double& v0, double& v1, double& v2) {
    const double w = pre.inv_abs_d1;
    if (w == 0.0)
        return;
    const double fy = fval(pre.y);
    v0 += fy * w;
    if (order >= 1) {
        const double r1 = 1.0 / pre.d1;
        const double r2 = pre.d2 * r1 * r1;
        const double fdy = fder(pre.y);
        v1 += w * (fdy * r1 - fy * r2);
        if (order >= 2) {
            const double r3 = pre.d3 * r1 * r1 * r1;
            const double fsy = fsec(pre.y);
            v2 += w * (fsy * r1 * r1 - 3.0 * r2 * r1 * fdy - (r3 - 3.0 * r2 * r2) * fy);
        }
    }
}

}  // namespace

std::vector<PreimagePair> preimage_table(const MapModel& model,
                                         const std::vector<double>& points) {
    const double a = model.peak();
    std::vector<PreimagePair> table(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const double x = points[i];
        if (x >= a) {
            table[i].beyond_peak = true;
            return;
        }
        table[i].beyond_peak = false;
        table[i].left = model.preimage(Branch::left, x);
        table[i].right = model.preimage(Branch::right, x);
    });
    return table;
}

OperatorContext::OperatorContext(std::shared_ptr<const MapModel> model,
                                 std::shared_ptr<const GradedMesh> mesh, NormConfig cfg)
    : model_(std::move(model)),
      mesh_(std::move(mesh)),
      cfg_(cfg),
      scheme_(QuadratureScheme::for_mesh(*mesh_, cfg_)) {
    cfg_.validate();
    // P f vanishes on (peak, 1]; the mesh must carry the peak as a node so
    // images stay representable.
    if (mesh_->peak() != model_->peak())
        throw std::invalid_argument("OperatorContext: mesh peak differs from model peak");
    if (mesh_->cusp() != model_->cusp())
        throw std::invalid_argument("OperatorContext: mesh cusp differs from model cusp");
    node_table_ = preimage_table(*model_, mesh_->nodes());
    quad_table_ = preimage_table(*model_, scheme_.points());
}

OperatorImage apply_table(const MapModel& /*model*/, const std::vector<PreimagePair>& table,
                          const SplineFunction& f, int order) {
    OperatorImage img;
    img.value.assign(table.size(), 0.0);
    if (order >= 1)
        img.first.assign(table.size(), 0.0);
    if (order >= 2)
        img.second.assign(table.size(), 0.0);
    auto fv = [&f](double y) { return f.value(y); };
    auto fd = [&f](double y) { return f.derivative(y); };
    auto fs = [&f](double y) { return f.second_derivative(y); };
    parallel_for(table.size(), [&](std::size_t i) {
        const PreimagePair& pp = table[i];
        if (pp.beyond_peak)
            return;
        double v0 = 0.0, v1 = 0.0, v2 = 0.0;
        accumulate(pp.left, fv, fd, fs, order, v0, v1, v2);
        accumulate(pp.right, fv, fd, fs, order, v0, v1, v2);
        img.value[i] = v0;
        if (order >= 1)
            img.first[i] = v1;
        if (order >= 2)
            img.second[i] = v2;
    });
    return img;
}

std::vector<double> apply_evaluator(const std::vector<PreimagePair>& table,
                                    const std::function<double(double)>& f) {
    std::vector<double> out(table.size(), 0.0);
    parallel_for(table.size(), [&](std::size_t i) {
        const PreimagePair& pp = table[i];
        if (pp.beyond_peak)
            return;
        double v = 0.0;
        if (pp.left.inv_abs_d1 > 0.0)
            v += f(pp.left.y) * pp.left.inv_abs_d1;
        if (pp.right.inv_abs_d1 > 0.0)
            v += f(pp.right.y) * pp.right.inv_abs_d1;
        out[i] = v;
    });
    return out;
}

double apply_point(const MapModel& model, const SplineFunction& f, double x, int order) {
    if (x >= model.peak())
        return 0.0;
    double v0 = 0.0, v1 = 0.0, v2 = 0.0;
    auto fv = [&f](double y) { return f.value(y); };
    auto fd = [&f](double y) { return f.derivative(y); };
    auto fs = [&f](double y) { return f.second_derivative(y); };
    accumulate(model.preimage(Branch::left, x), fv, fd, fs, order, v0, v1, v2);
    accumulate(model.preimage(Branch::right, x), fv, fd, fs, order, v0, v1, v2);
    return order == 0 ? v0 : (order == 1 ? v1 : v2);
}

SplineFunction apply(const OperatorContext& ctx, const SplineFunction& f) {
    const OperatorImage img = apply_table(ctx.model(), ctx.node_table(), f, 1);
    return SplineFunction::hermite_c1(ctx.mesh_ptr(), img.value, img.first);
}

SplineFunction apply_derivative(const OperatorContext& ctx, const SplineFunction& f) {
    if (f.continuity() == Continuity::c0)
        throw std::invalid_argument("apply_derivative: f must be at least C1");
    const OperatorImage img = apply_table(ctx.model(), ctx.node_table(), f, 2);
    return SplineFunction::hermite_c1(ctx.mesh_ptr(), img.first, img.second);
}

SplineFunction apply_second(const OperatorContext& ctx, const SplineFunction& f) {
    if (f.continuity() == Continuity::c0)
        throw std::invalid_argument("apply_second: f must be at least C1");
    const OperatorImage img = apply_table(ctx.model(), ctx.node_table(), f, 2);
    return SplineFunction::interpolate_c2(ctx.mesh_ptr(), img.second);
}

SplineFunction apply_squeeze(const SplineFunction& g, double eps) {
    if (!(eps >= 0.0 && eps < 0.1))
        throw std::invalid_argument("apply_squeeze: eps must lie in [0, 1/10)");
    if (eps == 0.0)
        return g;
    const double s = 1.0 - eps;
    const auto& old_nodes = g.mesh().nodes();
    std::vector<double> nodes(old_nodes.size());
    for (std::size_t i = 0; i < old_nodes.size(); ++i)
        nodes[i] = s * old_nodes[i];
    nodes.push_back(1.0);
    auto mesh = std::make_shared<GradedMesh>(std::move(nodes), g.mesh().grading_exponent(),
                                             s * g.mesh().cusp(), s * g.mesh().peak());

    std::vector<SplineFunction::Panel> panels(g.panels().size() + 1);
    for (std::size_t i = 0; i < g.panels().size(); ++i) {
        const auto& p = g.panels()[i];
        panels[i].x0 = mesh->nodes()[i];
        panels[i].x1 = mesh->nodes()[i + 1];
        panels[i].c0 = p.c0 / s;
        panels[i].c1 = p.c1 / (s * s);
        panels[i].c2 = p.c2 / (s * s * s);
        panels[i].c3 = p.c3 / (s * s * s * s);
    }
    panels.back() = {s, 1.0, 0.0, 0.0, 0.0, 0.0};
    return SplineFunction::assemble(std::move(mesh), std::move(panels), Continuity::c0);
}

UlamOperator ulam_matrix(const OperatorContext& ctx) {
    const auto& nodes = ctx.mesh().nodes();
    const std::size_t n = ctx.mesh().panel_count();
    if (n < 32)
        throw std::invalid_argument("ulam_matrix: need at least 32 panels");
    const MapModel& m = ctx.model();
    const double a = m.peak();

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(8 * n);
    for (Branch b : {Branch::left, Branch::right}) {
        // y-boundaries of T^-1[x_j] along this branch; increasing in j for
        // the left branch, decreasing for the right one.
        std::vector<double> y(nodes.size());
        for (std::size_t j = 0; j < nodes.size(); ++j)
            y[j] = m.branch_inverse(b, std::min(nodes[j], a));
        for (std::size_t j = 0; j < n; ++j) {
            double lo = std::min(y[j], y[j + 1]);
            double hi = std::max(y[j], y[j + 1]);
            if (hi - lo <= 0.0)
                continue;
            // walk the source cells overlapping [lo, hi]
            std::size_t i = ctx.mesh().find_panel(lo);
            for (; i < n && nodes[i] < hi; ++i) {
                const double ov =
                    std::min(hi, nodes[i + 1]) - std::max(lo, nodes[i]);
                if (ov > 0.0)
                    trips.emplace_back(static_cast<int>(j), static_cast<int>(i),
                                       ov / (nodes[i + 1] - nodes[i]));
            }
        }
    }
    UlamOperator op;
    op.mesh = ctx.mesh_ptr();
    op.matrix.resize(static_cast<int>(n), static_cast<int>(n));
    op.matrix.setFromTriplets(trips.begin(), trips.end());
    return op;
}

void UlamOperator::to_triplet_csv(std::ostream& os) const {
    os << "row,col,value\n";
    char buf[128];
    for (int k = 0; k < matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it) {
            std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g\n", static_cast<long>(it.row()),
                          static_cast<long>(it.col()), it.value());
            os << buf;
        }
}

double operator_gap_norm(const OperatorContext& ctx0, const OperatorContext& ctx_eps,
                         int trial_count, unsigned seed) {
    if (trial_count < 50)
        throw std::invalid_argument("operator_gap_norm: need at least 50 trials");
    const NormConfig& cfg = ctx0.cfg();
    const auto scheme = QuadratureScheme::for_union(
        ctx0.mesh().nodes(), ctx_eps.mesh().nodes(), ctx0.mesh().cusp(), cfg);
    const auto t0 = preimage_table(ctx0.model(), scheme.points());
    const auto te = preimage_table(ctx_eps.model(), scheme.points());

    CorpusOptions opts;
    opts.count = trial_count;
    opts.seed = seed;
    opts.normalize = CorpusNorm::w1p;
    opts.p = cfg.p;
    const auto corpus = make_corpus(ctx0.mesh_ptr(), opts);

    double best = 0.0;
    std::vector<double> diff(scheme.size());
    for (const SplineFunction& f : corpus) {
        const OperatorImage i0 = apply_table(ctx0.model(), t0, f, 0);
        const OperatorImage ie = apply_table(ctx_eps.model(), te, f, 0);
        for (std::size_t i = 0; i < diff.size(); ++i)
            diff[i] = i0.value[i] - ie.value[i];
        best = std::max(best, lp_norm_values(scheme, diff, 2.0 * cfg.p));
    }
    return best;
}

OperatorConstants operator_constants(const OperatorContext& ctx) {
    const MapModel& m = ctx.model();
    const NormConfig& cfg = ctx.cfg();
    OperatorConstants out{};

    // sup of P1 over the quadrature points plus the left edge.
    double sup1 = 0.0;
    for (const PreimagePair& pp : ctx.quad_table())
        if (!pp.beyond_peak)
            sup1 = std::max(sup1, pp.left.inv_abs_d1 + pp.right.inv_abs_d1);
    {
        const auto p0 = preimage_table(m, {0.0});
        sup1 = std::max(sup1, p0[0].left.inv_abs_d1 + p0[0].right.inv_abs_d1);
    }
    out.sup_unit_image = sup1;
    out.lp_bound = std::pow(sup1, 1.0 - 1.0 / cfg.p);

    // sup |3 T''/(T')^3| on a uniform-plus-dyadic grid (the coefficient
    // vanishes at the cusp, so the sup sits in the interior).
    double k1 = 0.0;
    const double c = m.cusp();
    auto coeff1 = [&](double x) {
        const double d1 = m.derivative(x, 1);
        return std::fabs(3.0 * m.derivative(x, 2) / (d1 * d1 * d1));
    };
    for (int i = 0; i < 8192; ++i)
        k1 = std::max(k1, coeff1((i + 0.5) / 8192.0));
    for (int j = 2; j <= 40; ++j) {
        k1 = std::max(k1, coeff1(c - std::ldexp(1.0, -j)));
        k1 = std::max(k1, coeff1(c + std::ldexp(1.0, -j)));
    }
    out.k1_sup = k1;

    // || P |T'''/(T')^3 - 3 (T'')^2/(T')^4| ||_p; the image of the absolute
    // coefficient is bounded even though the coefficient itself is not
    // integrable to the 2p-th power near the cusp.
    std::vector<double> vals(ctx.quad_table().size(), 0.0);
    const auto& table = ctx.quad_table();
    parallel_for(table.size(), [&](std::size_t i) {
        if (table[i].beyond_peak)
            return;
        double v = 0.0;
        for (const Preimage* pre : {&table[i].left, &table[i].right}) {
            if (pre->inv_abs_d1 == 0.0)
                continue;
            const double r1 = 1.0 / pre->d1;
            const double r2 = pre->d2 * r1 * r1;
            const double r3 = pre->d3 * r1 * r1 * r1;
            v += std::fabs(r3 - 3.0 * r2 * r2) * pre->inv_abs_d1;
        }
        vals[i] = v;
    });
    out.k2_norm = lp_norm_values(ctx.scheme(), vals, cfg.p);
    return out;
}

void trace_csv(const OperatorContext& ctx, const SplineFunction& image, std::ostream& os) {
    os << "node,value\n";
    char buf[96];
    const auto& nodes = ctx.mesh().nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", nodes[i], image.value(nodes[i]));
        os << buf;
    }
}

}  // namespace cuspresp
