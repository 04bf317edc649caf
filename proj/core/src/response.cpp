#include "cuspresp/response.hpp"

#include <cmath>
#include <stdexcept>

namespace cuspresp {

double ResponseCoefficients::A(double x) const {
    return -model->eps_derivative_value(x) / model->derivative(x, 1);
}

double ResponseCoefficients::B(double x) const {
    const double d1 = model->derivative(x, 1);
    const double d2 = model->derivative(x, 2);
    return model->eps_derivative_value(x) * d2 / (d1 * d1) -
           model->eps_derivative_slope(x) / d1;
}

ResponseCoefficients coefficients(std::shared_ptr<const MapModel> model) {
    return ResponseCoefficients{std::move(model)};
}

SplineFunction kernel_q(const OperatorContext& ctx0, const SplineFunction& h0,
                        const ResponseCoefficients& coeff) {
    if (h0.continuity() == Continuity::c0)
        throw std::invalid_argument("kernel_q: h0 must be at least C1");
    auto integrand = [&](double y) {
        return coeff.A(y) * h0.derivative(y) + coeff.B(y) * h0.value(y);
    };
    const std::vector<double> values = apply_evaluator(ctx0.node_table(), integrand);
    return SplineFunction::interpolate_c2(ctx0.mesh_ptr(), values);
}

SplineFunction kernel_q_family(const SplineFunction& h0) {
    if (h0.continuity() == Continuity::c0)
        throw std::invalid_argument("kernel_q_family: h0 must be at least C1");
    return h0.one_plus_x_ddx();
}

SplineFunction predicted_derivative(const OperatorContext& ctx0, const SplineFunction& q,
                                    double tol, int max_terms) {
    return resolvent_apply(ctx0, q, tol, max_terms);
}

double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& err) {
    if (eps.size() != err.size() || eps.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double x = std::log(eps[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ResponseReport response_sweep(const ResponseSettings& s) {
    if (s.eps_list.empty())
        throw std::invalid_argument("response_sweep: eps_list is empty");
    for (std::size_t i = 0; i < s.eps_list.size(); ++i) {
        if (!(s.eps_list[i] > 0.0 && s.eps_list[i] < 0.1))
            throw std::invalid_argument("response_sweep: eps values must lie in (0, 1/10)");
        if (i > 0 && !(s.eps_list[i] < s.eps_list[i - 1]))
            throw std::invalid_argument("response_sweep: eps_list must be strictly decreasing");
    }

    NormConfig cfg;
    cfg.p = s.p;
    cfg.quadrature_order = s.quadrature_order;
    cfg.subdivision_depth = s.subdivision_depth;

    const auto model0 = make_cusp_tent_family(s.k, 0.0, s.p);
    const auto mesh0 = GradedMesh::graded(s.mesh_panels, s.grading, model0->cusp(),
                                          model0->peak());
    const OperatorContext ctx0(model0, mesh0, cfg);
    const InvariantDensity id0 = invariant_density(ctx0, s.tol_density, s.max_iter);

    const SplineFunction q_theorem = kernel_q(ctx0, id0.h, coefficients(model0));
    const SplineFunction q_family = kernel_q_family(id0.h);
    const double route_gap = lp_norm(q_theorem - q_family, cfg, s.p);
    const SplineFunction u = predicted_derivative(ctx0, q_family, s.tol_neumann);

    std::vector<SweepEntry> sweep;
    sweep.reserve(s.eps_list.size());
    bool all_ok = id0.converged;
    for (double eps : s.eps_list) {
        const auto model_e = make_cusp_tent_family(s.k, eps, s.p);
        const auto mesh_e = GradedMesh::graded(s.mesh_panels, s.grading, model_e->cusp(),
                                               model_e->peak());
        const OperatorContext ctx_e(model_e, mesh_e, cfg);
        const InvariantDensity id_e = invariant_density(ctx_e, s.tol_density, s.max_iter);

        const auto scheme = QuadratureScheme::for_union(mesh0->nodes(), mesh_e->nodes(),
                                                        mesh0->cusp(), cfg);
        const double fd_err = lp_norm(
            [&](double x) {
                return (id_e.h.value(x) - id0.h.value(x)) / eps - u.value(x);
            },
            scheme, s.p);
        const double stat = lp_norm(
            [&](double x) { return id_e.h.value(x) - id0.h.value(x); }, scheme, s.p);

        sweep.push_back(SweepEntry{eps, id_e.residual, fd_err, route_gap, stat,
                                   id_e.iterations, id_e.converged && id0.converged});
        all_ok = all_ok && id_e.converged;
    }

    // Rate fit over the three smallest converged eps (asymptotic regime).
    std::vector<double> fe, fx;
    for (auto it = sweep.rbegin(); it != sweep.rend() && fe.size() < 3; ++it)
        if (it->converged) {
            fx.push_back(it->eps);
            fe.push_back(it->fd_error_lp);
        }
    const double rate = fit_loglog_slope(fx, fe);

    return ResponseReport{id0.h, q_theorem,  q_family, u,
                          route_gap, std::move(sweep), rate, all_ok};
}

}  // namespace cuspresp
