#include "cuspresp/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace cuspresp {

double lp_norm_values(const QuadratureScheme& scheme, const std::vector<double>& values,
                      double exponent) {
    if (!(exponent >= 1.0))
        throw std::invalid_argument("lp_norm: exponent must be >= 1");
    if (values.size() != scheme.size())
        throw std::invalid_argument("lp_norm: values do not match scheme");
    const auto& w = scheme.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double a = std::fabs(values[i]);
        if (!std::isfinite(a))
            throw std::runtime_error("lp_norm: non-finite integrand sample");
        sum += w[i] * std::pow(a, exponent);
    }
    return std::pow(sum, 1.0 / exponent);
}

double lp_norm(const std::function<double(double)>& f, const QuadratureScheme& scheme,
               double exponent) {
    std::vector<double> v(scheme.size());
    const auto& x = scheme.points();
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = f(x[i]);
    return lp_norm_values(scheme, v, exponent);
}

double lp_norm(const SplineFunction& f, const NormConfig& cfg, double exponent) {
    const auto scheme = QuadratureScheme::for_mesh(f.mesh(), cfg);
    return lp_norm([&f](double x) { return f.value(x); }, scheme, exponent);
}

double sobolev_combine(const std::vector<double>& lp_norms, double p) {
    double sum = 0.0;
    for (double n : lp_norms)
        sum += std::pow(n, p);
    return std::pow(sum, 1.0 / p);
}

double sobolev_norm(const SplineFunction& f, const NormConfig& cfg, int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("sobolev_norm: order must be 1 or 2");
    if (order == 2 && f.continuity() == Continuity::c0)
        throw std::invalid_argument("sobolev_norm: order 2 needs a C1 spline");
    const auto scheme = QuadratureScheme::for_mesh(f.mesh(), cfg);
    std::vector<double> parts;
    parts.push_back(lp_norm([&f](double x) { return f.value(x); }, scheme, cfg.p));
    parts.push_back(lp_norm([&f](double x) { return f.derivative(x); }, scheme, cfg.p));
    if (order == 2)
        parts.push_back(
            lp_norm([&f](double x) { return f.second_derivative(x); }, scheme, cfg.p));
    return sobolev_combine(parts, cfg.p);
}

double sobolev_norm(const std::vector<std::function<double(double)>>& derivatives,
                    const QuadratureScheme& scheme, double p) {
    if (derivatives.empty())
        throw std::invalid_argument("sobolev_norm: empty derivative list");
    std::vector<double> parts;
    parts.reserve(derivatives.size());
    for (const auto& d : derivatives)
        parts.push_back(lp_norm(d, scheme, p));
    return sobolev_combine(parts, p);
}

}  // namespace cuspresp
