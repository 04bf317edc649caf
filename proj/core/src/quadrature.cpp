#include "cuspresp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cuspresp {

void NormConfig::validate() const {
    if (!(p > 1.0))
        throw std::invalid_argument("NormConfig: p must exceed 1");
    if (quadrature_order < 4)
        throw std::invalid_argument("NormConfig: quadrature order must be >= 4");
    if (subdivision_depth < 0 || subdivision_depth > 48)
        throw std::invalid_argument("NormConfig: subdivision depth out of range");
}

const std::vector<std::pair<double, double>>& gauss_legendre(int order) {
    static std::mutex mu;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end())
        return it->second;
    if (order < 1 || order > 64)
        throw std::invalid_argument("gauss_legendre: order out of range");

    std::vector<std::pair<double, double>> rule(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi-style initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule[i] = {x, w};
        rule[n - 1 - i] = {-x, w};
    }
    std::sort(rule.begin(), rule.end());
    return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

void append_panel(std::vector<double>& pts, std::vector<double>& wts, double a,
                  double b, const std::vector<std::pair<double, double>>& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (const auto& [t, w] : rule) {
        pts.push_back(mid + half * t);
        wts.push_back(half * w);
    }
}

// Geometric sub-panels of [a,b], shrinking toward `toward` (= a or b).
void append_refined(std::vector<double>& pts, std::vector<double>& wts, double a,
                    double b, bool toward_left, int depth,
                    const std::vector<std::pair<double, double>>& rule) {
    if (depth <= 0) {
        append_panel(pts, wts, a, b, rule);
        return;
    }
    const double w = b - a;
    if (toward_left) {
        // innermost first so points stay sorted
        append_panel(pts, wts, a, a + w * std::ldexp(1.0, -depth), rule);
        for (int d = depth; d >= 1; --d)
            append_panel(pts, wts, a + w * std::ldexp(1.0, -d),
                         a + w * std::ldexp(1.0, -(d - 1)), rule);
    } else {
        for (int d = 1; d <= depth; ++d)
            append_panel(pts, wts, b - w * std::ldexp(1.0, -(d - 1)),
                         b - w * std::ldexp(1.0, -d), rule);
        append_panel(pts, wts, b - w * std::ldexp(1.0, -depth), b, rule);
    }
}

}  // namespace

QuadratureScheme::QuadratureScheme(std::vector<double> breakpoints,
                                   double singular_point, const NormConfig& cfg) {
    cfg.validate();
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());
    if (breakpoints.size() < 2)
        throw std::invalid_argument("QuadratureScheme: need at least one panel");

    const auto& rule = gauss_legendre(cfg.quadrature_order);
    const std::size_t est = (breakpoints.size() + 2 * cfg.subdivision_depth) * rule.size();
    points_.reserve(est);
    weights_.reserve(est);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (b == singular_point)
            append_refined(points_, weights_, a, b, false, cfg.subdivision_depth, rule);
        else if (a == singular_point)
            append_refined(points_, weights_, a, b, true, cfg.subdivision_depth, rule);
        else
            append_panel(points_, weights_, a, b, rule);
    }
}

QuadratureScheme QuadratureScheme::for_mesh(const GradedMesh& mesh,
                                            const NormConfig& cfg) {
    return QuadratureScheme(mesh.nodes(), mesh.cusp(), cfg);
}

QuadratureScheme QuadratureScheme::for_union(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             double singular_point,
                                             const NormConfig& cfg) {
    std::vector<double> pts;
    pts.reserve(a.size() + b.size());
    pts.insert(pts.end(), a.begin(), a.end());
    pts.insert(pts.end(), b.begin(), b.end());
    return QuadratureScheme(std::move(pts), singular_point, cfg);
}

double QuadratureScheme::integrate(const std::function<double(double)>& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i)
        sum += weights_[i] * f(points_[i]);
    return sum;
}

double QuadratureScheme::sum(const std::vector<double>& values) const {
    if (values.size() != points_.size())
        throw std::invalid_argument("QuadratureScheme::sum: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += weights_[i] * values[i];
    return s;
}

}  // namespace cuspresp
