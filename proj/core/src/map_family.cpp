#include "cuspresp/map_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cuspresp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double MapModel::evaluate(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("MapModel::evaluate: x outside [0,1]");
    if (x == cusp())
        return peak();
    return eval_raw(x);
}

double MapModel::branch_inverse(Branch b, double target) const {
    if (!(target >= -1e-12 && target <= peak() + 1e-12))
        throw std::out_of_range("branch_inverse: target outside [0, peak]");
    target = std::clamp(target, 0.0, peak());
    const double c = cusp();
    double lo = (b == Branch::left) ? 0.0 : c;
    double hi = (b == Branch::left) ? c : 1.0;
    const double sign = branch_sign(b);
    // g(y) = sign * (T(y) - target) is increasing on the branch.
    auto g = [&](double y) { return sign * (evaluate(y) - target); };
    double glo = g(lo);
    if (glo > 0.0)
        return lo;  // target at the branch floor up to rounding
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int i = 0; i < 2; ++i) {
        if (y == c)
            break;
        const double d = derivative(y, 1);
        if (d == 0.0 || !std::isfinite(d))
            break;
        const double step = (evaluate(y) - target) / d;
        const double yn = y - step;
        if (yn >= lo && yn <= hi)
            y = yn;
    }
    return y;
}

Preimage MapModel::preimage(Branch b, double x) const {
    const double y = branch_inverse(b, x);
    if (y == cusp()) {
        const double s = branch_sign(b);
        return Preimage{y, s * kInf, kInf, s * kInf, 0.0};
    }
    const double d1 = derivative(y, 1);
    return Preimage{y, d1, derivative(y, 2), derivative(y, 3), 1.0 / std::fabs(d1)};
}

// ---------------------------------------------------------------------------
// Cusp tent family
// ---------------------------------------------------------------------------

CuspTentFamily::CuspTentFamily(int k, double eps, double p)
    : k_(k), eps_(eps), p_(p), beta_((1.0 - k) / static_cast<double>(k)) {
    if (k < 3)
        throw std::invalid_argument("CuspTentFamily: root order k must be >= 3");
    if (!(p > 1.0))
        throw std::invalid_argument("CuspTentFamily: p must exceed 1");
    if (!(static_cast<double>(k) > 2.0 * p))
        throw std::invalid_argument("CuspTentFamily: admissibility requires k > 2p");
    if (!(eps >= 0.0 && eps < 0.1))
        throw std::invalid_argument("CuspTentFamily: eps must lie in [0, 1/10)");
}

double CuspTentFamily::eval_raw(double x) const {
    const double s = 1.0 - eps_;
    const double u = std::fabs(1.0 - 2.0 * x);
    const double r = std::pow(u, 1.0 / k_);
    const double tent = (x < 0.5) ? 1.5 * x : 1.5 * (1.0 - x);
    return s * (tent + 0.25 * (1.0 - r));
}

double CuspTentFamily::derivative(double x, int order) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("CuspTentFamily::derivative: x outside [0,1]");
    if (x == 0.5)
        throw std::domain_error("CuspTentFamily::derivative: singular at the cusp");
    const double s = 1.0 - eps_;
    const double u = std::fabs(1.0 - 2.0 * x);
    const double k = k_;
    const double side = (x < 0.5) ? 1.0 : -1.0;
    switch (order) {
        case 1:
            return side * s * (1.5 + std::pow(u, 1.0 / k - 1.0) / (2.0 * k));
        case 2:
            return s * ((k - 1.0) / (k * k)) * std::pow(u, 1.0 / k - 2.0);
        case 3:
            return side * s * (2.0 * (k - 1.0) * (2.0 * k - 1.0) / (k * k * k)) *
                   std::pow(u, 1.0 / k - 3.0);
        default:
            throw std::invalid_argument("CuspTentFamily::derivative: order must be 1..3");
    }
}

double CuspTentFamily::eps_derivative_value(double x) const {
    // T_eps = (1-eps) T_0, so d/d_eps T_eps = -T_0 = -T_eps / (1-eps).
    return -evaluate(x) / (1.0 - eps_);
}

double CuspTentFamily::eps_derivative_slope(double x) const {
    return -derivative(x, 1) / (1.0 - eps_);
}

double CuspTentFamily::branch_sign(Branch b) const {
    return b == Branch::left ? 1.0 : -1.0;
}

double CuspTentFamily::solve_v(double rhs) const {
    // 3 v^k + v is strictly increasing on [0,1] with range [0,4].
    double lo = 0.0, hi = 1.0;
    auto f = [&](double v) { return 3.0 * std::pow(v, k_) + v - rhs; };
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double v = 0.5 * (lo + hi);
    for (int i = 0; i < 2; ++i) {
        const double fp = 3.0 * k_ * std::pow(v, k_ - 1) + 1.0;
        v = std::clamp(v - f(v) / fp, 0.0, 1.0);
    }
    return v;
}

double CuspTentFamily::branch_inverse(Branch b, double target) const {
    if (!(target >= -1e-12 && target <= peak() + 1e-12))
        throw std::out_of_range("branch_inverse: target outside [0, peak]");
    const double xt = std::clamp(target / (1.0 - eps_), 0.0, 1.0);
    const double u = std::pow(solve_v(4.0 * (1.0 - xt)), k_);
    return b == Branch::left ? 0.5 * (1.0 - u) : 0.5 * (1.0 + u);
}

Preimage CuspTentFamily::preimage_from_v(Branch b, double v) const {
    const double s = 1.0 - eps_;
    const double k = k_;
    const double side = (b == Branch::left) ? 1.0 : -1.0;
    const double vk1 = std::pow(v, k_ - 1);  // v^(k-1)
    const double u = vk1 * v;                // v^k = |1 - 2y|
    Preimage pre;
    pre.y = (b == Branch::left) ? 0.5 * (1.0 - u) : 0.5 * (1.0 + u);
    pre.inv_abs_d1 = 2.0 * k * vk1 / (s * (3.0 * k * vk1 + 1.0));
    if (vk1 == 0.0) {
        pre.d1 = side * kInf;
        pre.d2 = kInf;
        pre.d3 = side * kInf;
        pre.inv_abs_d1 = 0.0;
        return pre;
    }
    pre.d1 = side * s * (1.5 + 1.0 / (2.0 * k * vk1));
    pre.d2 = s * ((k - 1.0) / (k * k)) / (vk1 * vk1 * v);         // u^(1/k-2)
    pre.d3 = side * s * (2.0 * (k - 1.0) * (2.0 * k - 1.0) / (k * k * k)) /
             (vk1 * vk1 * vk1 * v * v);                           // u^(1/k-3)
    return pre;
}

Preimage CuspTentFamily::preimage(Branch b, double x) const {
    if (!(x >= -1e-12 && x <= peak() + 1e-12))
        throw std::out_of_range("preimage: x outside [0, peak]");
    const double xt = std::clamp(x / (1.0 - eps_), 0.0, 1.0);
    return preimage_from_v(b, solve_v(4.0 * (1.0 - xt)));
}

std::shared_ptr<const MapModel> make_cusp_tent_family(int k, double eps, double p) {
    return std::make_shared<CuspTentFamily>(k, eps, p);
}

// ---------------------------------------------------------------------------
// Assumption audit
// ---------------------------------------------------------------------------

double richardson_limit(const std::vector<double>& r) {
    if (r.size() < 3)
        return r.empty() ? 0.0 : r.back();
    std::vector<double> d(r.size() - 1);
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
        d[i] = r[i + 1] - r[i];
    // Last index whose difference is clearly above rounding noise.
    std::ptrdiff_t last = -1;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (std::fabs(d[i]) > 1e-12 * (std::fabs(r[i]) + 1e-300))
            last = static_cast<std::ptrdiff_t>(i);
    if (last < 1)
        return r.back();
    // Geometric decay ratio from the trailing usable differences.
    std::vector<double> ratios;
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, last - 8); i < last; ++i)
        if (std::fabs(d[i]) > 1e-12 * (std::fabs(r[i]) + 1e-300))
            ratios.push_back(d[i + 1] / d[i]);
    if (ratios.empty())
        return r.back();
    std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
    double rho = ratios[ratios.size() / 2];
    rho = std::clamp(rho, -0.99, 0.985);
    return r[last + 1] + d[last] * rho / (1.0 - rho);
}

namespace {

struct Iv {
    double a, b;
};

// Image of an interval under the two monotone branches.
void image_of(const MapModel& m, const Iv& I, std::vector<Iv>& out) {
    const double c = m.cusp();
    if (I.a < c) {
        const double hi = (I.b >= c) ? m.peak() : m.evaluate(I.b);
        out.push_back({m.evaluate(I.a), hi});
    }
    if (I.b > c) {
        const double hi = (I.a <= c) ? m.peak() : m.evaluate(I.a);
        out.push_back({m.evaluate(I.b), hi});
    }
}

std::vector<Iv> merge(std::vector<Iv> v) {
    std::sort(v.begin(), v.end(), [](const Iv& x, const Iv& y) { return x.a < y.a; });
    std::vector<Iv> out;
    for (const Iv& iv : v) {
        if (!out.empty() && iv.a <= out.back().b + 1e-12)
            out.back().b = std::max(out.back().b, iv.b);
        else
            out.push_back(iv);
    }
    return out;
}

bool covers(const std::vector<Iv>& set, double lo, double hi) {
    double reach = lo;
    for (const Iv& iv : set) {
        if (iv.a > reach + 1e-9)
            return false;
        reach = std::max(reach, iv.b);
        if (reach >= hi - 1e-12)
            return true;
    }
    return reach >= hi - 1e-12;
}

// Sweeps needed for the iterated image of [a,b] to cover [0, peak - 1e-3].
int cover_sweeps(const MapModel& m, double a, double b, int max_iter) {
    std::vector<Iv> cur{{a, b}};
    const double hi = m.peak() - 1e-3;
    for (int it = 1; it <= max_iter; ++it) {
        std::vector<Iv> next;
        next.reserve(2 * cur.size());
        for (const Iv& iv : cur)
            image_of(m, iv, next);
        cur = merge(std::move(next));
        if (covers(cur, 0.0, hi))
            return it;
    }
    return -1;
}

}  // namespace

bool AssumptionAudit::all_pass() const {
    return monotone_branches && endpoint_anchors && smooth_away_from_cusp &&
           uniform_expansion && mixing && slope_exponent && higher_exponents &&
           derivative_envelope;
}

AssumptionAudit audit_assumptions(const MapModel& model, int grid_size, double p,
                                  double ulam_second_modulus) {
    if (grid_size < 1000)
        throw std::invalid_argument("audit_assumptions: grid_size must be >= 1000");
    if (!(p > 1.0))
        throw std::invalid_argument("audit_assumptions: p must exceed 1");

    AssumptionAudit audit;
    const double c = model.cusp();
    const double a = model.peak();
    const double beta = model.beta();

    // Sample grid: uniform points plus a dyadic approach to the cusp.
    std::vector<double> xs;
    xs.reserve(grid_size + 100);
    xs.push_back(0.0);
    xs.push_back(1.0);
    for (int i = 0; i < grid_size; ++i)
        xs.push_back((i + 0.5) / grid_size);
    for (int j = 2; j <= 45; ++j) {
        xs.push_back(c - std::ldexp(1.0, -j));
        xs.push_back(c + std::ldexp(1.0, -j));
    }

    // theta, derivative envelope and the pointwise unit image sum.
    double theta = kInf, env_sup = 0.0, env_inf = kInf;
    for (double x : xs) {
        if (x == c || x < 0.0 || x > 1.0)
            continue;
        const double u = std::fabs(x - c);
        const double d1 = std::fabs(model.derivative(x, 1));
        theta = std::min(theta, d1);
        env_inf = std::min(env_inf, d1 * std::pow(u, -beta));
        env_sup = std::max(env_sup, d1 * std::pow(u, -beta));
        env_sup = std::max(env_sup, std::fabs(model.derivative(x, 2)) * std::pow(u, 1.0 - beta));
        env_sup = std::max(env_sup, std::fabs(model.derivative(x, 3)) * std::pow(u, 2.0 - beta));
    }
    audit.theta_hat = theta;
    audit.lambda_hat = 1.0 / theta;
    audit.envelope_sup = env_sup;
    audit.envelope_inf = env_inf;
    audit.uniform_expansion = theta > 1.0;
    audit.derivative_envelope = std::isfinite(env_sup) && env_inf > 1e-9;

    double sup_unit = 0.0;
    for (int i = 0; i <= 512; ++i) {
        const double x = a * i / 512.0;
        const double w = model.preimage(Branch::left, x).inv_abs_d1 +
                         model.preimage(Branch::right, x).inv_abs_d1;
        sup_unit = std::max(sup_unit, w);
    }
    audit.sup_unit_image = sup_unit;

    // ||T''/(T')^2||_{2p} by cusp-refined quadrature.
    {
        NormConfig cfg;
        cfg.p = p;
        auto mesh = GradedMesh::graded(512, 2.0, c, a);
        const auto scheme = QuadratureScheme::for_mesh(*mesh, cfg);
        const double q = 2.0 * p;
        const double integral = scheme.integrate([&](double x) {
            const double d1 = model.derivative(x, 1);
            return std::pow(std::fabs(model.derivative(x, 2) / (d1 * d1)), q);
        });
        audit.big_m_hat = std::pow(integral, 1.0 / q);
    }

    // Branch monotonicity.
    {
        bool mono = true;
        const int n = grid_size;
        double prev = model.evaluate(0.0);
        for (int i = 1; i <= n; ++i) {
            const double x = c * i / n;
            const double v = model.evaluate(x);
            if (v <= prev) {
                mono = false;
                break;
            }
            prev = v;
        }
        if (mono) {
            prev = model.evaluate(c);
            for (int i = 1; i <= n; ++i) {
                const double x = c + (1.0 - c) * i / n;
                const double v = model.evaluate(x);
                if (v >= prev) {
                    mono = false;
                    break;
                }
                prev = v;
            }
        }
        audit.monotone_branches = mono;
    }

    // Endpoint anchors: T(0) = T(1) = 0, one-sided limits at the cusp = peak.
    {
        std::vector<double> left, right;
        for (int j = 10; j <= 44; ++j) {
            left.push_back(model.evaluate(c - std::ldexp(1.0, -j)));
            right.push_back(model.evaluate(c + std::ldexp(1.0, -j)));
        }
        const double ll = richardson_limit(left);
        const double rl = richardson_limit(right);
        audit.endpoint_anchors = std::fabs(model.evaluate(0.0)) < 1e-12 &&
                                 std::fabs(model.evaluate(1.0)) < 1e-12 &&
                                 std::fabs(ll - a) < 1e-7 && std::fabs(rl - a) < 1e-7;
    }

    // C^3 smoothness away from the cusp: analytic derivatives against
    // central differences of the next lower order.
    {
        bool ok = true;
        const double h = 1e-6;
        for (int i = 0; i < 24 && ok; ++i) {
            const double off = 0.02 + 0.46 * i / 23.0;
            for (double x : {c - off, c + off}) {
                const double fd1 = (model.evaluate(x + h) - model.evaluate(x - h)) / (2 * h);
                const double fd2 =
                    (model.derivative(x + h, 1) - model.derivative(x - h, 1)) / (2 * h);
                const double fd3 =
                    (model.derivative(x + h, 2) - model.derivative(x - h, 2)) / (2 * h);
                ok = ok &&
                     std::fabs(fd1 - model.derivative(x, 1)) <
                         1e-5 * (1.0 + std::fabs(model.derivative(x, 1))) &&
                     std::fabs(fd2 - model.derivative(x, 2)) <
                         1e-5 * (1.0 + std::fabs(model.derivative(x, 2))) &&
                     std::fabs(fd3 - model.derivative(x, 3)) <
                         1e-5 * (1.0 + std::fabs(model.derivative(x, 3)));
            }
        }
        audit.smooth_away_from_cusp = ok;
    }

    // Cusp exponent constants by Richardson extrapolation along c +- 2^-j.
    auto extrapolate_ratio = [&](int order, double expo, bool left_side) {
        std::vector<double> r;
        for (int j = 10; j <= 40; ++j) {
            const double u = std::ldexp(1.0, -j);
            const double x = left_side ? c - u : c + u;
            r.push_back(std::fabs(model.derivative(x, order)) / std::pow(u, expo));
        }
        return richardson_limit(r);
    };
    audit.c1_left = extrapolate_ratio(1, beta, true);
    audit.c1_right = extrapolate_ratio(1, beta, false);
    audit.c2_left = extrapolate_ratio(2, beta - 1.0, true);
    audit.c2_right = extrapolate_ratio(2, beta - 1.0, false);
    audit.c3_left = extrapolate_ratio(3, beta - 2.0, true);
    audit.c3_right = extrapolate_ratio(3, beta - 2.0, false);

    auto consistent = [](double l, double r) {
        return std::isfinite(l) && std::isfinite(r) && l > 0.0 && r > 0.0 &&
               std::fabs(l - r) < 1e-2 * std::max(l, r);
    };
    const double blow = std::fabs(model.derivative(c - std::ldexp(1.0, -40), 1));
    audit.slope_exponent = consistent(audit.c1_left, audit.c1_right) && blow > 1e3;
    audit.higher_exponents = consistent(audit.c2_left, audit.c2_right) &&
                             consistent(audit.c3_left, audit.c3_right);

    // Mixing heuristic: every dyadic interval of width >= 2^-6 spreads over
    // [0, a - 1e-3] within 60 sweeps; the Ulam gap check is supplied by the
    // caller when available.
    {
        int worst = 0;
        bool ok = true;
        for (int m = 1; m <= 6 && ok; ++m) {
            const double w = std::ldexp(1.0, -m);
            for (int i = 0; i < (1 << m) && ok; ++i) {
                const int it = cover_sweeps(model, i * w, (i + 1) * w, 60);
                if (it < 0)
                    ok = false;
                else
                    worst = std::max(worst, it);
            }
        }
        audit.cover_iterations = ok ? worst : -1;
        audit.ulam_second_modulus = ulam_second_modulus;
        const bool gap_ok =
            std::isnan(ulam_second_modulus) || ulam_second_modulus < 1.0 - 1e-3;
        audit.mixing = ok && gap_ok;
    }

    return audit;
}

}  // namespace cuspresp
