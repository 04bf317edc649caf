#include "cuspresp/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cuspresp/corpus.hpp"
#include "cuspresp/errors.hpp"

namespace cuspresp {

namespace {

// L^p residual ||P h - h|| measured on the context quadrature scheme.
double operator_residual(const OperatorContext& ctx, const SplineFunction& h) {
    const OperatorImage img = apply_table(ctx.model(), ctx.quad_table(), h, 0);
    const auto& pts = ctx.scheme().points();
    std::vector<double> diff(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        diff[i] = img.value[i] - h.value(pts[i]);
    return lp_norm_values(ctx.scheme(), diff, ctx.cfg().p);
}

}  // namespace

InvariantDensity invariant_density_from(const OperatorContext& ctx, SplineFunction start,
                                        double tol, int max_iter) {
    if (!(tol > 0.0))
        throw std::invalid_argument("invariant_density: tol must be positive");
    SplineFunction h = std::move(start);
    {
        const double m = h.integral();
        if (!(m > 0.0))
            throw std::invalid_argument("invariant_density: start must have positive mass");
        h *= 1.0 / m;
    }
    double residual = operator_residual(ctx, h);
    int it = 0;
    while (residual >= tol && it < max_iter) {
        SplineFunction next = apply(ctx, h);
        const double m = next.integral();
        if (!(m > 1e-300))
            throw ConvergenceError("invariant_density: image mass collapsed", residual, it);
        next *= 1.0 / m;
        h = std::move(next);
        residual = operator_residual(ctx, h);
        ++it;
    }
    h *= 1.0 / h.integral();
    return InvariantDensity{std::move(h), residual, it, residual < tol};
}

InvariantDensity invariant_density(const OperatorContext& ctx, double tol, int max_iter) {
    return invariant_density_from(ctx, SplineFunction::constant(ctx.mesh_ptr(), 1.0), tol,
                                  max_iter);
}

SpectrumReport ulam_spectrum(const UlamOperator& op, int count, int krylov_dim) {
    if (count < 2)
        throw std::invalid_argument("ulam_spectrum: count must be >= 2");
    const int n = static_cast<int>(op.matrix.rows());
    const int m = std::min(krylov_dim, n - 1);
    if (m < count)
        throw std::invalid_argument("ulam_spectrum: krylov_dim too small");

    // Arnoldi with modified Gram-Schmidt (two passes), deterministic start
    // vector = uniform-density cell masses.
    Eigen::MatrixXd Q(n, m + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    {
        Eigen::VectorXd q0(n);
        const auto& nodes = op.mesh->nodes();
        for (int i = 0; i < n; ++i)
            q0[i] = nodes[i + 1] - nodes[i];
        Q.col(0) = q0 / q0.norm();
    }
    int built = m;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = op.matrix * Q.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) {
                const double hij = Q.col(i).dot(w);
                H(i, j) += hij;
                w -= hij * Q.col(i);
            }
        const double nw = w.norm();
        H(j + 1, j) = nw;
        if (nw < 1e-13) {
            built = j + 1;  // invariant subspace found early
            break;
        }
        Q.col(j + 1) = w / nw;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(built, built));
    std::vector<std::complex<double>> ev(built);
    for (int i = 0; i < built; ++i)
        ev[i] = es.eigenvalues()[i];
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        return std::abs(a) > std::abs(b);
    });
    if (static_cast<int>(ev.size()) > count)
        ev.resize(count);

    SpectrumReport rep;
    rep.leading = ev[0];
    rep.second_modulus = ev.size() > 1 ? std::abs(ev[1]) : 0.0;
    rep.gap = 1.0 - rep.second_modulus;
    rep.eigenvalues = std::move(ev);
    return rep;
}

std::vector<double> ulam_fixed_masses(const UlamOperator& op, double tol, int max_iter) {
    const int n = static_cast<int>(op.matrix.rows());
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / n);
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd next = op.matrix * v;
        next /= next.sum();
        const double delta = (next - v).lpNorm<1>();
        v = next;
        if (delta < tol)
            break;
    }
    return std::vector<double>(v.data(), v.data() + n);
}

double ulam_l1_distance(const UlamOperator& op, const std::vector<double>& masses,
                        const SplineFunction& h) {
    const auto& nodes = op.mesh->nodes();
    const auto& rule = gauss_legendre(8);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double w = nodes[i + 1] - nodes[i];
        const double dens = masses[i] / w;
        const double mid = 0.5 * (nodes[i] + nodes[i + 1]);
        double acc = 0.0;
        for (const auto& [t, gw] : rule)
            acc += gw * std::fabs(h.value(mid + 0.5 * w * t) - dens);
        total += 0.5 * w * acc;
    }
    return total;
}

SplineFunction resolvent_apply(const OperatorContext& ctx, const SplineFunction& q,
                               double tol, int max_terms, int* terms_used) {
    if (!(tol > 0.0))
        throw std::invalid_argument("resolvent_apply: tol must be positive");
    if (std::fabs(q.integral()) > 1e-8)
        throw std::invalid_argument("resolvent_apply: q must be mean-zero");

    SplineFunction term = q;
    term.add_constant(-term.integral());
    SplineFunction sum = term;
    double prev_norm = sobolev_norm(term, ctx.cfg(), 1);
    int n = 1;
    for (; n <= max_terms; ++n) {
        term = apply(ctx, term);
        term.add_constant(-term.integral());  // P preserves mass; kill drift
        const double tn = sobolev_norm(term, ctx.cfg(), 1);
        if (tn < tol) {
            if (terms_used)
                *terms_used = n;
            return sum;
        }
        sum += term;
        // decay watchdog: the series must shrink on the long run
        if (n > 64 && tn > 10.0 * prev_norm)
            throw ConvergenceError("resolvent_apply: Neumann series is not decaying", tn, n);
        prev_norm = std::max(tn, 1e-300);
    }
    throw ConvergenceError("resolvent_apply: series did not reach tolerance", prev_norm,
                           max_terms);
}

std::vector<double> ulam_resolvent_masses(const UlamOperator& op,
                                          const std::vector<double>& rhs_masses) {
    const int n = static_cast<int>(op.matrix.rows());
    if (static_cast<int>(rhs_masses.size()) != n)
        throw std::invalid_argument("ulam_resolvent_masses: size mismatch");

    // Augmented system [[I-M, 1],[1^T, 0]] [x; mu] = [rhs; 0].
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(op.matrix.nonZeros() + 3 * n + 1);
    for (int k = 0; k < op.matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(op.matrix, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                               -it.value());
    for (int i = 0; i < n; ++i) {
        trips.emplace_back(i, i, 1.0);
        trips.emplace_back(i, n, 1.0);
        trips.emplace_back(n, i, 1.0);
    }
    Eigen::SparseMatrix<double> A(n + 1, n + 1);
    A.setFromTriplets(trips.begin(), trips.end(), [](double a, double b) { return a + b; });

    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    for (int i = 0; i < n; ++i)
        b[i] = rhs_masses[i];

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("ulam_resolvent_masses: factorization failed");
    Eigen::VectorXd x = lu.solve(b);
    return std::vector<double>(x.data(), x.data() + n);
}

double resolvent_bound_proxy(const OperatorContext& ctx, int corpus_size, unsigned seed,
                             double tol) {
    if (corpus_size < 20)
        throw std::invalid_argument("resolvent_bound_proxy: corpus_size must be >= 20");
    CorpusOptions opts;
    opts.count = corpus_size;
    opts.seed = seed;
    opts.mean_zero = true;
    opts.normalize = CorpusNorm::w1p;
    opts.p = ctx.cfg().p;
    const auto corpus = make_corpus(ctx.mesh_ptr(), opts);
    double worst = 0.0;
    for (const SplineFunction& f : corpus) {
        const SplineFunction u = resolvent_apply(ctx, f, tol);
        worst = std::max(worst, sobolev_norm(u, ctx.cfg(), 1));
    }
    return worst;
}

}  // namespace cuspresp
