#include "cuspresp/spline.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cuspresp {

namespace {

std::vector<SplineFunction::Panel> hermite_panels(const GradedMesh& mesh,
                                                  const std::vector<double>& y,
                                                  const std::vector<double>& m) {
    const auto& x = mesh.nodes();
    std::vector<SplineFunction::Panel> panels(mesh.panel_count());
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const double h = x[i + 1] - x[i];
        const double d = (y[i + 1] - y[i]) / h;
        panels[i].x0 = x[i];
        panels[i].x1 = x[i + 1];
        panels[i].c0 = y[i];
        panels[i].c1 = m[i];
        panels[i].c2 = (3.0 * d - 2.0 * m[i] - m[i + 1]) / h;
        panels[i].c3 = (m[i] + m[i + 1] - 2.0 * d) / (h * h);
    }
    return panels;
}

}  // namespace

SplineFunction SplineFunction::interpolate_c2(std::shared_ptr<const GradedMesh> mesh,
                                              const std::vector<double>& values) {
    const auto& x = mesh->nodes();
    const std::size_t n = x.size();
    if (values.size() != n)
        throw std::invalid_argument("interpolate_c2: one sample per node required");
    if (n < 4)
        throw std::invalid_argument("interpolate_c2: need at least 4 nodes");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (values[i + 1] - values[i]) / h[i];
    }

    // Tridiagonal system for the nodal slopes, not-a-knot end rows.
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
    di[0] = h[1];
    up[0] = h[0] + h[1];
    rhs[0] = (delta[0] * h[1] * (3.0 * h[0] + 2.0 * h[1]) + delta[1] * h[0] * h[0]) /
             (h[0] + h[1]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        lo[i] = 1.0 / h[i - 1];
        di[i] = 2.0 * (1.0 / h[i - 1] + 1.0 / h[i]);
        up[i] = 1.0 / h[i];
        rhs[i] = 3.0 * (delta[i - 1] / h[i - 1] + delta[i] / h[i]);
    }
    const std::size_t N = n - 1;
    lo[N] = h[N - 1] + h[N - 2];
    di[N] = h[N - 2];
    rhs[N] = (delta[N - 1] * h[N - 2] * (3.0 * h[N - 1] + 2.0 * h[N - 2]) +
              delta[N - 2] * h[N - 1] * h[N - 1]) /
             (h[N - 1] + h[N - 2]);

    // Thomas sweep.
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> m(n);
    m[N] = rhs[N] / di[N];
    for (std::size_t i = N; i-- > 0;)
        m[i] = (rhs[i] - up[i] * m[i + 1]) / di[i];

    auto panels = hermite_panels(*mesh, values, m);
    return SplineFunction(std::move(mesh), std::move(panels), Continuity::c2);
}

SplineFunction SplineFunction::hermite_c1(std::shared_ptr<const GradedMesh> mesh,
                                          const std::vector<double>& values,
                                          const std::vector<double>& slopes) {
    const std::size_t n = mesh->nodes().size();
    if (values.size() != n || slopes.size() != n)
        throw std::invalid_argument("hermite_c1: one value and one slope per node required");
    auto panels = hermite_panels(*mesh, values, slopes);
    return SplineFunction(std::move(mesh), std::move(panels), Continuity::c1);
}

SplineFunction SplineFunction::assemble(std::shared_ptr<const GradedMesh> mesh,
                                        std::vector<Panel> panels, Continuity continuity) {
    if (panels.size() != mesh->panel_count())
        throw std::invalid_argument("assemble: panel count does not match mesh");
    const auto& x = mesh->nodes();
    for (std::size_t i = 0; i < panels.size(); ++i)
        if (panels[i].x0 != x[i] || panels[i].x1 != x[i + 1])
            throw std::invalid_argument("assemble: panel boundaries off the mesh nodes");
    return SplineFunction(std::move(mesh), std::move(panels), continuity);
}

SplineFunction SplineFunction::constant(std::shared_ptr<const GradedMesh> mesh, double value) {
    std::vector<Panel> panels(mesh->panel_count());
    const auto& x = mesh->nodes();
    for (std::size_t i = 0; i < panels.size(); ++i)
        panels[i] = Panel{x[i], x[i + 1], value, 0.0, 0.0, 0.0};
    return SplineFunction(std::move(mesh), std::move(panels), Continuity::c2);
}

double SplineFunction::value(double x) const {
    const Panel& p = panels_[mesh_->find_panel(x)];
    const double t = x - p.x0;
    return p.c0 + t * (p.c1 + t * (p.c2 + t * p.c3));
}

double SplineFunction::derivative(double x) const {
    const Panel& p = panels_[mesh_->find_panel(x)];
    const double t = x - p.x0;
    return p.c1 + t * (2.0 * p.c2 + t * 3.0 * p.c3);
}

double SplineFunction::second_derivative(double x) const {
    const Panel& p = panels_[mesh_->find_panel(x)];
    const double t = x - p.x0;
    return 2.0 * p.c2 + 6.0 * p.c3 * t;
}

double SplineFunction::integral() const {
    double sum = 0.0;
    for (const Panel& p : panels_) {
        const double h = p.x1 - p.x0;
        sum += h * (p.c0 + h * (p.c1 / 2.0 + h * (p.c2 / 3.0 + h * p.c3 / 4.0)));
    }
    return sum;
}

double SplineFunction::node_value(std::size_t i) const {
    if (i < panels_.size())
        return panels_[i].c0;
    return value(mesh_->nodes().back());
}

std::vector<double> SplineFunction::node_values() const {
    std::vector<double> v(mesh_->nodes().size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = node_value(i);
    return v;
}

void SplineFunction::require_same_mesh(const SplineFunction& other) const {
    if (mesh_ != other.mesh_ && mesh_->nodes() != other.mesh_->nodes())
        throw std::invalid_argument("spline algebra requires a shared mesh");
}

SplineFunction& SplineFunction::operator+=(const SplineFunction& other) {
    require_same_mesh(other);
    for (std::size_t i = 0; i < panels_.size(); ++i) {
        panels_[i].c0 += other.panels_[i].c0;
        panels_[i].c1 += other.panels_[i].c1;
        panels_[i].c2 += other.panels_[i].c2;
        panels_[i].c3 += other.panels_[i].c3;
    }
    if (other.continuity_ < continuity_)
        continuity_ = other.continuity_;
    return *this;
}

SplineFunction& SplineFunction::operator-=(const SplineFunction& other) {
    require_same_mesh(other);
    for (std::size_t i = 0; i < panels_.size(); ++i) {
        panels_[i].c0 -= other.panels_[i].c0;
        panels_[i].c1 -= other.panels_[i].c1;
        panels_[i].c2 -= other.panels_[i].c2;
        panels_[i].c3 -= other.panels_[i].c3;
    }
    if (other.continuity_ < continuity_)
        continuity_ = other.continuity_;
    return *this;
}

SplineFunction& SplineFunction::operator*=(double s) {
    for (Panel& p : panels_) {
        p.c0 *= s;
        p.c1 *= s;
        p.c2 *= s;
        p.c3 *= s;
    }
    return *this;
}

SplineFunction& SplineFunction::add_constant(double s) {
    for (Panel& p : panels_)
        p.c0 += s;
    return *this;
}

SplineFunction SplineFunction::operator+(const SplineFunction& other) const {
    SplineFunction r = *this;
    r += other;
    return r;
}

SplineFunction SplineFunction::operator-(const SplineFunction& other) const {
    SplineFunction r = *this;
    r -= other;
    return r;
}

SplineFunction SplineFunction::scaled(double s) const {
    SplineFunction r = *this;
    r *= s;
    return r;
}

SplineFunction SplineFunction::one_plus_x_ddx() const {
    // f + x f' with x = x0 + t restated in the local basis; degree stays 3.
    std::vector<Panel> panels = panels_;
    for (Panel& p : panels) {
        const double x0 = p.x0;
        const double d0 = p.c0 + x0 * p.c1;
        const double d1 = 2.0 * p.c1 + 2.0 * x0 * p.c2;
        const double d2 = 3.0 * p.c2 + 3.0 * x0 * p.c3;
        const double d3 = 4.0 * p.c3;
        p.c0 = d0;
        p.c1 = d1;
        p.c2 = d2;
        p.c3 = d3;
    }
    Continuity c = continuity_ == Continuity::c2 ? Continuity::c1 : Continuity::c0;
    return SplineFunction(mesh_, std::move(panels), c);
}

void SplineFunction::to_csv(std::ostream& os) const {
    char buf[512];
    std::snprintf(buf, sizeof buf, "# cusp=%.17g peak=%.17g grading=%.17g\n",
                  mesh_->cusp(), mesh_->peak(), mesh_->grading_exponent());
    os << buf;
    os << "panel_left,panel_right,c0,c1,c2,c3\n";
    for (const Panel& p : panels_) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.x0,
                      p.x1, p.c0, p.c1, p.c2, p.c3);
        os << buf;
    }
}

SplineFunction SplineFunction::from_csv(std::istream& is) {
    std::string line;
    double cusp = 0.5, peak = 1.0, grading = 2.0;
    std::vector<Panel> panels;
    std::vector<double> nodes;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::sscanf(line.c_str(), "# cusp=%lg peak=%lg grading=%lg", &cusp, &peak,
                        &grading);
            continue;
        }
        if (line.rfind("panel_left", 0) == 0)
            continue;
        Panel p{};
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg,%lg", &p.x0, &p.x1, &p.c0,
                        &p.c1, &p.c2, &p.c3) != 6)
            throw std::invalid_argument("spline csv: malformed row: " + line);
        if (nodes.empty())
            nodes.push_back(p.x0);
        nodes.push_back(p.x1);
        panels.push_back(p);
    }
    if (panels.empty())
        throw std::invalid_argument("spline csv: no panels");
    auto mesh = std::make_shared<GradedMesh>(std::move(nodes), grading, cusp, peak);

    // Classify continuity from the stored coefficients.
    Continuity cont = Continuity::c2;
    for (std::size_t i = 0; i + 1 < panels.size(); ++i) {
        const Panel& a = panels[i];
        const Panel& b = panels[i + 1];
        const double h = a.x1 - a.x0;
        const double v = a.c0 + h * (a.c1 + h * (a.c2 + h * a.c3));
        const double d = a.c1 + h * (2.0 * a.c2 + 3.0 * h * a.c3);
        const double s = a.c2 * 2.0 + 6.0 * a.c3 * h;
        const double scale = 1.0 + std::fabs(b.c0);
        if (std::fabs(v - b.c0) > 1e-9 * scale) {
            cont = Continuity::c0;
            break;
        }
        if (std::fabs(d - b.c1) > 1e-7 * (1.0 + std::fabs(b.c1))) {
            cont = Continuity::c0;
            break;
        }
        if (std::fabs(s - 2.0 * b.c2) > 1e-5 * (1.0 + std::fabs(2.0 * b.c2)))
            cont = std::min(cont, Continuity::c1);
    }
    return SplineFunction(std::move(mesh), std::move(panels), cont);
}

SplineFunction project(const std::vector<double>& samples,
                       std::shared_ptr<const GradedMesh> mesh) {
    return SplineFunction::interpolate_c2(std::move(mesh), samples);
}

SplineFunction mean_zero_project(const SplineFunction& f) {
    SplineFunction g = f;
    g.add_constant(-f.integral());
    return g;
}

}  // namespace cuspresp
