#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "cuspresp/mesh.hpp"

namespace cuspresp {

enum class Continuity { c0, c1, c2 };

/** Piecewise-cubic function on a GradedMesh, stored panel-by-panel in the
    local power basis c0 + c1*t + c2*t^2 + c3*t^3 with t = x - panel_left.

    Densities, test functions and operator images are all carried in this
    form; integrals of panels are exact and same-mesh linear algebra is
    coefficient-wise. */
class SplineFunction {
public:
    struct Panel {
        double x0, x1;
        double c0, c1, c2, c3;
    };

    /// C2 cubic interpolant of one sample per mesh node (not-a-knot ends,
    /// so polynomials up to degree 3 are reproduced exactly).
    static SplineFunction interpolate_c2(std::shared_ptr<const GradedMesh> mesh,
                                         const std::vector<double>& values);

    /// C1 Hermite interpolant from nodal values and slopes.
    static SplineFunction hermite_c1(std::shared_ptr<const GradedMesh> mesh,
                                     const std::vector<double>& values,
                                     const std::vector<double>& slopes);

    static SplineFunction constant(std::shared_ptr<const GradedMesh> mesh, double value);

    /// Wraps externally built panels (boundaries must match the mesh nodes).
    static SplineFunction assemble(std::shared_ptr<const GradedMesh> mesh,
                                   std::vector<Panel> panels, Continuity continuity);

    /// Samples a callable at the mesh nodes and interpolates (C2).
    template <class F>
    static SplineFunction sample(std::shared_ptr<const GradedMesh> mesh, F&& f) {
        std::vector<double> v(mesh->nodes().size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = f(mesh->nodes()[i]);
        return interpolate_c2(std::move(mesh), v);
    }

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    /// Exact integral over [0,1], panels summed left to right.
    double integral() const;

    double node_value(std::size_t i) const;
    std::vector<double> node_values() const;

    const GradedMesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const GradedMesh>& mesh_ptr() const { return mesh_; }
    Continuity continuity() const { return continuity_; }

    // Same-mesh coefficient-wise algebra.
    SplineFunction& operator+=(const SplineFunction& other);
    SplineFunction& operator-=(const SplineFunction& other);
    SplineFunction& operator*=(double s);
    SplineFunction& add_constant(double s);
    SplineFunction operator+(const SplineFunction& other) const;
    SplineFunction operator-(const SplineFunction& other) const;
    SplineFunction scaled(double s) const;

    /// x * f'(x) + f(x), formed exactly panel-wise (stays cubic).
    SplineFunction one_plus_x_ddx() const;

    const std::vector<Panel>& panels() const { return panels_; }

    /// CSV round trip (columns panel_left, panel_right, c0, c1, c2, c3).
    void to_csv(std::ostream& os) const;
    static SplineFunction from_csv(std::istream& is);

private:
    SplineFunction(std::shared_ptr<const GradedMesh> mesh, std::vector<Panel> panels,
                   Continuity c)
        : mesh_(std::move(mesh)), panels_(std::move(panels)), continuity_(c) {}

    void require_same_mesh(const SplineFunction& other) const;

    std::shared_ptr<const GradedMesh> mesh_;
    std::vector<Panel> panels_;
    Continuity continuity_;
};

/// Interpolates one sample per node into a C2 spline.
SplineFunction project(const std::vector<double>& samples,
                       std::shared_ptr<const GradedMesh> mesh);

/// f minus its integral; the result integrates to zero exactly.
SplineFunction mean_zero_project(const SplineFunction& f);

}  // namespace cuspresp
