#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace cuspresp {

/** Partition of [0,1] whose nodes always include 0, 1, the cusp abscissa c
    and the peak image a. Nodes cluster toward c and a with a power-law
    grading so that quadrature resolves the |x-c|^beta coefficient blow-up
    of the transfer operator.

    Invariants enforced at construction: nodes strictly increasing, c and a
    are nodes, adjacent panel widths differ by at most a factor of 4. */
class GradedMesh {
public:
    /// Builds a mesh with ~panel_count panels graded toward cusp and peak.
    /// grading_exponent must lie in [1,2]; 2 is the default used throughout.
    static std::shared_ptr<const GradedMesh> graded(int panel_count,
                                                    double grading_exponent,
                                                    double cusp, double peak);

    /// Wraps an explicit node vector (validates all invariants).
    GradedMesh(std::vector<double> nodes, double grading_exponent,
               double cusp, double peak);

    const std::vector<double>& nodes() const { return nodes_; }
    std::size_t panel_count() const { return nodes_.size() - 1; }
    double grading_exponent() const { return grading_; }
    double cusp() const { return cusp_; }
    double peak() const { return peak_; }
    std::size_t cusp_index() const { return cusp_index_; }
    std::size_t peak_index() const { return peak_index_; }

    /// Index i with nodes[i] <= x < nodes[i+1] (x = 1 maps to the last panel).
    std::size_t find_panel(double x) const;

private:
    std::vector<double> nodes_;
    double grading_;
    double cusp_;
    double peak_;
    std::size_t cusp_index_;
    std::size_t peak_index_;
};

}  // namespace cuspresp
