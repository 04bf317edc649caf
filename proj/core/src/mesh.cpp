#include "cuspresp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cuspresp {

namespace {

// Nodes on [a,b], count panels, clustered toward one or both endpoints.
// mode: 0 = toward b, 1 = toward a, 2 = toward both.
void fill_segment(std::vector<double>& out, double a, double b, int count,
                  double gamma, int mode) {
    for (int i = 1; i < count; ++i) {
        const double t = static_cast<double>(i) / count;
        double s;
        switch (mode) {
            case 0: s = 1.0 - std::pow(1.0 - t, gamma); break;
            case 1: s = std::pow(t, gamma); break;
            default: {
                const double tg = std::pow(t, gamma);
                const double ug = std::pow(1.0 - t, gamma);
                s = tg / (tg + ug);
            }
        }
        out.push_back(a + (b - a) * s);
    }
    out.push_back(b);
}

}  // namespace

std::shared_ptr<const GradedMesh> GradedMesh::graded(int panel_count,
                                                     double grading_exponent,
                                                     double cusp, double peak) {
    if (panel_count < 8)
        throw std::invalid_argument("GradedMesh: need at least 8 panels");
    if (!(cusp > 0.0 && cusp < 1.0))
        throw std::invalid_argument("GradedMesh: cusp must lie in (0,1)");
    if (!(peak > cusp && peak <= 1.0))
        throw std::invalid_argument("GradedMesh: peak must lie in (cusp,1]");

    const bool has_tail = peak < 1.0 - 1e-15;
    // Tail panels beyond the peak carry no density; keep their share small.
    int tail = 0;
    if (has_tail)
        tail = std::max(4, static_cast<int>(std::lround(panel_count * (1.0 - peak))));
    const int body = panel_count - tail;
    int left = std::max(4, static_cast<int>(std::lround(body * cusp / peak)));
    int mid = body - left;
    if (mid < 4) {
        mid = 4;
        left = body - mid;
    }

    std::vector<double> nodes;
    nodes.reserve(panel_count + 1);
    nodes.push_back(0.0);
    fill_segment(nodes, 0.0, cusp, left, grading_exponent, 0);
    fill_segment(nodes, cusp, peak, mid, grading_exponent, 2);
    if (has_tail)
        fill_segment(nodes, peak, 1.0, tail, grading_exponent, 1);
    return std::make_shared<GradedMesh>(std::move(nodes), grading_exponent, cusp, peak);
}

GradedMesh::GradedMesh(std::vector<double> nodes, double grading_exponent,
                       double cusp, double peak)
    : nodes_(std::move(nodes)), grading_(grading_exponent), cusp_(cusp), peak_(peak) {
    if (!(grading_ >= 1.0 && grading_ <= 2.0))
        throw std::invalid_argument("GradedMesh: grading exponent must be in [1,2]");
    if (nodes_.size() < 2 || nodes_.front() != 0.0 || nodes_.back() != 1.0)
        throw std::invalid_argument("GradedMesh: nodes must span [0,1]");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
        if (!(nodes_[i] < nodes_[i + 1]))
            throw std::invalid_argument("GradedMesh: nodes must be strictly increasing");

    auto locate = [&](double x) -> std::size_t {
        auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
        if (it == nodes_.end() || *it != x)
            throw std::invalid_argument("GradedMesh: required node missing");
        return static_cast<std::size_t>(it - nodes_.begin());
    };
    cusp_index_ = locate(cusp_);
    peak_index_ = locate(peak_);

    // Quasi-uniformity inside the graded zones.
    for (std::size_t i = 0; i + 2 < nodes_.size(); ++i) {
        const double w0 = nodes_[i + 1] - nodes_[i];
        const double w1 = nodes_[i + 2] - nodes_[i + 1];
        const double ratio = std::max(w0 / w1, w1 / w0);
        // The jump across the mandatory nodes c and a separates grading zones.
        if (i + 1 == cusp_index_ || i + 1 == peak_index_)
            continue;
        if (ratio > 4.0 + 1e-9)
            throw std::invalid_argument("GradedMesh: adjacent spacing ratio exceeds 4");
    }
}

std::size_t GradedMesh::find_panel(double x) const {
    if (x <= nodes_.front())
        return 0;
    if (x >= nodes_.back())
        return nodes_.size() - 2;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

}  // namespace cuspresp
