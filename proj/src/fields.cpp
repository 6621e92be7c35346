#include "fvgrad/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fvgrad {

AnalyticField AnalyticField::tanh2d() {
    return AnalyticField(
        "tanh2d", [](Vec2 p) { return std::tanh(p.x) * std::tanh(p.y); },
        [](Vec2 p) {
            const double tx = std::tanh(p.x), ty = std::tanh(p.y);
            return Vec2{(1.0 - tx * tx) * ty, (1.0 - ty * ty) * tx};
        });
}

AnalyticField AnalyticField::sin2d() {
    using std::numbers::pi;
    return AnalyticField(
        "sin2d", [](Vec2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); },
        [](Vec2 p) {
            return Vec2{pi * std::cos(pi * p.x) * std::sin(pi * p.y),
                        pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
        });
}

AnalyticField AnalyticField::tanh1d() {
    return AnalyticField(
        "tanh1d", [](Vec2 p) { return std::tanh(p.x); },
        [](Vec2 p) {
            const double tx = std::tanh(p.x);
            return Vec2{1.0 - tx * tx, 0.0};
        });
}

AnalyticField AnalyticField::linear(double a, double b, double c) {
    return AnalyticField(
        "linear", [a, b, c](Vec2 p) { return a + b * p.x + c * p.y; },
        [b, c](Vec2) { return Vec2{b, c}; });
}

AnalyticField AnalyticField::quadratic(double c00, double cx, double cy, double cxx, double cxy,
                                       double cyy) {
    return AnalyticField(
        "quadratic",
        [=](Vec2 p) {
            return c00 + cx * p.x + cy * p.y + cxx * p.x * p.x + cxy * p.x * p.y + cyy * p.y * p.y;
        },
        [=](Vec2 p) {
            return Vec2{cx + 2.0 * cxx * p.x + cxy * p.y, cy + cxy * p.x + 2.0 * cyy * p.y};
        });
}

AnalyticField AnalyticField::by_name(const std::string& name) {
    if (name == "tanh") return tanh2d();
    if (name == "sin") return sin2d();
    if (name == "linear") return linear(0.25, 1.5, -0.75);
    if (name == "quadratic") return quadratic(0.0, 0.5, -1.0, 1.0, 0.5, 1.0);
    throw std::invalid_argument("unknown field '" + name + "'");
}

ScalarField sample(const AnalyticField& field, const Mesh& mesh) {
    ScalarField s;
    s.cell.resize(mesh.cells.size());
    for (std::size_t c = 0; c < mesh.cells.size(); ++c)
        s.cell[c] = field.value(mesh.cells[c].centroid);
    s.boundary.resize(mesh.boundary_faces.size());
    for (std::size_t b = 0; b < mesh.boundary_faces.size(); ++b)
        s.boundary[b] = field.value(mesh.faces[mesh.boundary_faces[b]].centroid);
    return s;
}

GradientField exact_gradient(const AnalyticField& field, const Mesh& mesh) {
    GradientField g(mesh.cells.size());
    for (std::size_t c = 0; c < mesh.cells.size(); ++c)
        g[c] = field.gradient(mesh.cells[c].centroid);
    return g;
}

} // namespace fvgrad
