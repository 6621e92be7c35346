#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fvgrad/mesh.hpp"

namespace fvgrad {

/// Closed-form test field with its exact gradient.
class AnalyticField {
public:
    AnalyticField(std::string name, std::function<double(Vec2)> value,
                  std::function<Vec2(Vec2)> gradient)
        : name_(std::move(name)), value_(std::move(value)), gradient_(std::move(gradient)) {}

    static AnalyticField tanh2d();  // tanh(x) tanh(y)
    static AnalyticField sin2d();   // sin(pi x) sin(pi y)
    static AnalyticField tanh1d();  // tanh(x), constant in y
    static AnalyticField linear(double a, double b, double c); // a + b x + c y
    /// c00 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2
    static AnalyticField quadratic(double c00, double cx, double cy, double cxx, double cxy,
                                   double cyy);
    static AnalyticField constant(double a) { return linear(a, 0.0, 0.0); }

    static AnalyticField by_name(const std::string& name); // tanh|sin|linear|quadratic

    double value(Vec2 p) const { return value_(p); }
    Vec2 gradient(Vec2 p) const { return gradient_(p); }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::function<double(Vec2)> value_;
    std::function<Vec2(Vec2)> gradient_;
};

/// Cell-centre values plus boundary-face-centre values; boundary values are
/// indexed by Mesh::boundary_index.
struct ScalarField {
    std::vector<double> cell;
    std::vector<double> boundary;
};

using GradientField = std::vector<Vec2>;

ScalarField sample(const AnalyticField& field, const Mesh& mesh);
GradientField exact_gradient(const AnalyticField& field, const Mesh& mesh);

} // namespace fvgrad
