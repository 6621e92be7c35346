#include "fvgrad/ls1d.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fvgrad/errors.hpp"

namespace fvgrad {

double derivative_diagonal(std::span<const double> dx, std::span<const double> dphi, double q) {
    if (dx.empty()) throw std::invalid_argument("derivative_diagonal: empty stencil");
    if (dx.size() != dphi.size())
        throw std::invalid_argument("derivative_diagonal: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t f = 0; f < dx.size(); ++f) {
        if (dx[f] == 0.0) throw std::invalid_argument("derivative_diagonal: zero displacement");
        const double w2 = q == 0.0 ? 1.0 : std::exp(-2.0 * q * std::log(std::abs(dx[f])));
        num += dx[f] * dphi[f] * w2;
        den += dx[f] * dx[f] * w2;
    }
    return num / den;
}

double derivative_generalW(std::span<const double> dx, std::span<const double> dphi) {
    if (dx.size() < 2)
        throw std::invalid_argument("derivative_generalW needs at least 2 neighbours");
    if (dx.size() != dphi.size())
        throw std::invalid_argument("derivative_generalW: size mismatch");
    for (const double d : dx)
        if (d == 0.0) throw std::invalid_argument("derivative_generalW: zero displacement");
    // unweighted least squares on the F-1 reduced equations
    double num = 0.0, den = 0.0;
    const double inv1 = 1.0 / dx[0];
    const double r1 = dphi[0] / (dx[0] * dx[0]);
    for (std::size_t i = 1; i < dx.size(); ++i) {
        const double g = 1.0 / dx[i] - inv1;
        const double r = dphi[i] / (dx[i] * dx[i]) - r1;
        num += g * r;
        den += g * g;
    }
    if (!(den > 0.0))
        throw NumericalError("derivative_generalW: degenerate stencil (all displacements equal)");
    return num / den;
}

std::string Method1D::label() const {
    if (general) return "G";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "q%g", q);
    return buf;
}

Method1D Method1D::parse(const std::string& label) {
    if (label == "G" || label == "g") return Method1D{true, 0.0};
    if (!label.empty() && label[0] == 'q') return Method1D{false, std::stod(label.substr(1))};
    throw std::invalid_argument("unknown 1D method '" + label + "'");
}

Experiment1DResult run_experiment(const Experiment1D& experiment) {
    if (experiment.stencil.empty()) throw std::invalid_argument("experiment stencil is empty");
    if (experiment.halvings < 0) throw std::invalid_argument("halvings must be >= 0");
    if (experiment.methods.empty()) throw std::invalid_argument("no methods selected");

    constexpr int kPoints = 101; // x = 0, 0.02, ..., 2.0
    const std::size_t nm = experiment.methods.size();

    Experiment1DResult result;
    result.mean_abs_error.assign(experiment.halvings + 1, std::vector<double>(nm, 0.0));
    result.halving_factors.resize(experiment.halvings + 1);

    std::vector<double> dx(experiment.stencil.size());
    std::vector<double> dphi(experiment.stencil.size());
    for (int r = 0; r <= experiment.halvings; ++r) {
        const double factor = std::ldexp(1.0, -r);
        result.halving_factors[r] = factor;
        for (std::size_t f = 0; f < dx.size(); ++f) dx[f] = experiment.stencil[f] * factor;
        std::vector<double> err_sum(nm, 0.0);
        for (int i = 0; i < kPoints; ++i) {
            const double x0 = 0.02 * i;
            const double phi0 = std::tanh(x0);
            const double exact = 1.0 - phi0 * phi0;
            for (std::size_t f = 0; f < dx.size(); ++f)
                dphi[f] = std::tanh(x0 + dx[f]) - phi0;
            for (std::size_t m = 0; m < nm; ++m) {
                const Method1D& method = experiment.methods[m];
                const double d = method.general ? derivative_generalW(dx, dphi)
                                                : derivative_diagonal(dx, dphi, method.q);
                err_sum[m] += std::abs(d - exact);
            }
        }
        for (std::size_t m = 0; m < nm; ++m)
            result.mean_abs_error[r][m] = err_sum[m] / kPoints;
    }

    result.observed_order.assign(std::max(0, experiment.halvings),
                                 std::vector<double>(nm, 0.0));
    for (int r = 0; r + 1 <= experiment.halvings; ++r)
        for (std::size_t m = 0; m < nm; ++m)
            result.observed_order[r][m] =
                std::log2(result.mean_abs_error[r][m] / result.mean_abs_error[r + 1][m]);
    return result;
}

std::string Experiment1DResult::csv(const Experiment1D& experiment) const {
    std::string out = "halving,method,mean_abs_error,observed_order\n";
    char buf[96];
    for (std::size_t r = 0; r < mean_abs_error.size(); ++r) {
        for (std::size_t m = 0; m < experiment.methods.size(); ++m) {
            if (r == 0)
                std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,\n", r,
                              experiment.methods[m].label().c_str(), mean_abs_error[r][m]);
            else
                std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,%.17g\n", r,
                              experiment.methods[m].label().c_str(), mean_abs_error[r][m],
                              observed_order[r - 1][m]);
            out += buf;
        }
    }
    return out;
}

} // namespace fvgrad
