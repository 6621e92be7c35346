#pragma once

#include <span>
#include <string>
#include <vector>

namespace fvgrad {

/// One-dimensional weighted least-squares derivative with diagonal weights
/// |dx_f|^-q:  sum(dx dphi w^2) / sum(dx^2 w^2).
double derivative_diagonal(std::span<const double> dx, std::span<const double> dphi, double q);

/// Derivative from the reduced second-order equations
///   phi' (1/dx_{i+1} - 1/dx_1) = dphi_{i+1}/dx_{i+1}^2 - dphi_1/dx_1^2,
/// i = 1..F-1, solved by unweighted least squares. Exact for quadratics.
/// Requires F >= 2 neighbours.
double derivative_generalW(std::span<const double> dx, std::span<const double> dphi);

/// A derivative method of the 1D experiment: either a diagonal-weight
/// exponent q or the general (non-diagonal) weights matrix.
struct Method1D {
    bool general = false;
    double q = 0.0;

    std::string label() const; // "q1.5" or "G"
    static Method1D parse(const std::string& label);
};

/// Derivative-of-tanh benchmark: the base displacement stencil is halved
/// `halvings` times and each method's mean absolute derivative error over the
/// 101 sample points x = 0, 0.02, ..., 2 is recorded.
struct Experiment1D {
    std::vector<double> stencil;
    int halvings = 5;
    std::vector<Method1D> methods;
};

struct Experiment1DResult {
    std::vector<double> halving_factors;          // 2^-r
    // [halving][method]
    std::vector<std::vector<double>> mean_abs_error;
    // [pair][method], order between halvings r and r+1
    std::vector<std::vector<double>> observed_order;

    /// CSV with columns halving,method,mean_abs_error,observed_order (the
    /// order column holds the pair ending at that halving; blank on row 0).
    std::string csv(const Experiment1D& experiment) const;
};

Experiment1DResult run_experiment(const Experiment1D& experiment);

} // namespace fvgrad
