#pragma once

#include <span>
#include <string>

#include "fvgrad/fields.hpp"
#include "fvgrad/mesh.hpp"

namespace fvgrad {

/// Selection of a cell-gradient operator.
struct SchemeConfig {
    enum class Kind { green_gauss, least_squares };

    Kind scheme = Kind::green_gauss;
    int correctors = 0;             // Green-Gauss skewness corrector steps (<= 8)
    double weight_exponent = 1.0;   // least-squares q, weights ||N_f - P||^-q
    bool interface_weight_mod = false; // 1/sqrt(2) on coarse-side interface faces
    bool boundary_in_stencil = true;   // include boundary faces in LS stencils

    std::string label() const; // "gg:d1", "ls:q1.5", "ls:q2:iw", ...
    static SchemeConfig parse(const std::string& label);
};

/// Second-order linear interpolation to the foot point c'_f of an interior
/// face; boundary faces return the stored boundary value at c_f.
double interpolate_face(const Mesh& mesh, const ScalarField& field, int face);

/// Divergence-theorem (Green-Gauss) gradient with `correctors` skewness
/// corrector steps. The predictor uses the interpolated values at c'_f; each
/// corrector step rebuilds the face values as
///   phi_hat(c_f) = phi_bar(c'_f) + grad_bar(c'_f) . (c_f - c'_f)
/// with the previous step's gradients interpolated to c'_f, and re-applies
/// the surface sum. Boundary faces always use the known boundary value.
GradientField green_gauss(const Mesh& mesh, const ScalarField& field, int correctors);

/// Weighted least-squares gradient from the closed-form 2x2 normal equations.
/// Stencil entries are the displacements to interior neighbour centroids and
/// (by default) to boundary face centres, with squared weights
/// ||dr||^(-2q), halved on faces of a coarse cell that touch a finer level
/// when `interface_weight_mod` is set.
GradientField least_squares(const Mesh& mesh, const ScalarField& field, double weight_exponent,
                            bool interface_weight_mod = false, bool boundary_in_stencil = true);

GradientField compute_gradient(const Mesh& mesh, const ScalarField& field,
                               const SchemeConfig& config);

/// One weighted Taylor-expansion equation of a least-squares stencil.
struct LsEntry {
    double dx;
    double dy;
    double dphi;
    double w2; // squared weight
};

/// Closed-form solution of the weighted 2x2 normal equations. Throws
/// NumericalError naming `label` when the stencil is rank deficient
/// (determinant below 1e-14 of its scale).
Vec2 ls_solve(std::span<const LsEntry> stencil, const std::string& label);

/// Squared weight |dr|^(-2q), evaluated as exp(-2 q ln dr) so fractional
/// exponents never need square roots.
double ls_weight_sq(double dr, double q);

/// Central-difference reference gradient for a cell whose four neighbours
/// form the parallelogram structure (two opposite spanning vectors). Used as
/// the oracle for the reduction claims; throws if the structure is not
/// detected.
Vec2 reference_parallelogram_gradient(const Mesh& mesh, const ScalarField& field, int cell);

} // namespace fvgrad
